#include "wdk/gdisplay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wdk {

using nlohmann::json;

// ------------------------------------------------------------------ data

namespace {

size_t tensor_size(int h, int k) {
    size_t s = 1;
    for (int i = 0; i < k; ++i) s *= static_cast<size_t>(h);
    return s;
}

// Digits of a flat tensor index, most significant first.
std::vector<int> index_digits(size_t idx, int h, int k) {
    std::vector<int> d(k);
    for (int f = k - 1; f >= 0; --f) {
        d[f] = static_cast<int>(idx % h);
        idx /= h;
    }
    return d;
}

size_t index_of(const std::vector<int>& d, int h) {
    size_t idx = 0;
    for (int x : d) idx = idx * h + x;
    return idx;
}

}  // namespace

HodgeEmbeddingDatum HodgeEmbeddingDatum::gl(int h, int d) {
    HodgeEmbeddingDatum D;
    D.h = h;
    D.d = d;
    D.validate();
    return D;
}

HodgeEmbeddingDatum HodgeEmbeddingDatum::gl2_determinant() {
    HodgeEmbeddingDatum D;
    D.h = 2;
    D.d = 1;
    D.tensors.push_back(Tensor{0, 2, {0, 1, -1, 0}, 0, "determinant form"});
    D.validate();
    return D;
}

HodgeEmbeddingDatum HodgeEmbeddingDatum::symplectic(int g) {
    HodgeEmbeddingDatum D;
    D.h = 2 * g;
    D.d = g;
    Tensor J{0, 2, std::vector<i64>(tensor_size(D.h, 2), 0), 0, "symplectic form"};
    for (int i = 0; i < g; ++i) {
        J.coords[static_cast<size_t>(i) * D.h + g + i] = 1;
        J.coords[static_cast<size_t>(g + i) * D.h + i] = -1;
    }
    D.tensors.push_back(J);
    D.validate();
    return D;
}

void HodgeEmbeddingDatum::validate() {
    if (h < 1 || d < 0 || d > h) throw std::invalid_argument("datum: need 0 <= d <= h and h >= 1");
    std::vector<int> expect(d, 0);
    expect.resize(h, 1);
    if (mu.empty()) mu = expect;
    if (mu != expect) throw std::invalid_argument("datum: mu must list d zeros followed by h - d ones");
    for (auto& s : tensors) {
        if (s.m < 0 || s.n < 0 || s.m + s.n == 0) throw std::invalid_argument("datum: tensor type (m, n) must be nonzero");
        if (s.coords.size() != tensor_size(h, s.m + s.n)) throw std::invalid_argument("datum: tensor has wrong number of coordinates");
        std::optional<int> w;
        for (size_t i = 0; i < s.coords.size(); ++i) {
            if (s.coords[i] == 0) continue;
            auto dg = index_digits(i, h, s.m + s.n);
            int wi = 0;
            for (int f = 0; f < s.m + s.n; ++f) wi += f < s.m ? mu[dg[f]] : -mu[dg[f]];
            if (w && *w != wi) throw std::invalid_argument("datum: tensor is not homogeneous for mu");
            w = wi;
        }
        if (!w) throw std::invalid_argument("datum: zero tensor");
        s.weight = *w;
    }
}

HodgeEmbeddingDatum HodgeEmbeddingDatum::from_json(const json& j) {
    HodgeEmbeddingDatum D;
    if (j.contains("preset")) {
        const std::string p = j.at("preset").get<std::string>();
        if (p == "GL") return gl(j.at("h").get<int>(), j.at("d").get<int>());
        if (p == "GL2-det") return gl2_determinant();
        if (p == "GSp") return symplectic(j.at("g").get<int>());
        throw std::invalid_argument("datum: unknown preset " + p);
    }
    D.h = j.at("h").get<int>();
    D.d = j.at("d").get<int>();
    if (j.contains("mu")) D.mu = j.at("mu").get<std::vector<int>>();
    for (auto& t : j.value("tensors", json::array())) {
        Tensor s;
        s.m = t.at("m").get<int>();
        s.n = t.at("n").get<int>();
        s.coords = t.at("coords").get<std::vector<i64>>();
        s.name = t.value("name", "");
        D.tensors.push_back(std::move(s));
    }
    D.validate();
    return D;
}

json HodgeEmbeddingDatum::to_json() const {
    json t = json::array();
    for (auto& s : tensors) t.push_back({{"m", s.m}, {"n", s.n}, {"coords", s.coords}, {"weight", s.weight}, {"name", s.name}});
    return {{"h", h}, {"d", d}, {"mu", mu}, {"tensors", t}};
}

std::vector<Elem> tensor_in(RingPtr R, const Tensor& s) {
    std::vector<Elem> v;
    v.reserve(s.coords.size());
    for (i64 c : s.coords) v.push_back(R->from_int(c));
    return v;
}

std::vector<WittVec> tensor_in(RingPtr R, int m, const Tensor& s) {
    std::vector<WittVec> v;
    v.reserve(s.coords.size());
    std::map<i64, WittVec> memo;
    for (i64 c : s.coords) {
        auto it = memo.find(c);
        if (it == memo.end()) it = memo.emplace(c, WittVec::from_int(R, m, c)).first;
        v.push_back(it->second);
    }
    return v;
}

namespace {

template <class T, class Lift>
bool fixes_all(const Matrix<T>& g, const HodgeEmbeddingDatum& D, Lift lift) {
    if (g.rows() != D.h || !g.is_square()) throw std::invalid_argument("fixes_tensors: matrix size differs from h");
    if (D.tensors.empty()) return is_invertible(g);
    Matrix<T> ginv;
    try {
        ginv = inverse(g);
    } catch (const NotInvertible&) {
        return false;
    }
    const Matrix<T> dual = ginv.transpose();
    for (auto& s : D.tensors) {
        auto v = lift(s);
        if (tensor_action(g, dual, s.m, s.n, v) != v) return false;
    }
    return true;
}

}  // namespace

bool fixes_tensors(const EMat& g, const HodgeEmbeddingDatum& D) {
    RingPtr R = g.zero().ring();
    return fixes_all(g, D, [&](const Tensor& s) { return tensor_in(R, s); });
}

bool fixes_tensors(const WMat& g, const HodgeEmbeddingDatum& D) {
    RingPtr R = g.zero().ring();
    const int m = g.zero().length();
    return fixes_all(g, D, [&](const Tensor& s) { return tensor_in(R, m, s); });
}

// ------------------------------------------------------ display group

namespace {

WMat weight_diag(const HodgeEmbeddingDatum& D, RingPtr R, int m, int on_weight) {
    WittVec p = WittVec::from_int(R, m, R->p()), one = WittVec::one(R, m);
    std::vector<WittVec> d;
    for (int w : D.mu) d.push_back(w == on_weight ? p : one);
    return WMat::diagonal(d, WittVec::zero(R, m));
}

}  // namespace

WMat mu_of_p(const HodgeEmbeddingDatum& D, RingPtr R, int m) { return weight_diag(D, R, m, 1); }
WMat mu_of_p_dual(const HodgeEmbeddingDatum& D, RingPtr R, int m) { return weight_diag(D, R, m, 0); }

DisplayGroupElement make_display_group_element(const HodgeEmbeddingDatum& D, const WMat& g) {
    if (g.rows() != D.h || !g.is_square()) throw std::invalid_argument("display group: matrix size differs from h");
    if (g.zero().length() < 2) throw PrecisionError("display group elements need Witt length >= 2");
    for (int i = 0; i < D.d; ++i)
        for (int j = D.d; j < D.h; ++j)
            if (!in_augmentation_ideal(g(i, j)))
                throw std::invalid_argument("display group: the (L0, L1) block must lie in I(R)");
    return DisplayGroupElement{g};
}

bool in_display_group(const DisplayGroupElement& g, const HodgeEmbeddingDatum& D) {
    for (int i = 0; i < D.d; ++i)
        for (int j = D.d; j < D.h; ++j)
            if (!in_augmentation_ideal(g.g(i, j))) return false;
    return fixes_tensors(g.g, D);
}

WMat tau_of(const DisplayGroupElement& g) { return w_truncate(g.g, g.length()); }

WMat sigma_of(const DisplayGroupElement& g, const HodgeEmbeddingDatum& D) {
    const int m = g.length();
    RingPtr R = g.g.zero().ring();
    WMat s(D.h, D.h, WittVec::zero(R, m));
    for (int i = 0; i < D.h; ++i)
        for (int j = 0; j < D.h; ++j) {
            const WittVec& x = g.g(i, j);
            const int wi = D.mu[i], wj = D.mu[j];
            if (wi == 0 && wj == 1) s(i, j) = verschiebung_inverse(x);  // sigma_1 on I(R)
            else {
                WittVec fx = frobenius_to(x, m);
                s(i, j) = (wi == 1 && wj == 0) ? fx.times_int(R->p()) : fx;
            }
        }
    return s;
}

DisplayGroupElement operator*(const DisplayGroupElement& a, const DisplayGroupElement& b) { return DisplayGroupElement{a.g * b.g}; }

WMat mu_action(const WMat& U, const DisplayGroupElement& h, const HodgeEmbeddingDatum& D) {
    if (U.zero().length() != h.length()) throw PrecisionError("mu_action: h must have Witt length one more than U");
    return inverse(tau_of(h)) * U * sigma_of(h, D);
}

// --------------------------------------------------------- Lie algebra

namespace {

struct KernelResult {
    std::vector<std::vector<i64>> basis;  // over the given columns
    std::vector<int> free_cols;
};

i64 modp(i64 a, i64 N) {
    a %= N;
    return a < 0 ? a + N : a;
}

// Saturated kernel of an integer system over Z/N, N = p^M, using only unit
// pivots. Throws when a non-unit residual row remains, since then the
// solution module is not free of the expected rank at every precision.
KernelResult unit_pivot_kernel(std::vector<std::vector<i64>> A, int ncols, int p, i64 N) {
    for (auto& row : A)
        for (auto& x : row) x = modp(x, N);
    const int nrows = static_cast<int>(A.size());
    std::vector<int> pivot_col_of_row;
    std::vector<bool> is_pivot(ncols, false);
    int r = 0;
    while (r < nrows) {
        int pr = -1, pc = -1;
        for (int i = r; i < nrows && pr < 0; ++i)
            for (int c = 0; c < ncols; ++c)
                if (!is_pivot[c] && A[i][c] % p != 0) {
                    pr = i;
                    pc = c;
                    break;
                }
        if (pr < 0) break;
        std::swap(A[r], A[pr]);
        const i64 inv = powmod(A[r][pc], static_cast<std::uint64_t>(N / p * (p - 1) - 1), N);  // unit inverse mod p^M
        for (auto& x : A[r]) x = mulmod(x, inv, N);
        for (int i = 0; i < nrows; ++i) {
            if (i == r || A[i][pc] == 0) continue;
            const i64 f = A[i][pc];
            for (int c = 0; c < ncols; ++c) A[i][c] = modp(A[i][c] - mulmod(f, A[r][c], N), N);
        }
        is_pivot[pc] = true;
        pivot_col_of_row.push_back(pc);
        ++r;
    }
    for (int i = r; i < nrows; ++i)
        for (int c = 0; c < ncols; ++c)
            if (A[i][c] != 0) throw std::invalid_argument("tensor stabilizer equations are not solvable with unit pivots; the datum is ill-posed");
    KernelResult K;
    for (int f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<i64> v(ncols, 0);
        v[f] = 1;
        for (int i = 0; i < r; ++i) v[pivot_col_of_row[i]] = modp(-A[i][f], N);
        K.basis.push_back(std::move(v));
        K.free_cols.push_back(f);
    }
    return K;
}

i64 symmetric(i64 a, i64 N) { return a > N / 2 ? a - N : a; }

// Rows: the derivation action of X on each tensor, one row per output coordinate.
std::vector<std::vector<i64>> stabilizer_equations(const HodgeEmbeddingDatum& D) {
    const int h = D.h;
    std::vector<std::vector<i64>> rows;
    for (auto& s : D.tensors) {
        const int k = s.m + s.n;
        const size_t sz = s.coords.size();
        for (size_t I = 0; I < sz; ++I) {
            std::vector<i64> row(static_cast<size_t>(h) * h, 0);
            auto dg = index_digits(I, h, k);
            for (int f = 0; f < k; ++f) {
                auto src = dg;
                for (int b = 0; b < h; ++b) {
                    src[f] = b;
                    const i64 c = s.coords[index_of(src, h)];
                    if (c == 0) continue;
                    if (f < s.m) row[static_cast<size_t>(dg[f]) * h + b] += c;   // X(I_f, b)
                    else row[static_cast<size_t>(b) * h + dg[f]] -= c;           // -X^t(I_f, b)
                }
            }
            if (std::any_of(row.begin(), row.end(), [](i64 x) { return x != 0; })) rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace

std::vector<int> LieAlgebra::of_weight(int w) const {
    std::vector<int> out;
    for (int i = 0; i < dimension(); ++i)
        if (weight[i] == w) out.push_back(i);
    return out;
}

LieAlgebra lie_algebra(const HodgeEmbeddingDatum& D) {
    const int h = D.h;
    LieAlgebra L;
    L.h = h;
    const auto rows = stabilizer_equations(D);
    for (int w : {-1, 0, 1}) {
        std::vector<int> cols;  // positions a*h+b with mu_a - mu_b = w
        for (int a = 0; a < h; ++a)
            for (int b = 0; b < h; ++b)
                if (D.mu[a] - D.mu[b] == w) cols.push_back(a * h + b);
        if (cols.empty()) continue;
        std::vector<std::vector<i64>> sub;
        for (auto& row : rows) {
            std::vector<i64> r2;
            bool nz = false;
            for (int c : cols) {
                r2.push_back(row[c]);
                nz = nz || row[c] != 0;
            }
            if (nz) sub.push_back(std::move(r2));
        }
        // Solve over Z/2^61 and Z/3^38: a unit-pivot solution valid for two
        // primes with small symmetric representatives is the integral one.
        KernelResult K2 = unit_pivot_kernel(sub, static_cast<int>(cols.size()), 2, ipow(2, 61));
        KernelResult K3 = unit_pivot_kernel(sub, static_cast<int>(cols.size()), 3, ipow(3, 38));
        if (K2.free_cols != K3.free_cols) throw std::invalid_argument("tensor stabilizer rank depends on the prime; the datum is ill-posed");
        for (size_t k = 0; k < K2.basis.size(); ++k) {
            std::vector<i64> X(static_cast<size_t>(h) * h, 0);
            for (size_t c = 0; c < cols.size(); ++c) {
                const i64 v2 = symmetric(K2.basis[k][c], ipow(2, 61)), v3 = symmetric(K3.basis[k][c], ipow(3, 38));
                if (v2 != v3) throw std::invalid_argument("tensor stabilizer has no small integral basis");
                X[cols[c]] = v2;
            }
            L.basis.push_back(std::move(X));
            L.weight.push_back(w);
            L.free_position.push_back(cols[K2.free_cols[k]]);
        }
    }
    return L;
}

// ----------------------------------------------------------- slopes

std::string rational_str(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

json NewtonPolygon::to_json() const {
    json a = json::array();
    for (auto& [s, k] : slopes) a.push_back(json::array({rational_str(s), k}));
    return a;
}

std::string NewtonPolygon::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < slopes.size(); ++i) os << (i ? " " : "") << rational_str(slopes[i].first) << "^" << slopes[i].second;
    return os.str();
}

Rational NewtonPolygon::min_slope() const {
    if (slopes.empty()) throw std::logic_error("empty Newton polygon");
    return slopes.front().first;
}

Rational NewtonPolygon::max_slope() const {
    if (slopes.empty()) throw std::logic_error("empty Newton polygon");
    return slopes.back().first;
}

int max_precision(int p) {
    int M = 0;
    double lim = std::log(2.0) * 61;
    while ((M + 1) * std::log(static_cast<double>(p)) < lim) ++M;
    return M;
}

NewtonPolygon newton_slopes(const Isocrystal& X, int guard) {
    RingPtr G = X.ring();
    if (G->nvars() != 0) throw std::invalid_argument("newton_slopes: the isocrystal must live over W(F_q)");
    const int n = X.A.rows();
    const int M = G->char_exp();
    const int r = G->r();
    if (n == 0) return {};
    // The r-fold norm A sigma(A) ... sigma^{r-1}(A) is linear; its slopes are r times those of phi.
    EMat N = X.A, s = X.A;
    for (int k = 1; k < r; ++k) {
        s = s.map([&](const Elem& a) { return G->frobenius(a); });
        N = N * s;
    }
    const auto c = charpoly(N);
    std::vector<int> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = G->valuation(c[i]);
    if (v[0] >= M) throw PrecisionError("newton_slopes: determinant vanishes at precision " + std::to_string(M));
    // lower convex hull of the known points (i, v_i)
    std::vector<int> hull;
    for (int i = 0; i <= n; ++i) {
        if (v[i] >= M) continue;
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2], b = hull.back();
            // drop b if it lies on or above segment a -> i
            if (static_cast<i64>(v[b] - v[a]) * (i - a) >= static_cast<i64>(v[i] - v[a]) * (b - a)) hull.pop_back();
            else break;
        }
        hull.push_back(i);
    }
    for (int idx : hull)
        if (v[idx] > M - guard) throw PrecisionError("newton_slopes: a Newton vertex is within the precision guard");
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        const int a = hull[k], b = hull[k + 1];
        for (int i = a + 1; i < b; ++i) {
            if (v[i] < M) continue;
            // the unknown coefficient must sit safely above the hull
            const Rational y = Rational(v[a]) + Rational(v[b] - v[a], b - a) * (i - a);
            if (y > Rational(M - guard)) throw PrecisionError("newton_slopes: precision too low to locate the Newton polygon");
        }
    }
    std::map<Rational, int> mult;
    for (size_t k = 0; k + 1 < hull.size(); ++k) {
        const int a = hull[k], b = hull[k + 1];
        const Rational root_val = Rational(v[a] - v[b], b - a) / r - X.denominator_exp;
        mult[root_val] += b - a;
    }
    NewtonPolygon P;
    for (auto& [s, k] : mult) P.slopes.emplace_back(s, k);
    return P;
}

namespace {

SlopeResult slopes_or_error(const Isocrystal& X, int guard) {
    SlopeResult out;
    try {
        out.polygon = newton_slopes(X, guard);
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

std::vector<SlopeResult> newton_slopes_batch(const std::vector<Isocrystal>& xs, int guard) {
    std::vector<SlopeResult> out(xs.size());
    const long n = static_cast<long>(xs.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[i] = slopes_or_error(xs[i], guard);
    return out;
}

std::vector<SlopeResult> newton_slopes_batch_serial(const std::vector<Isocrystal>& xs, int guard) {
    std::vector<SlopeResult> out;
    out.reserve(xs.size());
    for (auto& x : xs) out.push_back(slopes_or_error(x, guard));
    return out;
}

// ------------------------------------------------- framing and adjoint

EMat to_galois(const WMat& U, int M) {
    RingPtr k = U.zero().ring();
    if (!k->is_field()) throw std::invalid_argument("to_galois: the base must be a finite field");
    RingPtr G = k->galois_of_length(M);
    return U.map([&](const WittVec& x) { return witt_to_galois(x, G); });
}

WMat galois_to_witt_matrix(const EMat& U, int m) {
    return U.map([&](const Elem& x) { return galois_to_witt(x, m); });
}

EMat lift_to_galois(const WMat& U, const HodgeEmbeddingDatum& D, int M) {
    if (U.rows() != D.h) throw std::invalid_argument("U has the wrong size for the datum");
    const int m = U.zero().length();
    RingPtr k = U.zero().ring();
    const int target = M > 0 ? M : max_precision(k->p());
    EMat lifted = to_galois(U, target);
    if (target <= m || fixes_tensors(lifted, D)) return lifted;
    if (M > 0) throw PrecisionError("U determines an element of G only modulo p^" + std::to_string(m));
    return to_galois(U, m);
}

Isocrystal framing_element(const EMat& U, const HodgeEmbeddingDatum& D) {
    if (U.rows() != D.h) throw std::invalid_argument("U has the wrong size for the datum");
    EMat b = U;
    RingPtr G = U.zero().ring();
    const Elem p = G->from_int(G->p());
    for (int i = 0; i < D.h; ++i)
        for (int j = 0; j < D.h; ++j)
            if (D.mu[j] == 1) b(i, j) = b(i, j) * p;
    return Isocrystal{b, 0};
}

Isocrystal framing_element(const WMat& U, const HodgeEmbeddingDatum& D, int M) {
    return framing_element(lift_to_galois(U, D, M), D);
}

Isocrystal adjoint_isocrystal(const EMat& Ug, const HodgeEmbeddingDatum& D) {
    if (Ug.rows() != D.h) throw std::invalid_argument("U has the wrong size for the datum");
    const LieAlgebra L = lie_algebra(D);
    RingPtr G = Ug.zero().ring();
    const EMat Uinv = inverse(Ug);
    const int h = D.h, n = L.dimension();
    const Elem p = G->from_int(G->p());
    EMat A(n, n, G->zero());
    for (int c = 0; c < n; ++c) {
        // p Ad(b)(E) = U mu(p) E (p mu(p)^{-1}) U^{-1}; E is integral so sigma(E) = E.
        EMat E(h, h, G->zero());
        for (int a = 0; a < h; ++a)
            for (int b = 0; b < h; ++b) {
                i64 x = L.basis[c][static_cast<size_t>(a) * h + b];
                if (x == 0) continue;
                Elem e = G->from_int(x);
                if (D.mu[a] == 1) e = e * p;  // left factor mu(p)
                if (D.mu[b] == 0) e = e * p;  // right factor p mu(p)^{-1}
                E(a, b) = e;
            }
        const EMat Y = Ug * E * Uinv;
        // coordinates: read off at the free positions, then verify
        EMat rest = Y;
        for (int r = 0; r < n; ++r) {
            const int pos = L.free_position[r];
            const Elem y = Y(pos / h, pos % h);
            A(r, c) = y;
            if (y.is_zero()) continue;
            for (int a = 0; a < h; ++a)
                for (int b = 0; b < h; ++b) {
                    i64 x = L.basis[r][static_cast<size_t>(a) * h + b];
                    if (x != 0) rest(a, b) = rest(a, b) - y.scaled(x);
                }
        }
        if (!rest.is_zero()) throw std::invalid_argument("adjoint action leaves the Lie algebra: U does not fix the tensors");
    }
    return Isocrystal{A, 1};
}

Isocrystal adjoint_isocrystal(const WMat& U, const HodgeEmbeddingDatum& D, int M) {
    return adjoint_isocrystal(lift_to_galois(U, D, M), D);
}

NewtonPolygon adjoint_slopes(const EMat& U, const HodgeEmbeddingDatum& D) { return newton_slopes(adjoint_isocrystal(U, D)); }

NewtonPolygon adjoint_slopes(const WMat& U, const HodgeEmbeddingDatum& D, int M) {
    return newton_slopes(adjoint_isocrystal(residue_matrix(U), D, M));
}

namespace {

bool above_minus_one(const NewtonPolygon& P) { return P.slopes.empty() || P.min_slope() > Rational(-1); }

}  // namespace

bool adjoint_nilpotence(const EMat& U, const HodgeEmbeddingDatum& D) { return above_minus_one(adjoint_slopes(U, D)); }

bool adjoint_nilpotence(const WMat& U, const HodgeEmbeddingDatum& D, int M) { return above_minus_one(adjoint_slopes(U, D, M)); }

bool nilpotent_wrt_eta(const WMat& U, const HodgeEmbeddingDatum& D) {
    if (U.rows() != D.h) throw std::invalid_argument("U has the wrong size for the datum");
    Window W;
    W.rank0 = D.d;
    W.rank1 = D.h - D.d;
    W.psi = U;
    return zink_nilpotence(W);
}

WMat residue_matrix(const WMat& U) {
    RingPtr R = U.zero().ring();
    if (R->is_field()) return U;
    RingPtr k = R->residue_field();
    return w_map(RingHom::reduction(R, k), U);
}

// ---------------------------------------------------------- sampling

namespace {

// Integral matrix sum_k a_k X_k over W_m(R).
WMat combine(const LieAlgebra& L, const std::vector<int>& idx, const std::vector<WittVec>& coeff, const WittVec& zero) {
    const int h = L.h;
    WMat N(h, h, zero);
    for (size_t t = 0; t < idx.size(); ++t)
        for (int a = 0; a < h; ++a)
            for (int b = 0; b < h; ++b) {
                const i64 x = L.basis[idx[t]][static_cast<size_t>(a) * h + b];
                if (x != 0) N(a, b) = N(a, b) + coeff[t].times_int(x);
            }
    return N;
}

// Teichmuller representatives zeta^{e_i} in the coefficient ring of R, with
// exponents e chosen so that diag(...) fixes every tensor.
std::vector<Elem> random_torus_entries(const HodgeEmbeddingDatum& D, RingPtr R, Rng& rng) {
    RingPtr k = R->residue_field();
    RingPtr C = R->is_coefficient_ring() ? R : R->coefficient_ring();
    const i64 order = k->q() - 1;
    Elem zeta = k->gen();
    if (k->r() == 1) {
        // a generator of F_p^*
        for (i64 a = 1; a < k->q(); ++a) {
            Elem z = k->from_int(a), x = z;
            i64 ord = 1;
            for (; !(x == k->one()); ++ord) x = x * z;
            if (ord == order) {
                zeta = z;
                break;
            }
        }
    }
    std::uniform_int_distribution<i64> pick(0, std::max<i64>(order - 1, 0));
    std::vector<i64> e(D.h, 0);
    for (int attempt = 0; attempt < 500; ++attempt) {
        for (auto& x : e) x = pick(rng);
        bool ok = true;
        for (auto& s : D.tensors) {
            for (size_t i = 0; i < s.coords.size() && ok; ++i) {
                if (s.coords[i] == 0) continue;
                auto dg = index_digits(i, D.h, s.m + s.n);
                i64 tot = 0;
                for (int f = 0; f < s.m + s.n; ++f) tot += f < s.m ? e[dg[f]] : -e[dg[f]];
                if (order > 0 && ((tot % order) + order) % order != 0) ok = false;
            }
        }
        if (ok) break;
        std::fill(e.begin(), e.end(), 0);
    }
    std::vector<Elem> out;
    for (i64 x : e) {
        Elem c = C->teichmuller(zeta.pow(static_cast<std::uint64_t>(x)));
        out.push_back(R->is_coefficient_ring() ? c : R->embed_coeff(c));
    }
    return out;
}

WMat random_torus(const HodgeEmbeddingDatum& D, RingPtr R, int m, Rng& rng) {
    std::vector<WittVec> d;
    for (auto& c : random_torus_entries(D, R, rng)) d.push_back(WittVec::teichmuller(c, m));
    return WMat::diagonal(d, WittVec::zero(R, m));
}

EMat unipotent_galois(const LieAlgebra& L, int weight, RingPtr G, Rng& rng) {
    const int h = L.h;
    EMat N = EMat::identity(h, G->zero());
    for (int k : L.of_weight(weight)) {
        Elem a = random_elem(G, rng);
        for (int i = 0; i < h * h; ++i)
            if (L.basis[k][i] != 0) N(i / h, i % h) = N(i / h, i % h) + a.scaled(L.basis[k][i]);
    }
    return N;
}

WMat unipotent(const LieAlgebra& L, int weight, RingPtr R, int m, bool in_I, Rng& rng) {
    auto idx = L.of_weight(weight);
    std::vector<WittVec> coeff;
    for (size_t t = 0; t < idx.size(); ++t) {
        WittVec a = random_witt(R, m, rng);
        if (in_I) a = verschiebung(a);
        coeff.push_back(a);
    }
    WittVec zero = WittVec::zero(R, m);
    return WMat::identity(L.h, zero) + combine(L, idx, coeff, zero);
}

bool full_gl(const LieAlgebra& L) { return L.dimension() == L.h * L.h; }

}  // namespace

WMat random_group_element(const HodgeEmbeddingDatum& D, RingPtr R, int m, Rng& rng) {
    const LieAlgebra L = lie_algebra(D);
    if (full_gl(L)) return random_witt_invertible(R, m, D.h, rng);
    WMat g = random_torus(D, R, m, rng);
    for (int k = 0; k < 3; ++k) g = g * unipotent(L, -1, R, m, false, rng) * unipotent(L, 1, R, m, false, rng);
    return g;
}

DisplayGroupElement random_display_group_element(const HodgeEmbeddingDatum& D, RingPtr R, int m, Rng& rng) {
    const int len = m + 1;
    const LieAlgebra L = lie_algebra(D);
    WMat g(D.h, D.h, WittVec::zero(R, len));
    if (full_gl(L)) {
        g = random_witt_invertible(R, len, D.h, rng);
        for (int i = 0; i < D.d; ++i)
            for (int j = D.d; j < D.h; ++j) g(i, j) = verschiebung(g(i, j));
        if (!is_invertible(g)) {
            // block lower-triangular with invertible diagonal blocks is always invertible
            for (int i = 0; i < D.d; ++i)
                for (int j = D.d; j < D.h; ++j) g(i, j) = WittVec::zero(R, len);
            WMat a = random_witt_invertible(R, len, D.d, rng), d = random_witt_invertible(R, len, D.h - D.d, rng);
            g.set_block(0, 0, a);
            g.set_block(D.d, D.d, d);
        }
    } else {
        g = random_torus(D, R, len, rng);
        for (int k = 0; k < 2; ++k) g = g * unipotent(L, 1, R, len, false, rng) * unipotent(L, -1, R, len, true, rng);
    }
    return make_display_group_element(D, g);
}

EMat random_group_element_galois(const HodgeEmbeddingDatum& D, RingPtr G, Rng& rng) {
    if (!G->is_coefficient_ring()) throw std::invalid_argument("random_group_element_galois: need W_M(F_q)");
    const LieAlgebra L = lie_algebra(D);
    if (full_gl(L)) return random_invertible(G, D.h, rng);
    EMat g = EMat::diagonal(random_torus_entries(D, G, rng), G->zero());
    for (int k = 0; k < 3; ++k) g = g * unipotent_galois(L, -1, G, rng) * unipotent_galois(L, 1, G, rng);
    return g;
}

}  // namespace wdk
