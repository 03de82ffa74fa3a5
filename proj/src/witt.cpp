#include "wdk/witt.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <unordered_map>

namespace wdk {

namespace {

using Key = std::vector<std::uint16_t>;

struct KeyHash {
    size_t operator()(const Key& k) const {
        size_t h = 1469598103934665603ull;
        for (auto v : k) h = (h ^ v) * 1099511628211ull;
        return h;
    }
};

// Dense-key polynomial used only while building the laws.
struct Poly {
    int nvars = 0;
    std::unordered_map<Key, BigInt, KeyHash> t;

    static Poly var(int nvars, int i) {
        Poly p{nvars, {}};
        Key k(nvars, 0);
        k[i] = 1;
        p.t[k] = 1;
        return p;
    }
    static Poly constant(int nvars, const BigInt& c) {
        Poly p{nvars, {}};
        if (c != 0) p.t[Key(nvars, 0)] = c;
        return p;
    }
    void add(const Poly& o, const BigInt& scale = 1) {
        for (auto& [k, c] : o.t) {
            auto& d = t[k];
            d += c * scale;
            if (d == 0) t.erase(k);
        }
    }
    Poly mul(const Poly& o) const {
        Poly r{nvars, {}};
        r.t.reserve(t.size() * o.t.size());
        Key k(nvars);
        for (auto& [ka, ca] : t)
            for (auto& [kb, cb] : o.t) {
                for (int i = 0; i < nvars; ++i) k[i] = static_cast<std::uint16_t>(ka[i] + kb[i]);
                r.t[k] += ca * cb;
            }
        for (auto it = r.t.begin(); it != r.t.end();) {
            if (it->second == 0)
                it = r.t.erase(it);
            else
                ++it;
        }
        return r;
    }
    Poly pow(int e) const {
        Poly r = constant(nvars, 1), b = *this;
        while (e) {
            if (e & 1) r = r.mul(b);
            e >>= 1;
            if (e) b = b.mul(b);
        }
        return r;
    }
    void divide_exact(const BigInt& d) {
        for (auto& [k, c] : t) {
            if (c % d != 0) throw std::logic_error("Witt polynomial recursion: inexact division");
            c /= d;
        }
    }
    IntPoly freeze() const {
        IntPoly out;
        out.nvars = nvars;
        std::vector<std::pair<Key, BigInt>> sorted(t.begin(), t.end());
        std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.first < b.first; });
        for (auto& [k, c] : sorted) {
            IntPoly::Term term{c, {}};
            for (int i = 0; i < nvars; ++i)
                if (k[i]) term.factors.emplace_back(i, k[i]);
            out.terms.push_back(std::move(term));
        }
        return out;
    }
};

// w_n in variables offset..offset+n
Poly ghost_poly(int nvars, int offset, int n, int p) {
    Poly w{nvars, {}};
    BigInt pi = 1;
    for (int i = 0; i <= n; ++i) {
        Poly term = Poly::var(nvars, offset + i).pow(static_cast<int>(boost::multiprecision::pow(BigInt(p), n - i)));
        w.add(term, pi);
        pi *= p;
    }
    return w;
}

// Solves w_n(Z) = target_n for n < count by ghost recursion.
std::vector<IntPoly> ghost_solve(const std::vector<Poly>& target, int p) {
    std::vector<IntPoly> out;
    std::vector<std::vector<Poly>> powers;  // powers[i][k] = Z_i^(p^k)
    for (size_t n = 0; n < target.size(); ++n) {
        Poly z = target[n];
        BigInt pi = 1;
        for (size_t i = 0; i < n; ++i) {
            while (powers[i].size() <= n - i) powers[i].push_back(powers[i].back().pow(p));
            z.add(powers[i][n - i], -pi);
            pi *= p;
        }
        z.divide_exact(pi);
        powers.push_back({z});
        out.push_back(z.freeze());
    }
    return out;
}

}  // namespace

BigInt IntPoly::coefficient(const std::vector<int>& e) const {
    for (auto& t : terms) {
        std::vector<int> k(nvars, 0);
        for (auto [v, x] : t.factors) k[v] = x;
        if (k == e) return t.coeff;
    }
    return 0;
}

WittLawCache::WittLawCache(int p, int m) : p_(p), m_(m) {
    if (m < 1) throw std::invalid_argument("Witt length must be >= 1");
    const int nv2 = 2 * m;
    std::vector<Poly> sum_t, prod_t, neg_t, frob_t;
    for (int n = 0; n < m; ++n) {
        Poly wx = ghost_poly(nv2, 0, n, p), wy = ghost_poly(nv2, m, n, p);
        Poly s = wx;
        s.add(wy);
        sum_t.push_back(s);
        prod_t.push_back(wx.mul(wy));
        Poly nx = ghost_poly(m, 0, n, p), neg{m, {}};
        neg.add(nx, -1);
        neg_t.push_back(neg);
        if (n + 1 < m) frob_t.push_back(ghost_poly(m, 0, n + 1, p));
    }
    S_ = ghost_solve(sum_t, p);
    P_ = ghost_solve(prod_t, p);
    N_ = ghost_solve(neg_t, p);
    F_ = ghost_solve(frob_t, p);
}

const std::vector<WittLawCache::ReducedTerm>& WittLawCache::reduced(Law law, int n, i64 modulus) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(static_cast<int>(law), n, modulus);
    auto it = reduced_.find(key);
    if (it != reduced_.end()) return it->second;
    const IntPoly& src = law == Law::Sum ? S_[n] : law == Law::Product ? P_[n] : law == Law::Negation ? N_[n] : F_[n];
    std::vector<ReducedTerm> out;
    for (auto& t : src.terms) {
        BigInt c = t.coeff % modulus;
        if (c < 0) c += modulus;
        if (c == 0) continue;
        out.push_back({static_cast<i64>(c), t.factors});
    }
    return reduced_.emplace(key, std::move(out)).first->second;
}

const WittLawCache& witt_polynomials(int p, int m) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<WittLawCache>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find({p, m});
        if (it != cache.end()) return *it->second;
    }
    auto built = std::make_unique<WittLawCache>(p, m);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(std::make_pair(p, m), std::move(built));
    return *it->second;
}

namespace {

// Evaluates reduced terms on the given variable values (missing powers computed lazily).
Elem eval_terms(RingPtr R, const std::vector<WittLawCache::ReducedTerm>& terms, const std::vector<const Elem*>& vals,
                std::vector<std::vector<Elem>>& powers) {
    Elem acc = R->zero();
    for (auto& t : terms) {
        Elem prod = R->from_int(t.coeff);
        bool zero = false;
        for (auto [v, e] : t.factors) {
            auto& pw = powers[v];
            if (pw.empty()) {
                pw.push_back(R->one());
                pw.push_back(*vals[v]);
            }
            if (pw[1].is_zero()) {
                zero = true;
                break;
            }
            while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * pw[1]);
            prod = prod * pw[e];
        }
        if (!zero) acc += prod;
    }
    return acc;
}

void check_same(const WittVec& a, const WittVec& b) {
    if (a.ring() != b.ring()) throw std::invalid_argument("Witt vectors over different rings");
    if (a.length() != b.length()) throw std::invalid_argument("Witt vectors of different lengths");
}

WittVec binary_law(const WittVec& a, const WittVec& b, WittLawCache::Law law) {
    check_same(a, b);
    const int m = a.length();
    RingPtr R = a.ring();
    const auto& cache = witt_polynomials(R->p(), m);
    std::vector<const Elem*> vals(2 * m);
    for (int i = 0; i < m; ++i) {
        vals[i] = &a[i];
        vals[m + i] = &b[i];
    }
    std::vector<std::vector<Elem>> powers(2 * m);
    std::vector<Elem> out;
    out.reserve(m);
    for (int n = 0; n < m; ++n) out.push_back(eval_terms(R, cache.reduced(law, n, R->modulus()), vals, powers));
    return WittVec(R, std::move(out));
}

}  // namespace

WittVec::WittVec(RingPtr R, std::vector<Elem> x) : R_(R), x_(std::move(x)) {
    for (auto& e : x_)
        if (e.ring() != R_) throw std::invalid_argument("Witt coordinate from a different ring");
}

WittVec WittVec::zero(RingPtr R, int m) { return WittVec(R, std::vector<Elem>(m, R->zero())); }

WittVec WittVec::one(RingPtr R, int m) {
    auto v = zero(R, m);
    if (m > 0) v.x_[0] = R->one();
    return v;
}

WittVec WittVec::teichmuller(const Elem& a, int m) {
    auto v = zero(a.ring(), m);
    v.x_[0] = a;
    return v;
}

WittVec WittVec::from_int(RingPtr R, int m, i64 k) {
    bool neg = k < 0;
    std::uint64_t n = neg ? static_cast<std::uint64_t>(-k) : static_cast<std::uint64_t>(k);
    WittVec acc = zero(R, m), base = one(R, m);
    while (n) {
        if (n & 1) acc = acc + base;
        n >>= 1;
        if (n) base = base + base;
    }
    return neg ? -acc : acc;
}

bool WittVec::is_zero() const {
    for (auto& e : x_)
        if (!e.is_zero()) return false;
    return true;
}

WittVec WittVec::truncated(int m) const {
    if (m > length()) throw PrecisionError("cannot truncate a Witt vector to a longer length");
    return WittVec(R_, std::vector<Elem>(x_.begin(), x_.begin() + m));
}

WittVec WittVec::padded(int m) const {
    auto v = *this;
    while (v.length() < m) v.x_.push_back(R_->zero());
    return v;
}

namespace {

// [a] + [b] = (T_0(a, b), T_1(a, b), ...) with T_n homogeneous of degree p^n.
// Coefficient k of T_n belongs to a^k b^(p^n - k); found by ghost recursion
//   sum_{i <= n} p^i T_i^(p^(n-i)) = a^(p^n) + b^(p^n).
using Binary = std::vector<BigInt>;

Binary binary_mul(const Binary& f, const Binary& g) {
    Binary h(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        for (size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
    }
    return h;
}

Binary binary_pow(Binary f, std::uint64_t e) {
    Binary r{1};
    while (e) {
        if (e & 1) r = binary_mul(r, f);
        e >>= 1;
        if (e) f = binary_mul(f, f);
    }
    return r;
}

const std::vector<i64>& teichmuller_sum_law(int p, int n, i64 modulus) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, Binary> exact;
    static std::map<std::tuple<int, int, i64>, std::vector<i64>> reduced;
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = reduced.find({p, n, modulus}); it != reduced.end()) return it->second;
    for (int k = 0; k <= n; ++k) {
        if (exact.count({p, k})) continue;
        const i64 deg = ipow(p, k);
        Binary rhs(static_cast<size_t>(deg) + 1, 0);
        rhs.front() += 1;
        rhs.back() += 1;
        for (int i = 0; i < k; ++i) {
            Binary term = binary_pow(exact.at({p, i}), static_cast<std::uint64_t>(ipow(p, k - i)));
            const BigInt pi = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(i));
            for (size_t c = 0; c < term.size(); ++c) rhs[c] -= pi * term[c];
        }
        const BigInt pk = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(k));
        for (auto& c : rhs) {
            if (c % pk != 0) throw std::logic_error("Teichmuller sum recursion: inexact division");
            c /= pk;
        }
        exact.emplace(std::make_pair(p, k), std::move(rhs));
    }
    std::vector<i64> out;
    for (const BigInt& c : exact.at({p, n})) {
        BigInt r = c % modulus;
        if (r < 0) r += modulus;
        out.push_back(static_cast<i64>(r));
    }
    return reduced.emplace(std::make_tuple(p, n, modulus), std::move(out)).first->second;
}

bool all_zero(const Elem* x, int m) {
    for (int i = 0; i < m; ++i)
        if (!x[i].is_zero()) return false;
    return true;
}

// Coordinates of [a] + [b] in W_m, for nonzero a and b.
void teichmuller_sum(RingPtr R, const Elem& a, const Elem& b, int m, Elem* out) {
    const int p = R->p();
    const size_t top = static_cast<size_t>(ipow(p, m - 1));
    std::vector<Elem> pa{R->one()}, pb{R->one()};
    pa.reserve(top + 1);
    pb.reserve(top + 1);
    for (size_t k = 1; k <= top; ++k) {
        pa.push_back(pa.back() * a);
        pb.push_back(pb.back() * b);
    }
    for (int n = 0; n < m; ++n) {
        const auto& c = teichmuller_sum_law(p, n, R->modulus());
        const size_t deg = c.size() - 1;
        Elem acc = R->zero();
        for (size_t k = 0; k <= deg; ++k)
            if (c[k]) acc += (pa[k] * pb[deg - k]).scaled(c[k]);
        out[n] = acc;
    }
}

// x + y = ([x_0] + [y_0]) + V(x' + y') and [s] + V(w) = (s, w_0, w_1, ...).
void add_into(RingPtr R, const Elem* x, const Elem* y, int m, Elem* out) {
    if (m == 0) return;
    if (all_zero(y, m)) {
        std::copy(x, x + m, out);
        return;
    }
    if (all_zero(x, m)) {
        std::copy(y, y + m, out);
        return;
    }
    if (x[0].is_zero() || y[0].is_zero()) {
        out[0] = x[0] + y[0];
        add_into(R, x + 1, y + 1, m - 1, out + 1);
        return;
    }
    std::vector<Elem> t(static_cast<size_t>(m)), rest(static_cast<size_t>(m - 1));
    teichmuller_sum(R, x[0], y[0], m, t.data());
    out[0] = t[0];
    add_into(R, x + 1, y + 1, m - 1, rest.data());
    add_into(R, t.data() + 1, rest.data(), m - 1, out + 1);
}

std::vector<Elem> add_coords(RingPtr R, const std::vector<Elem>& x, const std::vector<Elem>& y) {
    std::vector<Elem> out(x.size());
    add_into(R, x.data(), y.data(), static_cast<int>(x.size()), out.data());
    return out;
}

std::vector<Elem> times_p(RingPtr R, const std::vector<Elem>& x) {
    // p x by binary doubling; in characteristic p it is V F x.
    const int m = static_cast<int>(x.size());
    const int p = R->p();
    if (R->char_exp() == 1) {
        std::vector<Elem> out(x.size(), R->zero());
        for (int i = 0; i + 1 < m; ++i) out[i + 1] = x[i].pow(static_cast<std::uint64_t>(p));
        return out;
    }
    std::vector<Elem> acc(x.size(), R->zero()), base = x;
    for (int e = p; e; e >>= 1) {
        if (e & 1) acc = add_coords(R, acc, base);
        if (e > 1) base = add_coords(R, base, base);
    }
    return acc;
}

// x y = sum_{i, j} V^i[x_i] V^j[y_j] with
//   V^i[a] V^j[b] = p^i V^j[a^(p^(j-i)) b] for i <= j,
// summed by Horner in the power of p.
std::vector<Elem> mul_coords(RingPtr R, const std::vector<Elem>& x, const std::vector<Elem>& y) {
    const int m = static_cast<int>(x.size());
    const auto p = static_cast<std::uint64_t>(R->p());
    // frob[i][k] = x_i^(p^k)
    auto frob_powers = [&](const std::vector<Elem>& v) {
        std::vector<std::vector<Elem>> f(v.size());
        for (int i = 0; i < m; ++i) {
            f[i].push_back(v[i]);
            for (int k = 1; k < m; ++k) f[i].push_back(f[i].back().pow(p));
        }
        return f;
    };
    const auto fx = frob_powers(x), fy = frob_powers(y);
    std::vector<Elem> acc(static_cast<size_t>(m), R->zero());
    for (int k = m - 1; k >= 0; --k) {
        if (k < m - 1) acc = times_p(R, acc);
        std::vector<Elem> layer(static_cast<size_t>(m), R->zero());
        auto add_teichmuller = [&](int j, const Elem& c) {
            if (c.is_zero()) return;
            std::vector<Elem> t(static_cast<size_t>(m), R->zero());
            t[j] = c;
            layer = add_coords(R, layer, t);
        };
        add_teichmuller(k, x[k] * y[k]);
        for (int j = k + 1; j < m; ++j) {
            add_teichmuller(j, fx[k][j - k] * y[j]);
            add_teichmuller(j, x[j] * fy[k][j - k]);
        }
        acc = add_coords(R, acc, layer);
    }
    return acc;
}

}  // namespace

WittVec operator+(const WittVec& a, const WittVec& b) {
    check_same(a, b);
    return WittVec(a.ring(), add_coords(a.ring(), a.coords(), b.coords()));
}

WittVec operator*(const WittVec& a, const WittVec& b) {
    check_same(a, b);
    return WittVec(a.ring(), mul_coords(a.ring(), a.coords(), b.coords()));
}

WittVec WittVec::operator-() const {
    if (R_->p() != 2) {
        // [-1] = -1 for odd p, and [c] x = (c x_0, c^p x_1, ...).
        std::vector<Elem> out;
        for (auto& e : x_) out.push_back(-e);
        return WittVec(R_, std::move(out));
    }
    return witt_reference::negate(*this);
}

namespace witt_reference {

WittVec add(const WittVec& a, const WittVec& b) { return binary_law(a, b, WittLawCache::Law::Sum); }

WittVec mul(const WittVec& a, const WittVec& b) { return binary_law(a, b, WittLawCache::Law::Product); }

WittVec negate(const WittVec& x) {
    RingPtr R = x.ring();
    const int m = x.length();
    const auto& cache = witt_polynomials(R->p(), m);
    std::vector<const Elem*> vals(m);
    for (int i = 0; i < m; ++i) vals[i] = &x[i];
    std::vector<std::vector<Elem>> powers(m);
    std::vector<Elem> out;
    for (int n = 0; n < m; ++n)
        out.push_back(eval_terms(R, cache.reduced(WittLawCache::Law::Negation, n, R->modulus()), vals, powers));
    return WittVec(R, std::move(out));
}

}  // namespace witt_reference

WittVec WittVec::times_int(i64 k) const { return from_int(R_, length(), k) * (*this); }

WittVec WittVec::inverse() const {
    if (!is_unit()) throw NotInvertible("Witt vector is not a unit");
    // y <- y(2 - xy); the error lies in a nilpotent ideal of W_m(R).
    WittVec y = teichmuller(x_[0].inverse(), length());
    const WittVec one_v = one(R_, length()), two = from_int(R_, length(), 2);
    for (int it = 0; it < 256; ++it) {
        WittVec xy = (*this) * y;
        if (xy == one_v) return y;
        y = y * (two - xy);
    }
    throw std::logic_error("Witt inversion did not converge");
}

std::string WittVec::str() const {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < length(); ++i) os << (i ? ", " : "") << x_[i].str();
    os << ")";
    return os.str();
}

std::vector<Elem> ghost(const WittVec& x) {
    RingPtr R = x.ring();
    const int m = x.length(), p = R->p();
    std::vector<Elem> out;
    for (int n = 0; n < m; ++n) {
        Elem acc = R->zero();
        for (int i = 0; i <= n; ++i) {
            Elem t = x[i];
            for (int k = 0; k < n - i; ++k) t = t.pow(static_cast<std::uint64_t>(p));
            acc += t.scaled(ipow(p, i) % R->modulus());
        }
        out.push_back(acc);
    }
    return out;
}

Elem w0(const WittVec& x) { return x[0]; }

WittVec frobenius(const WittVec& x) {
    RingPtr R = x.ring();
    const int m = x.length();
    if (R->char_exp() == 1) {
        std::vector<Elem> out;
        for (int i = 0; i < m; ++i) out.push_back(x[i].pow(static_cast<std::uint64_t>(R->p())));
        return WittVec(R, std::move(out));
    }
    if (m < 2) throw PrecisionError("Frobenius of a length-1 Witt vector has length 0");
    const auto& cache = witt_polynomials(R->p(), m);
    std::vector<const Elem*> vals(m);
    for (int i = 0; i < m; ++i) vals[i] = &x[i];
    std::vector<std::vector<Elem>> powers(m);
    std::vector<Elem> out;
    for (int n = 0; n + 1 < m; ++n)
        out.push_back(eval_terms(R, cache.reduced(WittLawCache::Law::Frobenius, n, R->modulus()), vals, powers));
    return WittVec(R, std::move(out));
}

WittVec frobenius_to(const WittVec& x, int m) { return frobenius(x).truncated(m); }

WittVec verschiebung(const WittVec& x) {
    auto v = WittVec::zero(x.ring(), x.length());
    for (int i = 1; i < x.length(); ++i) v[i] = x[i - 1];
    return v;
}

WittVec verschiebung_extend(const WittVec& x) {
    auto v = WittVec::zero(x.ring(), x.length() + 1);
    for (int i = 0; i < x.length(); ++i) v[i + 1] = x[i];
    return v;
}

bool in_augmentation_ideal(const WittVec& x) { return x[0].is_zero(); }

WittVec verschiebung_inverse(const WittVec& x) {
    if (!in_augmentation_ideal(x)) throw std::invalid_argument("inverse Verschiebung needs an element of I(R)");
    if (x.length() < 2) throw PrecisionError("inverse Verschiebung of a length-1 vector has length 0");
    std::vector<Elem> out(x.coords().begin() + 1, x.coords().end());
    return WittVec(x.ring(), std::move(out));
}

WittVec map_witt(const RingHom& f, const WittVec& x) {
    std::vector<Elem> out;
    for (auto& e : x.coords()) out.push_back(f(e));
    return WittVec(f.dst(), std::move(out));
}

Elem witt_to_galois(const WittVec& x, RingPtr G) {
    RingPtr F = x.ring();
    if (!F->is_field()) throw std::invalid_argument("witt_to_galois expects Witt vectors over a finite field");
    if (!G->is_coefficient_ring() || !G->same_residue_field(*F)) throw std::invalid_argument("witt_to_galois: target mismatch");
    const int p = F->p(), r = F->r();
    Elem acc = G->zero();
    for (int i = 0; i < x.length() && i < G->char_exp(); ++i) {
        if (x[i].is_zero()) continue;
        // x_i^(p^-i) = x_i^(p^(r*i - i)) in F_q
        Elem root = x[i];
        int k = ((r - (i % r)) % r);
        for (int j = 0; j < k; ++j) root = root.pow(static_cast<std::uint64_t>(p));
        acc += G->teichmuller(root).scaled(ipow(p, i) % G->modulus());
    }
    return acc;
}

WittVec galois_to_witt(const Elem& a, int m) {
    RingPtr G = a.ring();
    if (!G->is_coefficient_ring()) throw std::invalid_argument("galois_to_witt expects a Galois ring element");
    if (m > G->char_exp()) throw PrecisionError("Galois ring precision below requested Witt length");
    RingPtr F = G->residue_field();
    const int p = G->p();
    std::vector<Elem> out;
    Elem rest = a;
    for (int i = 0; i < m; ++i) {
        Elem digit = G->residue(rest);
        // coordinate x_i = digit^(p^i)
        Elem xi = digit;
        for (int j = 0; j < i; ++j) xi = xi.pow(static_cast<std::uint64_t>(p));
        out.push_back(xi);
        rest -= G->teichmuller(digit);
        for (auto& c : rest.coords()) {
            if (c % p) throw std::logic_error("galois_to_witt: digit extraction failed");
            c /= p;
        }
    }
    return WittVec(F, std::move(out));
}

WittVec witt_from_residue(const WittVec& x, RingPtr R, int m) {
    RingPtr F = x.ring();
    if (!F->is_field() || !R->same_residue_field(*F)) throw std::invalid_argument("witt_from_residue: residue field mismatch");
    // W_m(R) with p^e = 0 is killed by p^(m+e-1), so that many source coordinates matter.
    const int need = m + R->char_exp() - 1;
    if (x.length() < need) throw PrecisionError("witt_from_residue: source needs Witt length m + e - 1");
    const int p = F->p(), r = F->r();
    RingPtr C = R->coefficient_ring();
    WittVec acc = WittVec::zero(R, m);
    WittVec p_pow = WittVec::one(R, m), pw = WittVec::from_int(R, m, p);
    for (int i = 0; i < need; ++i) {
        Elem root = x[i];
        int k = ((r - (i % r)) % r);
        for (int j = 0; j < k; ++j) root = root.pow(static_cast<std::uint64_t>(p));
        Elem lifted = R->embed_coeff(C->teichmuller(root));
        acc = acc + p_pow * WittVec::teichmuller(lifted, m);
        p_pow = p_pow * pw;
    }
    return acc;
}

}  // namespace wdk
