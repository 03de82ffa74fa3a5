#include "wdk/ring.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace wdk {

i64 mulmod(i64 a, i64 b, i64 n) {
    if (n < (i64(1) << 31)) return (a * b) % n;
    return static_cast<i64>((static_cast<__int128>(a) * b) % n);
}

i64 powmod(i64 a, std::uint64_t e, i64 n) {
    i64 r = 1 % n;
    a %= n;
    if (a < 0) a += n;
    while (e) {
        if (e & 1) r = mulmod(r, a, n);
        a = mulmod(a, a, n);
        e >>= 1;
    }
    return r;
}

i64 ipow(i64 base, int e) {
    __int128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= base;
        if (r > (static_cast<__int128>(1) << 62)) throw PrecisionError("integer power overflows 62 bits");
    }
    return static_cast<i64>(r);
}

int vp(i64 a, int p) {
    if (a == 0) throw std::invalid_argument("vp of zero");
    int v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    return v;
}

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Polynomials over F_p, low to high, trimmed.
using FpPoly = std::vector<i64>;

void trim(FpPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

FpPoly fp_mod(FpPoly a, const FpPoly& b, int p) {
    trim(a);
    i64 inv = powmod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
        i64 c = a.back() * inv % p;
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, int p) {
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return fp_mod(c, f, p);
}

FpPoly fp_gcd(FpPoly a, FpPoly b, int p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FpPoly r = fp_mod(a, b, p);
        a = b;
        b = r;
    }
    return a;
}

// x^(p^k) mod f
FpPoly frob_power_of_x(const FpPoly& f, int p, int k) {
    FpPoly x = fp_mod({0, 1}, f, p);
    for (int i = 0; i < k; ++i) {
        FpPoly r{1}, b = x;
        for (int e = p; e; e >>= 1) {
            if (e & 1) r = fp_mulmod(r, b, f, p);
            b = fp_mulmod(b, b, f, p);
        }
        x = r;
    }
    return x;
}

bool fp_irreducible(const FpPoly& f, int p) {
    int r = static_cast<int>(f.size()) - 1;
    if (r < 1) return false;
    if (r == 1) return true;
    FpPoly xr = frob_power_of_x(f, p, r);
    FpPoly diff = xr;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] - 1 + p) % p;
    trim(diff);
    if (!diff.empty()) return false;
    for (int l = 2; l <= r; ++l) {
        if (r % l) continue;
        bool prime = true;
        for (int d = 2; d * d <= l; ++d)
            if (l % d == 0) prime = false;
        if (!prime) continue;
        FpPoly y = frob_power_of_x(f, p, r / l);
        y.resize(std::max<size_t>(y.size(), 2), 0);
        y[1] = (y[1] - 1 + p) % p;
        trim(y);
        FpPoly g = fp_gcd(f, y, p);
        if (g.size() > 1) return false;
    }
    return true;
}

struct Registry {
    std::mutex mu;
    std::map<std::string, std::unique_ptr<BaseRing>> rings;
};

Registry& registry() {
    static Registry reg;
    return reg;
}

}  // namespace

// ---------------------------------------------------------------- Elem

bool Elem::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](i64 v) { return v == 0; });
}

bool Elem::is_unit() const {
    const int r = ring_->r(), p = ring_->p();
    for (int j = 0; j < r; ++j)
        if (c_[j] % p != 0) return true;
    return false;
}

Elem Elem::pow(std::uint64_t e) const {
    Elem r = ring_->one(), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

Elem Elem::inverse() const {
    if (!is_unit()) throw NotInvertible("element is not a unit: " + str());
    // a^(q-2) inverts the residue; Newton iteration removes the nilpotent error.
    Elem y = pow(static_cast<std::uint64_t>(ring_->q() - 2));
    const Elem one = ring_->one(), two = ring_->from_int(2);
    for (int it = 0; it < 128; ++it) {
        Elem ay = (*this) * y;
        if (ay == one) return y;
        y = y * (two - ay);
    }
    throw std::logic_error("Newton inversion did not converge");
}

Elem& Elem::operator+=(const Elem& o) {
    const i64 N = ring_->modulus();
    for (size_t i = 0; i < c_.size(); ++i) {
        c_[i] += o.c_[i];
        if (c_[i] >= N) c_[i] -= N;
    }
    return *this;
}

Elem& Elem::operator-=(const Elem& o) {
    const i64 N = ring_->modulus();
    for (size_t i = 0; i < c_.size(); ++i) {
        c_[i] -= o.c_[i];
        if (c_[i] < 0) c_[i] += N;
    }
    return *this;
}

Elem Elem::operator-() const {
    Elem r = *this;
    const i64 N = ring_->modulus();
    for (auto& v : r.c_) v = v ? N - v : 0;
    return r;
}

Elem Elem::scaled(i64 k) const {
    Elem r = *this;
    const i64 N = ring_->modulus();
    k %= N;
    if (k < 0) k += N;
    for (auto& v : r.c_) v = mulmod(v, k, N);
    return r;
}

Elem operator*(const Elem& a, const Elem& b) { return a.ring()->mul(a, b); }

std::string Elem::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
    os << "]";
    return os.str();
}

// ---------------------------------------------------------------- BaseRing

RingPtr BaseRing::intern(BaseRing&& r) {
    auto& reg = registry();
    std::string key = r.name();
    std::lock_guard<std::mutex> lock(reg.mu);
    auto it = reg.rings.find(key);
    if (it != reg.rings.end()) return it->second.get();
    auto ptr = std::unique_ptr<BaseRing>(new BaseRing(std::move(r)));
    BaseRing* raw = ptr.get();
    if (raw->nvars_ == 0) raw->coeff_ = raw;
    reg.rings.emplace(key, std::move(ptr));
    // Frobenius images refer to the interned ring, so build them after interning.
    if (raw->nvars_ == 0) {
        raw->frob_images_.clear();
        Elem xp = raw->gen().pow(static_cast<std::uint64_t>(raw->p_));
        Elem acc = raw->one();
        for (int i = 0; i < raw->r_; ++i) {
            raw->frob_images_.push_back(acc);
            acc = acc * xp;
        }
    }
    return raw;
}

std::string BaseRing::name() const {
    std::ostringstream os;
    auto poly = [&](const std::vector<i64>& v) {
        os << "(";
        for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << ")";
    };
    switch (kind_) {
        case Kind::Fq: os << "F" << p_ << "^" << r_; poly(minpoly_); break;
        case Kind::Galois: os << "W" << e_ << "(F" << p_ << "^" << r_; poly(minpoly_); os << ")"; break;
        case Kind::Artinian:
        case Kind::SquareZero:
            os << (kind_ == Kind::Artinian ? "Art[" : "SqZ[") << (kind_ == Kind::SquareZero ? base_->name() : coeff_->name()) << ";" << nvars_ << ";";
            for (auto& g : ideal_) {
                os << "<";
                for (int v : g) os << v << " ";
                os << ">";
            }
            if (kind_ == Kind::SquareZero) os << ";rank" << sz_rank_ << (pd_ ? ";pd" : "");
            os << "]";
            break;
    }
    return os.str();
}

std::vector<i64> BaseRing::default_minpoly(int p, int r) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (r < 1) throw std::invalid_argument("r must be positive");
    if (r == 1) return {0, 1};
    // Smallest irreducible monic polynomial in lexicographic order of
    // coefficients (constant term first) that generates the multiplicative group.
    i64 total = ipow(p, r);
    std::vector<i64> f(r + 1, 0);
    f[r] = 1;
    for (i64 code = 0; code < total; ++code) {
        i64 c = code;
        for (int i = 0; i < r; ++i) {
            f[i] = c % p;
            c /= p;
        }
        if (f[0] == 0 || !fp_irreducible(f, p)) continue;
        // primitivity: x has order q-1
        i64 q1 = total - 1;
        bool primitive = true;
        for (i64 l = 2; l <= q1; ++l) {
            if (q1 % l) continue;
            bool lp = true;
            for (i64 d = 2; d * d <= l; ++d)
                if (l % d == 0) lp = false;
            if (!lp) continue;
            FpPoly acc{1}, b{0, 1};
            for (i64 e = q1 / l; e; e >>= 1) {
                if (e & 1) acc = fp_mulmod(acc, b, f, p);
                b = fp_mulmod(b, b, f, p);
            }
            if (acc.size() == 1 && acc[0] == 1) primitive = false;
        }
        if (primitive) return f;
    }
    throw std::logic_error("no primitive polynomial found");
}

RingPtr BaseRing::finite_field(int p, std::vector<i64> minpoly) {
    if (!is_prime(p)) throw std::invalid_argument("p must be prime");
    if (minpoly.size() < 2 || minpoly.back() % p != 1)
        throw std::invalid_argument("minpoly must be monic of degree >= 1");
    for (auto& c : minpoly) c = ((c % p) + p) % p;
    if (!fp_irreducible(minpoly, p)) throw std::invalid_argument("minpoly is not irreducible mod p");
    BaseRing R;
    R.kind_ = Kind::Fq;
    R.p_ = p;
    R.e_ = 1;
    R.N_ = p;
    R.r_ = static_cast<int>(minpoly.size()) - 1;
    R.q_ = ipow(p, R.r_);
    R.minpoly_ = minpoly;
    R.g_ = minpoly;
    R.nvars_ = 0;
    R.build_tables();
    return intern(std::move(R));
}

RingPtr BaseRing::galois(int p, int e, std::vector<i64> minpoly) {
    if (e < 1) throw std::invalid_argument("Galois ring length must be >= 1");
    RingPtr F = finite_field(p, minpoly);
    if (e == 1) return F;
    BaseRing naive;
    naive.kind_ = Kind::Galois;
    naive.p_ = p;
    naive.e_ = e;
    naive.N_ = ipow(p, e);
    naive.r_ = F->r_;
    naive.q_ = F->q_;
    naive.minpoly_ = F->minpoly_;
    naive.g_ = F->minpoly_;
    naive.nvars_ = 0;
    naive.build_tables();
    naive.coeff_ = &naive;
    // Teichmuller representative of the class of x, then its Galois orbit.
    Elem t = naive.gen();
    for (int i = 0; i < e - 1; ++i) t = t.pow(static_cast<std::uint64_t>(naive.q_));
    std::vector<Elem> poly{naive.one()};  // product of (X - t^(p^j)), low to high
    Elem conj = t;
    for (int j = 0; j < naive.r_; ++j) {
        std::vector<Elem> next(poly.size() + 1, naive.zero());
        for (size_t i = 0; i < poly.size(); ++i) {
            next[i + 1] += poly[i];
            next[i] -= poly[i] * conj;
        }
        poly = std::move(next);
        conj = conj.pow(static_cast<std::uint64_t>(p));
    }
    std::vector<i64> g;
    for (auto& c : poly) {
        for (int j = 1; j < naive.r_; ++j)
            if (c.coords()[j] != 0) throw std::logic_error("Teichmuller minimal polynomial not over Z/p^e");
        g.push_back(c.coords()[0]);
    }
    BaseRing R;
    R.kind_ = Kind::Galois;
    R.p_ = p;
    R.e_ = e;
    R.N_ = naive.N_;
    R.r_ = naive.r_;
    R.q_ = naive.q_;
    R.minpoly_ = F->minpoly_;
    R.g_ = g;
    R.nvars_ = 0;
    R.nil_index_ = e;
    R.build_tables();
    return intern(std::move(R));
}

RingPtr BaseRing::artinian(RingPtr coeff, int nvars, std::vector<std::vector<int>> gens) {
    if (!coeff->is_coefficient_ring()) throw std::invalid_argument("Artinian quotient needs a field or Galois coefficient ring");
    if (nvars < 1) throw std::invalid_argument("Artinian quotient needs at least one variable");
    for (auto& g : gens)
        if (static_cast<int>(g.size()) != nvars) throw std::invalid_argument("ideal generator has wrong arity");
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    BaseRing R;
    R.kind_ = Kind::Artinian;
    R.p_ = coeff->p_;
    R.e_ = coeff->e_;
    R.N_ = coeff->N_;
    R.r_ = coeff->r_;
    R.q_ = coeff->q_;
    R.minpoly_ = coeff->minpoly_;
    R.g_ = coeff->g_;
    R.nvars_ = nvars;
    R.ideal_ = gens;
    R.coeff_ = coeff;
    R.build_tables();
    return intern(std::move(R));
}

RingPtr BaseRing::truncated_poly(RingPtr coeff, int nvars, int degree) {
    if (degree < 1) throw std::invalid_argument("degree must be >= 1");
    std::vector<std::vector<int>> gens;
    std::vector<int> cur(nvars, 0);
    // all exponent vectors of total degree == degree
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == nvars - 1) {
            cur[i] = left;
            gens.push_back(cur);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            cur[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, degree);
    return artinian(coeff, nvars, gens);
}

RingPtr BaseRing::square_zero(RingPtr base, int rank, bool pd) {
    if (rank < 1) throw std::invalid_argument("square-zero rank must be >= 1");
    RingPtr coeff = base->coefficient_ring();
    int nb = base->nvars_;
    int n = nb + rank;
    std::vector<std::vector<int>> gens;
    for (auto g : base->ideal_) {
        g.resize(n, 0);
        gens.push_back(g);
    }
    for (int i = 0; i < rank; ++i)
        for (int j = i; j < rank; ++j) {
            std::vector<int> g(n, 0);
            g[nb + i] += 1;
            g[nb + j] += 1;
            gens.push_back(g);
        }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    BaseRing R;
    R.kind_ = Kind::SquareZero;
    R.p_ = coeff->p_;
    R.e_ = coeff->e_;
    R.N_ = coeff->N_;
    R.r_ = coeff->r_;
    R.q_ = coeff->q_;
    R.minpoly_ = coeff->minpoly_;
    R.g_ = coeff->g_;
    R.nvars_ = n;
    R.ideal_ = gens;
    R.coeff_ = coeff;
    R.base_ = base;
    R.sz_rank_ = rank;
    R.pd_ = pd;
    R.build_tables();
    return intern(std::move(R));
}

void BaseRing::build_tables() {
    monos_.clear();
    auto in_ideal = [&](const std::vector<int>& a) {
        for (auto& g : ideal_) {
            bool div = true;
            for (int i = 0; i < nvars_; ++i)
                if (a[i] < g[i]) div = false;
            if (div) return true;
        }
        return false;
    };
    if (nvars_ == 0) {
        monos_.push_back({});
    } else {
        std::vector<std::vector<int>> frontier{std::vector<int>(nvars_, 0)};
        std::map<std::vector<int>, bool> seen;
        seen[frontier[0]] = true;
        while (!frontier.empty()) {
            std::vector<std::vector<int>> next;
            for (auto& a : frontier) {
                if (in_ideal(a)) continue;
                monos_.push_back(a);
                if (monos_.size() > 4096) throw std::invalid_argument("monomial ideal does not give a finite quotient");
                for (int i = 0; i < nvars_; ++i) {
                    auto b = a;
                    ++b[i];
                    if (!seen[b]) {
                        seen[b] = true;
                        next.push_back(b);
                    }
                }
            }
            frontier = std::move(next);
        }
        std::sort(monos_.begin(), monos_.end(), [](const auto& a, const auto& b) {
            int da = 0, db = 0;
            for (int v : a) da += v;
            for (int v : b) db += v;
            if (da != db) return da < db;
            return a > b;
        });
    }
    const size_t M = monos_.size();
    table_.assign(M * M, -1);
    int maxdeg = 0;
    for (size_t a = 0; a < M; ++a) {
        int da = 0;
        for (int v : monos_[a]) da += v;
        maxdeg = std::max(maxdeg, da);
        for (size_t b = 0; b < M; ++b) {
            std::vector<int> s(nvars_);
            for (int i = 0; i < nvars_; ++i) s[i] = monos_[a][i] + monos_[b][i];
            table_[a * M + b] = monomial_index(s);
        }
    }
    nil_index_ = e_ + maxdeg;
}

int BaseRing::monomial_index(const std::vector<int>& expo) const {
    // binary search is not possible with the chosen order; rings are small
    for (size_t i = 0; i < monos_.size(); ++i)
        if (monos_[i] == expo) return static_cast<int>(i);
    return -1;
}

Elem BaseRing::zero() const { return Elem(this, Elem::Coords(dim(), 0)); }

Elem BaseRing::one() const { return from_int(1); }

Elem BaseRing::from_int(i64 k) const {
    Elem::Coords c(dim(), 0);
    k %= N_;
    if (k < 0) k += N_;
    c[0] = k;
    return Elem(this, c);
}

Elem BaseRing::gen() const {
    Elem::Coords c(dim(), 0);
    if (r_ == 1) {
        c[0] = (N_ - g_[0]) % N_;
    } else {
        c[1] = 1;
    }
    return Elem(this, c);
}

Elem BaseRing::var(int i) const {
    if (i < 0 || i >= nvars_) throw std::out_of_range("variable index");
    std::vector<int> e(nvars_, 0);
    e[i] = 1;
    int idx = monomial_index(e);
    if (idx < 0) return zero();
    return monomial(idx);
}

Elem BaseRing::monomial(int idx) const {
    Elem::Coords c(dim(), 0);
    c[static_cast<size_t>(idx) * r_] = 1;
    return Elem(this, c);
}

Elem BaseRing::mul(const Elem& a, const Elem& b) const {
    const int M = num_monomials();
    const int r = r_;
    const int w = 2 * r - 1;
    std::vector<i64> acc(static_cast<size_t>(M) * w, 0);
    const auto& ac = a.coords();
    const auto& bc = b.coords();
    std::vector<char> anz(M), bnz(M);
    for (int m = 0; m < M; ++m) {
        anz[m] = bnz[m] = 0;
        for (int j = 0; j < r; ++j) {
            if (ac[m * r + j]) anz[m] = 1;
            if (bc[m * r + j]) bnz[m] = 1;
        }
    }
    for (int ma = 0; ma < M; ++ma) {
        if (!anz[ma]) continue;
        for (int mb = 0; mb < M; ++mb) {
            if (!bnz[mb]) continue;
            int k = table_[static_cast<size_t>(ma) * M + mb];
            if (k < 0) continue;
            i64* dst = &acc[static_cast<size_t>(k) * w];
            for (int i = 0; i < r; ++i) {
                i64 x = ac[ma * r + i];
                if (!x) continue;
                for (int j = 0; j < r; ++j) {
                    i64 y = bc[mb * r + j];
                    if (!y) continue;
                    dst[i + j] = (dst[i + j] + mulmod(x, y, N_)) % N_;
                }
            }
        }
    }
    Elem::Coords out(static_cast<size_t>(M) * r, 0);
    for (int m = 0; m < M; ++m) {
        i64* s = &acc[static_cast<size_t>(m) * w];
        for (int k = w - 1; k >= r; --k) {
            i64 c = s[k];
            if (!c) continue;
            s[k] = 0;
            for (int j = 0; j < r; ++j) {
                i64 t = mulmod(c, g_[j], N_);
                s[k - r + j] = (s[k - r + j] - t + N_) % N_;
            }
        }
        for (int j = 0; j < r; ++j) out[m * r + j] = s[j];
    }
    return Elem(this, out);
}

RingPtr BaseRing::residue_field() const { return finite_field(p_, minpoly_); }

RingPtr BaseRing::galois_of_length(int e) const { return galois(p_, e, minpoly_); }

RingPtr BaseRing::mod_p() const {
    switch (kind_) {
        case Kind::Fq:
        case Kind::Galois: return residue_field();
        case Kind::Artinian: return artinian(residue_field(), nvars_, ideal_);
        case Kind::SquareZero: return square_zero(base_->mod_p(), sz_rank_, pd_);
    }
    return residue_field();
}

Elem BaseRing::residue(const Elem& a) const {
    RingPtr F = residue_field();
    Elem::Coords c(r_, 0);
    for (int j = 0; j < r_; ++j) c[j] = a.coords()[j] % p_;
    return Elem(F, c);
}

Elem BaseRing::embed_coeff(const Elem& c) const {
    if (c.ring() != coeff_) throw std::invalid_argument("embed_coeff: element of the wrong ring");
    Elem out = zero();
    for (int j = 0; j < r_; ++j) out.coords()[j] = c.coords()[j];
    return out;
}

Elem BaseRing::coeff_at(const Elem& a, int mono) const {
    Elem::Coords c(r_, 0);
    for (int j = 0; j < r_; ++j) c[j] = a.coords()[static_cast<size_t>(mono) * r_ + j];
    return Elem(coeff_, c);
}

Elem BaseRing::frobenius(const Elem& a) const {
    if (!is_coefficient_ring()) throw std::logic_error("Frobenius is only provided on coefficient rings");
    Elem out = zero();
    for (int i = 0; i < r_; ++i) {
        i64 c = a.coords()[i];
        if (c) out += frob_images_[i].scaled(c);
    }
    return out;
}

int BaseRing::valuation(const Elem& a) const {
    int v = e_;
    for (i64 c : a.coords())
        if (c) v = std::min(v, vp(c, p_));
    return v;
}

Elem BaseRing::naive_lift(const Elem& res) const {
    if (res.ring()->p_ != p_ || res.ring()->minpoly_ != minpoly_)
        throw std::invalid_argument("naive_lift: residue field mismatch");
    Elem out = zero();
    for (int j = 0; j < r_; ++j) out.coords()[j] = res.coords()[j];
    return out;
}

Elem BaseRing::teichmuller(const Elem& res) const {
    Elem t = naive_lift(res);
    for (int i = 0; i < e_ - 1; ++i) t = t.pow(static_cast<std::uint64_t>(q_));
    return t;
}

bool BaseRing::same_residue_field(const BaseRing& o) const { return p_ == o.p_ && minpoly_ == o.minpoly_; }

nlohmann::json BaseRing::to_json() const {
    using nlohmann::json;
    switch (kind_) {
        case Kind::Fq: return json{{"p", p_}, {"kind", "Fq"}, {"r", r_}, {"minpoly", minpoly_}};
        case Kind::Galois: return json{{"p", p_}, {"kind", "W"}, {"m", e_}, {"r", r_}, {"minpoly", minpoly_}};
        case Kind::Artinian: return json{{"p", p_}, {"kind", "Artinian"}, {"base", coeff_->to_json()}, {"vars", nvars_}, {"ideal", ideal_}};
        case Kind::SquareZero: return json{{"p", p_}, {"kind", "SquareZero"}, {"base", base_->to_json()}, {"rank", sz_rank_}, {"pd", pd_}};
    }
    return {};
}

RingPtr BaseRing::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind")) throw std::invalid_argument("ring descriptor needs a \"kind\"");
    std::string kind = j.at("kind").get<std::string>();
    auto minpoly_of = [&](int p) {
        int r = j.value("r", 1);
        if (j.contains("minpoly")) return j.at("minpoly").get<std::vector<i64>>();
        return default_minpoly(p, r);
    };
    if (kind == "Fq") {
        int p = j.at("p").get<int>();
        auto mp = minpoly_of(p);
        if (j.contains("r") && j.at("r").get<int>() + 1 != static_cast<int>(mp.size()))
            throw std::invalid_argument("r does not match minpoly degree");
        return finite_field(p, mp);
    }
    if (kind == "W") {
        int p = j.at("p").get<int>();
        return galois(p, j.at("m").get<int>(), minpoly_of(p));
    }
    if (kind == "Artinian") {
        RingPtr base = from_json(j.at("base"));
        int n = j.at("vars").get<int>();
        if (j.contains("degree")) return truncated_poly(base, n, j.at("degree").get<int>());
        return artinian(base, n, j.at("ideal").get<std::vector<std::vector<int>>>());
    }
    if (kind == "SquareZero") {
        return square_zero(from_json(j.at("base")), j.value("rank", 1), j.value("pd", true));
    }
    throw std::invalid_argument("unknown ring kind: " + kind);
}

// ---------------------------------------------------------------- RingHom

RingHom::RingHom(RingPtr src, RingPtr dst, std::vector<Elem> var_images) : src_(src), dst_(dst) {
    if (static_cast<int>(var_images.size()) != src->nvars()) throw std::invalid_argument("RingHom: wrong number of variable images");
    if (!src->same_residue_field(*dst) || dst->char_exp() > src->char_exp())
        throw std::invalid_argument("RingHom: incompatible coefficient rings");
    coeff_reduce_ = dst->char_exp() < src->char_exp();
    for (auto& v : var_images)
        if (v.ring() != dst) throw std::invalid_argument("RingHom: image in wrong ring");
    for (const auto& mono : src->monomials()) {
        Elem im = dst->one();
        for (int i = 0; i < src->nvars(); ++i) im = im * var_images[i].pow(static_cast<std::uint64_t>(mono[i]));
        mono_images_.push_back(im);
    }
}

RingHom RingHom::identity(RingPtr r) {
    std::vector<Elem> v;
    for (int i = 0; i < r->nvars(); ++i) v.push_back(r->var(i));
    return RingHom(r, r, v);
}

RingHom RingHom::reduction(RingPtr src, RingPtr dst) {
    std::vector<Elem> v;
    for (int i = 0; i < src->nvars(); ++i) v.push_back(i < dst->nvars() ? dst->var(i) : dst->zero());
    return RingHom(src, dst, v);
}

Elem RingHom::operator()(const Elem& a) const {
    if (a.ring() != src_) throw std::invalid_argument("RingHom applied to element of the wrong ring");
    Elem out = dst_->zero();
    const int r = src_->r();
    const i64 N = dst_->modulus();
    for (int m = 0; m < src_->num_monomials(); ++m) {
        Elem c = dst_->zero();
        bool nz = false;
        for (int j = 0; j < r; ++j) {
            i64 v = a.coords()[static_cast<size_t>(m) * r + j] % N;
            c.coords()[j] = v;
            nz = nz || v;
        }
        if (nz) out += c * mono_images_[m];
    }
    return out;
}

}  // namespace wdk
