#pragma once
// p-typical Witt vectors of finite length over a BaseRing.
//
// Sums split into Teichmuller sums [a] + [b], whose coordinates are
// bivariate homogeneous polynomials, and products into the terms
// V^i[x_i] V^j[y_j]. The full universal polynomials S_n (sum), P_n (product),
// N_n (negation) and F_n (Frobenius) are built once per (p, m) by ghost
// recursion over the integers; Frobenius outside characteristic p and
// negation for p = 2 evaluate them.

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <mutex>
#include <vector>

#include "wdk/ring.hpp"

namespace wdk {

using BigInt = boost::multiprecision::cpp_int;

// Integer polynomial; variables are numbered, exponents stored sparsely.
struct IntPoly {
    struct Term {
        BigInt coeff;
        std::vector<std::pair<int, int>> factors;  // (variable, exponent), exponent > 0
    };
    int nvars = 0;
    std::vector<Term> terms;

    BigInt coefficient(const std::vector<int>& exponents) const;
};

class WittLawCache {
public:
    WittLawCache(int p, int m);

    int p() const { return p_; }
    int m() const { return m_; }
    // Sum and product use X_0..X_{m-1} (variables 0..m-1) and Y_0..Y_{m-1} (m..2m-1).
    const IntPoly& sum(int n) const { return S_[n]; }
    const IntPoly& product(int n) const { return P_[n]; }
    // Negation and Frobenius use X_0..X_{m-1} only. Frobenius has m-1 components.
    const IntPoly& negation(int n) const { return N_[n]; }
    const IntPoly& frobenius(int n) const { return F_[n]; }

    // Terms with coefficients reduced modulo `modulus`; zero terms dropped.
    struct ReducedTerm {
        i64 coeff;
        std::vector<std::pair<int, int>> factors;
    };
    enum class Law { Sum, Product, Negation, Frobenius };
    const std::vector<ReducedTerm>& reduced(Law law, int n, i64 modulus) const;

private:
    int p_, m_;
    std::vector<IntPoly> S_, P_, N_, F_;
    mutable std::mutex mu_;
    mutable std::map<std::tuple<int, int, i64>, std::vector<ReducedTerm>> reduced_;
};

// Cached law polynomials for (p, m). Thread-safe; the returned reference lives forever.
const WittLawCache& witt_polynomials(int p, int m);

class WittVec {
public:
    WittVec() = default;
    WittVec(RingPtr R, std::vector<Elem> x);

    static WittVec zero(RingPtr R, int m);
    static WittVec one(RingPtr R, int m);
    static WittVec from_int(RingPtr R, int m, i64 k);
    static WittVec teichmuller(const Elem& a, int m);

    RingPtr ring() const { return R_; }
    int length() const { return static_cast<int>(x_.size()); }
    const Elem& operator[](int i) const { return x_[i]; }
    Elem& operator[](int i) { return x_[i]; }
    const std::vector<Elem>& coords() const { return x_; }

    bool is_zero() const;
    bool is_unit() const { return x_[0].is_unit(); }
    WittVec inverse() const;
    WittVec truncated(int m) const;
    // Extends with zero coordinates.
    WittVec padded(int m) const;

    friend WittVec operator+(const WittVec& a, const WittVec& b);
    friend WittVec operator*(const WittVec& a, const WittVec& b);
    WittVec operator-() const;
    friend WittVec operator-(const WittVec& a, const WittVec& b) { return a + (-b); }
    WittVec& operator+=(const WittVec& o) { return *this = *this + o; }
    friend bool operator==(const WittVec& a, const WittVec& b) { return a.x_ == b.x_; }
    WittVec times_int(i64 k) const;

    std::string str() const;

private:
    RingPtr R_ = nullptr;
    std::vector<Elem> x_;
};

std::vector<Elem> ghost(const WittVec& x);
Elem w0(const WittVec& x);
// Length drops by one unless p = 0 in the base ring.
WittVec frobenius(const WittVec& x);
// Frobenius truncated to a given length (which must be available).
WittVec frobenius_to(const WittVec& x, int m);
// v(x) = (0, x_0, ..., x_{m-2}); same length as x.
WittVec verschiebung(const WittVec& x);
// (0, x_0, ..., x_{m-1}); length m+1.
WittVec verschiebung_extend(const WittVec& x);
// Inverse of v on I(R): (0, y_0, ..., y_{m-2}) -> (y_0, ..., y_{m-2}); length m-1.
WittVec verschiebung_inverse(const WittVec& x);
bool in_augmentation_ideal(const WittVec& x);  // x_0 == 0
// Apply a ring homomorphism coordinatewise.
WittVec map_witt(const RingHom& f, const WittVec& x);

// Galois ring identification W_m(F_q) = W_m(F_q)-as-Galois-ring of length M >= m:
// x -> sum_i p^i [x_i^(p^-i)].
Elem witt_to_galois(const WittVec& x, RingPtr galois);
WittVec galois_to_witt(const Elem& a, int m);
// Canonical ring map W(k) -> W(R) for R a W(k)-algebra with residue field k
// (Cartier diagonal followed by the structure map). Needs x of Witt length at
// least m + e - 1 when p^e = 0 in R.
WittVec witt_from_residue(const WittVec& x, RingPtr R, int m);

// Evaluation of the universal law polynomials, kept as the reference the
// decomposed arithmetic of WittVec is tested against.
namespace witt_reference {
WittVec add(const WittVec& a, const WittVec& b);
WittVec mul(const WittVec& a, const WittVec& b);
WittVec negate(const WittVec& x);
}  // namespace witt_reference

// ADL helpers used by the generic matrix code.
inline WittVec zero_like(const WittVec& a) { return WittVec::zero(a.ring(), a.length()); }
inline WittVec one_like(const WittVec& a) { return WittVec::one(a.ring(), a.length()); }
inline bool is_zero(const WittVec& a) { return a.is_zero(); }
inline bool is_unit(const WittVec& a) { return a.is_unit(); }
inline WittVec inverse(const WittVec& a) { return a.inverse(); }
inline Elem zero_like(const Elem& a) { return a.ring()->zero(); }
inline Elem one_like(const Elem& a) { return a.ring()->one(); }
inline bool is_zero(const Elem& a) { return a.is_zero(); }
inline bool is_unit(const Elem& a) { return a.is_unit(); }
inline Elem inverse(const Elem& a) { return a.inverse(); }

}  // namespace wdk
