#pragma once
// Finite p-nilpotent base rings: F_q, Galois rings W_e(F_q), Artinian
// quotients of polynomial rings over those, and square-zero extensions.
//
// Every ring is a free Z/p^e-module. Coordinates are indexed by
// (monomial, power of the coefficient generator x); monomial 0 is 1.
// Rings are interned and never destroyed, so elements hold a raw pointer.

#include <boost/container/small_vector.hpp>
#include <cstdint>
#include "json.hpp"
#include <stdexcept>
#include <string>
#include <vector>

namespace wdk {

using i64 = std::int64_t;

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotInvertible : std::domain_error {
    using std::domain_error::domain_error;
};

i64 mulmod(i64 a, i64 b, i64 n);
i64 powmod(i64 a, std::uint64_t e, i64 n);
i64 ipow(i64 base, int e);  // throws on overflow
int vp(i64 a, int p);       // p-adic valuation of a nonzero integer

class BaseRing;
using RingPtr = const BaseRing*;

class Elem {
public:
    using Coords = boost::container::small_vector<i64, 4>;

    Elem() = default;
    Elem(RingPtr r, Coords c) : ring_(r), c_(std::move(c)) {}

    RingPtr ring() const { return ring_; }
    const Coords& coords() const { return c_; }
    Coords& coords() { return c_; }

    bool is_zero() const;
    bool is_unit() const;
    Elem inverse() const;
    Elem pow(std::uint64_t e) const;

    Elem& operator+=(const Elem& o);
    Elem& operator-=(const Elem& o);
    friend Elem operator+(Elem a, const Elem& b) { return a += b; }
    friend Elem operator-(Elem a, const Elem& b) { return a -= b; }
    friend Elem operator*(const Elem& a, const Elem& b);
    Elem operator-() const;
    friend bool operator==(const Elem& a, const Elem& b) { return a.c_ == b.c_; }
    Elem scaled(i64 k) const;

    std::string str() const;

private:
    RingPtr ring_ = nullptr;
    Coords c_;
};

class BaseRing {
public:
    enum class Kind { Fq, Galois, Artinian, SquareZero };

    // minpoly: monic, coefficients low to high (length r+1), irreducible mod p.
    static RingPtr finite_field(int p, std::vector<i64> minpoly);
    static RingPtr galois(int p, int e, std::vector<i64> minpoly);
    // Polynomials in nvars variables over `coeff` modulo the monomial ideal
    // generated by `gens` (exponent vectors). The quotient must be finite.
    static RingPtr artinian(RingPtr coeff, int nvars, std::vector<std::vector<int>> gens);
    static RingPtr truncated_poly(RingPtr coeff, int nvars, int degree);
    static RingPtr square_zero(RingPtr base, int rank, bool pd = true);
    static RingPtr from_json(const nlohmann::json& j);
    // Convenience: standard Conway-style minimal polynomials for small q.
    static std::vector<i64> default_minpoly(int p, int r);

    nlohmann::json to_json() const;
    std::string name() const;

    Kind kind() const { return kind_; }
    int p() const { return p_; }
    int char_exp() const { return e_; }  // p^e = 0
    i64 modulus() const { return N_; }
    int r() const { return r_; }
    i64 q() const { return q_; }
    int nvars() const { return nvars_; }
    int num_monomials() const { return static_cast<int>(monos_.size()); }
    const std::vector<std::vector<int>>& monomials() const { return monos_; }
    int dim() const { return num_monomials() * r_; }
    bool is_field() const { return kind_ == Kind::Fq; }
    bool is_coefficient_ring() const { return nvars_ == 0; }
    RingPtr coefficient_ring() const { return coeff_; }
    RingPtr base() const { return base_; }  // square-zero: the base ring
    bool pd_flag() const { return pd_; }
    const std::vector<i64>& modpoly() const { return g_; }
    const std::vector<i64>& minpoly() const { return minpoly_; }
    // Smallest k with maximal-ideal^k = 0 (1 for a field).
    int nilpotency_index() const { return nil_index_; }

    RingPtr residue_field() const;
    // R/pR with the same presentation over F_q.
    RingPtr mod_p() const;
    // Galois ring W_e(F_q) with the same residue field; e >= 1.
    RingPtr galois_of_length(int e) const;

    Elem zero() const;
    Elem one() const;
    Elem from_int(i64 k) const;
    Elem gen() const;           // the coefficient generator x (root of modpoly)
    Elem var(int i) const;      // polynomial variable t_i
    Elem monomial(int idx) const;
    int monomial_index(const std::vector<int>& expo) const;  // -1 if in ideal
    int mono_product(int a, int b) const { return table_[static_cast<size_t>(a) * monos_.size() + b]; }

    // Residue in F_q: the constant-monomial coefficient vector mod p.
    Elem residue(const Elem& a) const;
    // Embed a coefficient-ring element (of this->coefficient_ring()).
    Elem embed_coeff(const Elem& c) const;
    // Coefficient-ring element at a monomial.
    Elem coeff_at(const Elem& a, int mono) const;

    // Coefficient rings only (Fq or Galois): Frobenius automorphism and p-adic valuation.
    Elem frobenius(const Elem& a) const;
    int valuation(const Elem& a) const;  // returns e when a == 0
    Elem teichmuller(const Elem& residue_elem) const;  // residue_elem in residue_field()
    // Lift an F_q element to this ring's coefficient ring by integer lifting of coordinates.
    Elem naive_lift(const Elem& residue_elem) const;

    bool same_residue_field(const BaseRing& o) const;

    Elem mul(const Elem& a, const Elem& b) const;

private:
    BaseRing() = default;
    static RingPtr intern(BaseRing&& r);
    void build_tables();

    Kind kind_ = Kind::Fq;
    int p_ = 2, e_ = 1, r_ = 1;
    i64 N_ = 2, q_ = 2;
    int nvars_ = 0;
    std::vector<i64> minpoly_;  // over F_p, monic, low to high
    std::vector<i64> g_;        // modulus over Z/p^e (Teichmuller lift), monic
    std::vector<std::vector<int>> monos_;
    std::vector<std::vector<int>> ideal_;
    std::vector<int> table_;
    RingPtr coeff_ = nullptr;
    RingPtr base_ = nullptr;
    int sz_rank_ = 0;
    bool pd_ = false;
    int nil_index_ = 1;
    std::vector<Elem> frob_images_;  // x^(p*i) reduced, for Frobenius
};

// Ring homomorphism between Artinian rings over the same coefficient ring:
// substitutes each variable of `src` by an element of `dst`.
class RingHom {
public:
    RingHom(RingPtr src, RingPtr dst, std::vector<Elem> var_images);
    static RingHom identity(RingPtr r);
    // Reduction of a coefficient ring W_e(F_q) -> W_e'(F_q), e' <= e, or
    // Artinian quotient maps that keep variables.
    static RingHom reduction(RingPtr src, RingPtr dst);
    Elem operator()(const Elem& a) const;
    RingPtr src() const { return src_; }
    RingPtr dst() const { return dst_; }

private:
    RingPtr src_, dst_;
    std::vector<Elem> mono_images_;
    bool coeff_reduce_ = false;
};

}  // namespace wdk
