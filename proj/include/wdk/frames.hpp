#pragma once
// Witt frames, relative Witt frames of PD-thickenings, their truncated
// semi-frames, the divided-power logarithm, graded maps between finite free
// graded modules, graded Nakayama and truncation-tower reconstruction.

#include <optional>

#include "wdk/matrix.hpp"
#include "wdk/random.hpp"

namespace wdk {

// A surjection B -> A whose kernel J carries divided powers.
//   Trivial:    B = A, J = 0.
//   SquareZero: B = A[eps_1..eps_r]/(eps)^2, J = (eps), gamma_k = 0 for k >= 2.
//   Canonical:  B = W_e(F_q), A = F_q, J = pB, gamma_k(py) = (p^k/k!) y^k.
enum class PDRule { Trivial, SquareZero, Canonical };

class PDThickening {
public:
    static PDThickening trivial(RingPtr R);
    static PDThickening square_zero(RingPtr A, int rank = 1);
    static PDThickening canonical(RingPtr k, int e);
    static PDThickening from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    RingPtr B() const { return B_; }
    RingPtr A() const { return A_; }
    PDRule rule() const { return rule_; }

    Elem project(const Elem& b) const;   // B -> A
    // Multiplicative section A -> B: Teichmuller for the canonical rule,
    // the inclusion otherwise. It is a ring map except in the canonical case.
    Elem section(const Elem& a) const;
    bool in_kernel(const Elem& b) const;
    // gamma_k(x) for x in J.
    Elem divided_power(const Elem& x, i64 k) const;

private:
    RingPtr B_ = nullptr, A_ = nullptr;
    PDRule rule_ = PDRule::Trivial;
};

// Zink's logarithm W_m(J) -> J^m and its inverse.
std::vector<Elem> pd_log(const PDThickening& T, const WittVec& xi);
WittVec pd_log_inv(const PDThickening& T, const std::vector<Elem>& log);
// (p^k)!/p^k as an exact integer.
BigInt divided_ghost_coefficient(int p, int k);

// Frames and truncated semi-frames over W_m. A homogeneous element of degree
// n is stored as:
//   n <= 0: a coefficient c in W_m, standing for c * t^{-n};
//   n >= 1: w in I_m plus (relative frames) x in J.
class Frame {
public:
    enum class Kind { Witt, Relative };

    struct Element {
        int degree = 0;
        WittVec w;
        Elem x;  // J-component; zero for Witt frames and for degree <= 0
    };

    static Frame witt(RingPtr R, int m);
    static Frame relative(const PDThickening& T, int m);

    Kind kind() const { return kind_; }
    int length() const { return m_; }
    bool has_sigma() const { return has_sigma_; }
    RingPtr ring() const { return S0_; }   // R or B
    RingPtr quotient() const;              // S_0 / tS_1: R or A
    const std::optional<PDThickening>& thickening() const { return T_; }

    // Truncation at level m' <= m; the result has no sigma.
    Frame truncate(int m_prime) const;
    Element truncate_element(const Element& a, int m_prime) const;

    Element t() const;
    Element make(int degree, const WittVec& w, std::optional<Elem> x = std::nullopt) const;
    Element zero(int degree) const;
    Element random(int degree, Rng& rng) const;
    Element mul(const Element& a, const Element& b) const;
    bool equal(const Element& a, const Element& b) const;

    WittVec tau(const Element& a) const;
    // Always of length m-1, even when pR = 0.
    WittVec sigma(const Element& a) const;
    // t_n : S_{n+1} -> S_n
    Element t_map(const Element& a) const;

    // S_0 -> quotient ring (R or A), extended by zero on other degrees.
    Elem nu(const WittVec& s0) const;
    // Membership of an S_0 element in tau(S_1) = I(R) or I(B/A).
    bool in_tau_S1(const WittVec& s0) const;

    // Constructive check of the frame axioms on random samples.
    nlohmann::json axiom_report(Rng& rng, int samples) const;

private:
    Kind kind_ = Kind::Witt;
    RingPtr S0_ = nullptr;
    int m_ = 1;
    bool has_sigma_ = true;
    std::optional<PDThickening> T_;
};

// A homomorphism of finite free graded modules, stored through tau: entry
// (k, j) is tau of the coefficient in S_{d_j - e_k}, where d are the source
// and e the target basis degrees. Entries with d_j - e_k = 1 must lie in
// tau(S_1); larger positive differences are not supported.
struct GradedMap {
    std::vector<int> src_degrees, dst_degrees;
    WMat tau_matrix;
};

void validate_graded_map(const Frame& F, const GradedMap& f);
GradedMap compose(const GradedMap& f, const GradedMap& g);  // f after g
GradedMap truncate_map(const GradedMap& f, int m);
// Bijective iff the reduction along nu is bijective on every degree.
bool nakayama_check(const Frame& F, const GradedMap& f);
// Direct test: tau(f) invertible with inverse of the right graded shape.
std::optional<GradedMap> graded_inverse(const Frame& F, const GradedMap& f);
GradedMap random_graded_map(const Frame& F, const std::vector<int>& src, const std::vector<int>& dst, Rng& rng);
GradedMap random_graded_automorphism(const Frame& F, const std::vector<int>& degrees, Rng& rng);

// Levels m = 1..K of truncated modules over the truncations of `frame`
// (whose length is K). theta[m-1] : M^{m+1} -> M^m, with entries of length m.
struct TruncationTower {
    Frame frame;
    std::vector<std::vector<int>> degrees;
    std::vector<GradedMap> theta;
};

struct TowerLimit {
    std::vector<int> degrees;       // graded basis of the limit module N
    std::vector<GradedMap> psi;     // psi[m-1] : N / V^m N -> M^m, isomorphisms
};

// Throws std::invalid_argument on an inconsistent tower.
TowerLimit tower_reconstruct(const TruncationTower& T);
// Truncations of a free graded module, each presented in a random basis.
TruncationTower random_tower(const Frame& F, const std::vector<int>& degrees, Rng& rng);

}  // namespace wdk
