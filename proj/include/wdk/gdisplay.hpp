#pragma once
// Hodge embedding data (Lambda, mu, tensors), the display group and its
// action on banal displays, isocrystals with Newton slopes, the Lie algebra
// of the tensor stabilizer and adjoint nilpotence.

#include <boost/rational.hpp>

#include "wdk/displays.hpp"

namespace wdk {

using Rational = boost::rational<long long>;

// A tensor in Lambda^{(x)m} (x) (Lambda^dual)^{(x)n}, coordinates in row-major
// order with the m covariant indices first. `weight` is its mu-weight, the
// Tate twist under which Frobenius acts on it as p^weight.
struct Tensor {
    int m = 0, n = 0;
    std::vector<i64> coords;
    int weight = 0;
    std::string name;
};

struct HodgeEmbeddingDatum {
    int h = 0, d = 0;
    std::vector<int> mu;  // d zeros followed by h - d ones
    std::vector<Tensor> tensors;

    static HodgeEmbeddingDatum gl(int h, int d);
    // GL_2, d = 1, with the alternating form e1* ^ e2*.
    static HodgeEmbeddingDatum gl2_determinant();
    // GL_{2g}, d = g, with J = [[0, I], [-I, 0]] as a form.
    static HodgeEmbeddingDatum symplectic(int g);
    static HodgeEmbeddingDatum from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    // Checks shapes and homogeneity and fills in the tensor weights.
    void validate();
};

// The representation g^{(x)m} (x) dual^{(x)n} applied to a tensor.
template <class T>
std::vector<T> tensor_action(const Matrix<T>& cov, const Matrix<T>& dual, int m, int n, std::vector<T> s) {
    const int h = cov.rows();
    const int k = m + n;
    size_t inner = 1;
    for (int f = k - 1; f >= 0; --f) {
        const Matrix<T>& g = f < m ? cov : dual;
        const size_t outer = s.size() / (inner * h);
        std::vector<T> out(s.size(), cov.zero());
        for (size_t o = 0; o < outer; ++o)
            for (int a = 0; a < h; ++a)
                for (int b = 0; b < h; ++b) {
                    const T& gab = g(a, b);
                    if (is_zero(gab)) continue;
                    for (size_t i = 0; i < inner; ++i) {
                        const T& x = s[(o * h + b) * inner + i];
                        if (!is_zero(x)) out[(o * h + a) * inner + i] = out[(o * h + a) * inner + i] + gab * x;
                    }
                }
        s = std::move(out);
        inner *= h;
    }
    return s;
}

std::vector<Elem> tensor_in(RingPtr R, const Tensor& s);
std::vector<WittVec> tensor_in(RingPtr R, int m, const Tensor& s);

bool fixes_tensors(const EMat& g, const HodgeEmbeddingDatum& D);
bool fixes_tensors(const WMat& g, const HodgeEmbeddingDatum& D);

// The diagonal matrix mu(p) = diag(1^d, p^(h-d)) and its companion diag(p^d, 1^(h-d)).
WMat mu_of_p(const HodgeEmbeddingDatum& D, RingPtr R, int m);
WMat mu_of_p_dual(const HodgeEmbeddingDatum& D, RingPtr R, int m);

// Element of the display group at length m+1: an invertible matrix over
// W_{m+1}(R) whose block (rows L0, columns L1) lies in I(R).
struct DisplayGroupElement {
    WMat g;
    int length() const { return g.zero().length() - 1; }  // acts on banal data of length m
};

DisplayGroupElement make_display_group_element(const HodgeEmbeddingDatum& D, const WMat& g);
bool in_display_group(const DisplayGroupElement& g, const HodgeEmbeddingDatum& D);
WMat tau_of(const DisplayGroupElement& g);
WMat sigma_of(const DisplayGroupElement& g, const HodgeEmbeddingDatum& D);
DisplayGroupElement operator*(const DisplayGroupElement& a, const DisplayGroupElement& b);
// tau(h)^{-1} U sigma(h)
WMat mu_action(const WMat& U, const DisplayGroupElement& h, const HodgeEmbeddingDatum& D);

// Basis of the Lie algebra of the tensor stabilizer, one integral matrix per
// element, graded by the mu-weight w_i - w_j of its support.
struct LieAlgebra {
    int h = 0;
    std::vector<std::vector<i64>> basis;  // row-major h x h, small integers
    std::vector<int> weight;
    std::vector<int> free_position;       // entry at which this basis element is 1 and all others 0
    int dimension() const { return static_cast<int>(basis.size()); }
    std::vector<int> of_weight(int w) const;
};

LieAlgebra lie_algebra(const HodgeEmbeddingDatum& D);

// phi = p^{-e} A sigma on K^n, with A over a Galois ring W_M(F_q).
struct Isocrystal {
    EMat A;
    int denominator_exp = 0;
    RingPtr ring() const { return A.zero().ring(); }
};

struct NewtonPolygon {
    std::vector<std::pair<Rational, int>> slopes;  // ascending, multiplicities
    nlohmann::json to_json() const;
    std::string str() const;
    Rational min_slope() const;
    Rational max_slope() const;
};

std::string rational_str(const Rational& r);
// Largest M with p^M comfortably inside 64-bit arithmetic.
int max_precision(int p);
NewtonPolygon newton_slopes(const Isocrystal& X, int guard = 2);

struct SlopeResult {
    bool ok = false;
    NewtonPolygon polygon;
    std::string error;
};
std::vector<SlopeResult> newton_slopes_batch(const std::vector<Isocrystal>& xs, int guard = 2);
std::vector<SlopeResult> newton_slopes_batch_serial(const std::vector<Isocrystal>& xs, int guard = 2);

// U over W_m(F_q) as a matrix over W_M(F_q) (missing Witt coordinates are zero).
EMat to_galois(const WMat& U, int M);
// The longest lift of U into G(W_M(F_q)) this library can vouch for: the
// zero-padded lift at M (default max_precision(p)) when it still fixes the
// tensors, otherwise U at its own length. An explicit M > length(U) whose
// padded lift leaves G raises PrecisionError.
EMat lift_to_galois(const WMat& U, const HodgeEmbeddingDatum& D, int M = 0);

// b = U mu(p) over W_M(F_q).
Isocrystal framing_element(const EMat& U, const HodgeEmbeddingDatum& D);
Isocrystal framing_element(const WMat& U, const HodgeEmbeddingDatum& D, int M = 0);
// The operator p Ad(b) sigma on the Lie algebra; slopes of Ad(b) sigma are one less.
Isocrystal adjoint_isocrystal(const EMat& U, const HodgeEmbeddingDatum& D);
Isocrystal adjoint_isocrystal(const WMat& U, const HodgeEmbeddingDatum& D, int M = 0);
NewtonPolygon adjoint_slopes(const EMat& U, const HodgeEmbeddingDatum& D);
NewtonPolygon adjoint_slopes(const WMat& U, const HodgeEmbeddingDatum& D, int M = 0);
bool adjoint_nilpotence(const EMat& U, const HodgeEmbeddingDatum& D);
bool adjoint_nilpotence(const WMat& U, const HodgeEmbeddingDatum& D, int M = 0);
bool nilpotent_wrt_eta(const WMat& U, const HodgeEmbeddingDatum& D);
// Residue-field reduction of U when the base is Artinian.
WMat residue_matrix(const WMat& U);

// Random elements of G(W_m(R)) and of the display group at length m+1.
WMat random_group_element(const HodgeEmbeddingDatum& D, RingPtr R, int m, Rng& rng);
DisplayGroupElement random_display_group_element(const HodgeEmbeddingDatum& D, RingPtr R, int m, Rng& rng);
// Random element of G(W_M(F_q)) for a Galois ring G = W_M(F_q).
EMat random_group_element_galois(const HodgeEmbeddingDatum& D, RingPtr G, Rng& rng);
WMat galois_to_witt_matrix(const EMat& U, int m);

}  // namespace wdk
