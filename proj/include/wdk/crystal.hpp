#pragma once
// Evaluation of the crystal of a banal display on PD-thickenings, crystalline
// Tate tensors, tensor windows and U_beta, lift matching over square-zero
// thickenings, and quasi-isogenies.

#include "wdk/gdisplay.hpp"

namespace wdk {

struct NonConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A matrix M standing for p^{-exp} M.
struct ScaledMatrix {
    EMat M;
    int exp = 0;
};

struct CrystalEvaluation {
    PDThickening thickening;
    int tensor = -1;          // -1 for eta itself, else the index i of eta(i)
    int m = 1, n = 0;         // tensor type (1, 0) for eta
    int rank = 0;
    ScaledMatrix F, V;        // over B
    std::vector<int> weights; // Hodge weight of each basis vector; Fil^k = span of weights >= k
    std::optional<bool> adjoint_nilpotent;  // recorded when decidable on the residue field
    nlohmann::json to_json() const;
};

// The lift W_m(A) -> W_m(B) through the ring section of B -> A: the inclusion
// for trivial and square-zero kernels, the Cartier map for W_e(k) -> k, which
// lands in W_{m-e+1}(B).
WMat lift_through_section(const WMat& U, const PDThickening& T);

CrystalEvaluation evaluate_banal_crystal(const WMat& U, const HodgeEmbeddingDatum& D, const PDThickening& T, int tensor = -1);
// Base change along the PD-morphism (B -> A) -> (B' -> A) given by reducing B to B'.
CrystalEvaluation transport(const CrystalEvaluation& E, const PDThickening& target);
// F V = p and V F = p, compared as integral matrices after clearing exponents.
bool check_fv(const CrystalEvaluation& E);

struct TateTensor {
    int index = 0, m = 0, n = 0, weight = 0;
    std::vector<Elem> section;  // s_i (x) 1 over B
};
std::vector<TateTensor> tate_tensors(const HodgeEmbeddingDatum& D, const PDThickening& T);
// Section lies in Fil^{weight} of the tensor filtration induced by mu.
bool in_twisted_fil0(const TateTensor& t, const HodgeEmbeddingDatum& D);

// F_i(s_i (x) 1) = p^{w_i} s_i (x) 1 for every tensor, checked as
// (F^{(x)m} (x) (V^t)^{(x)n}) s_i = p^{n_i + w_i} s_i over B.
std::vector<bool> check_frobenius_equivariance(const WMat& U, const HodgeEmbeddingDatum& D, const PDThickening& T);

// A window together with tensor sections t_i over W_m(R).
struct TensorWindow {
    Window window;
    std::vector<std::vector<WittVec>> sections;
};

TensorWindow banal_tensor_window(const WMat& U, const HodgeEmbeddingDatum& D);

struct SmuReport {
    bool tensors_in_fil0 = false;
    bool mu_shaped_trivialization = false;
    bool frobenius_equivariant = false;
    bool all() const { return tensors_in_fil0 && mu_shaped_trivialization && frobenius_equivariant; }
    nlohmann::json to_json() const;
};

// beta defaults to the identity trivialization.
SmuReport check_smu_structure(const TensorWindow& W, const HodgeEmbeddingDatum& D,
                              const std::optional<DisplayGroupElement>& beta = std::nullopt);
// U_beta = tau(beta)^{-1} Psi sigma(beta); beta must be of display-group shape
// and carry each s_i to t_i.
WMat extract_U_beta(const TensorWindow& W, const DisplayGroupElement& beta, const HodgeEmbeddingDatum& D);

// Display group of the relative frame W(B/A): the (L0, L1) block has entries
// with w0 in J, and sigma on it removes the logarithmic J-part first.
bool in_relative_display_group(const DisplayGroupElement& g, const HodgeEmbeddingDatum& D, const PDThickening& T);
WMat sigma_of(const DisplayGroupElement& g, const HodgeEmbeddingDatum& D, const PDThickening& T);
WMat mu_action(const WMat& U, const DisplayGroupElement& h, const HodgeEmbeddingDatum& D, const PDThickening& T);

// h = 1 + X with X over W(J) and tau(h)^{-1} U2 sigma(h) = U1. Throws
// NonConvergence when the residue twisted operator on the (L0, L1) block is
// not nilpotent, and std::invalid_argument for a kernel that is not square-zero.
DisplayGroupElement match_lifts(const WMat& U1, const WMat& U2, const HodgeEmbeddingDatum& D, const PDThickening& T);
// The residue twisted operator Y -> [u Y u^{-1}]_{(L0,L1)} for u over A, as a
// matrix on the d(h-d) block coordinates, and the nilpotence of its
// Frobenius-twisted powers M M^(p) M^(p^2) ...
EMat residue_twisted_operator(const EMat& u, const HodgeEmbeddingDatum& D);
bool twisted_nilpotent(const EMat& M);

// p^{-e} g with g over W_m(k).
struct QuasiIsogeny {
    WMat g;
    int exp = 0;
};
struct QuasiIsogenyReport {
    bool fixes_tensors = false;
    bool intertwines = false;
    bool ok() const { return fixes_tensors && intertwines; }
};
QuasiIsogenyReport quasi_isogeny_check(const QuasiIsogeny& g, const WMat& U, const WMat& Uprime, const HodgeEmbeddingDatum& D);

}  // namespace wdk
