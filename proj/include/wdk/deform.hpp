#pragma once
// Universal deformations of banal displays over truncations of
// W(k)[[t_1..t_l]], classification of deformations over Artinian rings by
// successive approximation, and the test for factoring a GL-deformation
// through the deformation space of the tensor stabilizer.

#include "wdk/crystal.hpp"

namespace wdk {

// An element of the weight -1 part of the Lie algebra (rows L0, columns L1),
// with the entry at which it is 1 while the other basis elements vanish.
struct UnipotentDirection {
    std::vector<i64> matrix;  // h x h row-major
    int free_position = 0;
};

std::vector<UnipotentDirection> opposite_unipotent_basis(const HodgeEmbeddingDatum& D);

// W_e(k)[t_1..t_l]/(t)^{max_degree+1}, a truncation of the deformation ring.
struct DeformationRing {
    RingPtr k = nullptr;
    int variables = 0;
    int p_power = 1;
    int max_degree = 1;

    static DeformationRing for_datum(const HodgeEmbeddingDatum& D, RingPtr k, int p_power, int max_degree);
    RingPtr ring() const;
    nlohmann::json to_json() const;
};

// 1 + sum_j [c_j] X_j over W_m(R).
WMat unipotent_element(const std::vector<UnipotentDirection>& basis, const std::vector<Elem>& c, int h, int m);

struct UniversalDeformation {
    DeformationRing ring;
    WMat h_univ;  // 1 + sum_j [t_j] X_j
    WMat u_univ;  // h_univ^{-1} u0
};

// u0 over W_L(k); the deformation lives over W_m(R) with m = L - p_power + 1,
// since the lift W(k) -> W_m(R) sees m + p_power - 1 coordinates.
UniversalDeformation universal_deformation(const WMat& u0, const HodgeEmbeddingDatum& D, int p_power, int max_degree);

// Pull back along t_j -> c_j, with c_j in an Artinian ring over the same coefficient ring.
WMat specialize(const WMat& U, const std::vector<Elem>& c);

struct Classification {
    std::vector<Elem> coordinates;
    DisplayGroupElement gauge;
    int rounds = 0;
    bool gauge_fixes_tensors = false;
    nlohmann::json to_json() const;
};

// Finds c in the maximal ideal and a gauge g = 1 mod the maximal ideal with
// tau(g)^{-1} (h_c^{-1} u0) sigma(g) = U. The gauge is built in the display
// group of GL(Lambda); for data with tensors it fixes them up to the
// precision of the linearization, which `gauge_fixes_tensors` records.
// u0 must have Witt length at least m + e - 1 when p^e = 0 in R.
Classification classify_deformation(const WMat& U, const WMat& u0, const HodgeEmbeddingDatum& D);

// W(pi)(h_univ^GL) == eta(h_univ^G), pi the closed immersion of the G-unipotent
// into the GL-unipotent in the coordinates given by the basis.
bool universal_compatibility(const HodgeEmbeddingDatum& D, RingPtr k, int p_power, int max_degree);

struct FactorizationResult {
    bool factors = false;
    std::vector<Elem> gl_coordinates;     // d x (h-d), row-major
    std::vector<Elem> g_coordinates;      // when it factors
    std::optional<SmuReport> witness;     // tensors t_i = tau(g^{-1}) s_i on the window of U
    nlohmann::json to_json() const;
};

// U over W_m(R) lifting u0 in G(W_m(k)); D carries the tensors of G.
FactorizationResult tensor_factorization_test(const WMat& U, const WMat& u0, const HodgeEmbeddingDatum& D);

}  // namespace wdk
