#include "wdk/deform.hpp"

#include "wdk/io.hpp"

namespace wdk {

using nlohmann::json;

std::vector<UnipotentDirection> opposite_unipotent_basis(const HodgeEmbeddingDatum& D) {
    const LieAlgebra L = lie_algebra(D);
    std::vector<UnipotentDirection> out;
    for (int k : L.of_weight(-1)) out.push_back({L.basis[k], L.free_position[k]});
    return out;
}

DeformationRing DeformationRing::for_datum(const HodgeEmbeddingDatum& D, RingPtr k, int p_power, int max_degree) {
    if (!k->is_field()) throw std::invalid_argument("deformation ring: the residue ring must be a finite field");
    if (p_power < 1 || max_degree < 1) throw std::invalid_argument("deformation ring: truncation orders must be >= 1");
    return DeformationRing{k, static_cast<int>(opposite_unipotent_basis(D).size()), p_power, max_degree};
}

RingPtr DeformationRing::ring() const {
    RingPtr C = p_power == 1 ? k : BaseRing::galois(k->p(), p_power, k->minpoly());
    return BaseRing::truncated_poly(C, variables, max_degree + 1);
}

json DeformationRing::to_json() const {
    return {{"residue_field", k->to_json()}, {"variables", variables}, {"p_power", p_power}, {"max_degree", max_degree}};
}

WMat unipotent_element(const std::vector<UnipotentDirection>& basis, const std::vector<Elem>& c, int h, int m) {
    if (c.size() != basis.size()) throw std::invalid_argument("unipotent element: one coordinate per basis direction");
    if (c.empty()) throw std::invalid_argument("unipotent element: the weight -1 part is zero");
    RingPtr R = c[0].ring();
    WMat N = WMat::identity(h, WittVec::zero(R, m));
    for (size_t j = 0; j < basis.size(); ++j) {
        const WittVec t = WittVec::teichmuller(c[j], m);
        for (int i = 0; i < h * h; ++i)
            if (basis[j].matrix[i]) N(i / h, i % h) = N(i / h, i % h) + t.times_int(basis[j].matrix[i]);
    }
    return N;
}

namespace {

WMat lift_from_residue(const WMat& u0, RingPtr R, int m) {
    return u0.map([&](const WittVec& x) { return witt_from_residue(x, R, m); });
}

}  // namespace

UniversalDeformation universal_deformation(const WMat& u0, const HodgeEmbeddingDatum& D, int p_power, int max_degree) {
    RingPtr k = u0.zero().ring();
    const int m = u0.zero().length() - p_power + 1;
    if (m < 1) throw PrecisionError("universal deformation: u0 needs Witt length at least the p-power");
    UniversalDeformation U{DeformationRing::for_datum(D, k, p_power, max_degree), {}, {}};
    RingPtr R = U.ring.ring();
    std::vector<Elem> t;
    for (int j = 0; j < U.ring.variables; ++j) t.push_back(R->var(j));
    U.h_univ = unipotent_element(opposite_unipotent_basis(D), t, D.h, m);
    U.u_univ = inverse(U.h_univ) * lift_from_residue(u0, R, m);
    return U;
}

WMat specialize(const WMat& U, const std::vector<Elem>& c) {
    RingPtr src = U.zero().ring();
    if (static_cast<int>(c.size()) != src->nvars()) throw std::invalid_argument("specialize: one value per deformation variable");
    if (c.empty()) return U;
    return w_map(RingHom(src, c[0].ring(), c), U);
}

// ------------------------------------------------------------ classification

json Classification::to_json() const {
    json cs = json::array();
    for (auto& c : coordinates) cs.push_back(elem_to_json(c));
    return {{"coordinates", cs}, {"gauge", wmat_to_json(gauge.g)}, {"rounds", rounds}, {"gauge_fixes_tensors", gauge_fixes_tensors}};
}

namespace {

bool in_b_block(const HodgeEmbeddingDatum& D, int i, int j) { return D.mu[i] == 0 && D.mu[j] == 1; }

WMat b_part(const WMat& A, const HodgeEmbeddingDatum& D, bool keep_b) {
    WMat out = A;
    for (int i = 0; i < D.h; ++i)
        for (int j = 0; j < D.h; ++j)
            if (in_b_block(D, i, j) != keep_b) out(i, j) = zero_like(A(i, j));
    return out;
}

}  // namespace

Classification classify_deformation(const WMat& U, const WMat& u0, const HodgeEmbeddingDatum& D) {
    RingPtr R = U.zero().ring();
    RingPtr k = u0.zero().ring();
    const int m = U.zero().length();
    if (!k->is_field() || !R->same_residue_field(*k)) throw std::invalid_argument("classify: u0 must live over the residue field of U");
    if (u0.zero().length() < m + R->char_exp() - 1) throw PrecisionError("classify: u0 needs Witt length m + e - 1 for p^e = 0 in R");
    const WMat u0m = w_truncate(u0, m);
    if (!(w_map(RingHom::reduction(R, k), U) == u0m)) throw std::invalid_argument("classify: U does not reduce to u0");
    if (!twisted_nilpotent(residue_twisted_operator(w_ghost0(u0m), D)))
        throw NonConvergence("classify: u0 is not adjoint nilpotent on the deformation directions");

    const auto basis = opposite_unipotent_basis(D);
    const WMat u0R = lift_from_residue(u0, R, m);
    const WittVec z0 = WittVec::zero(R, m), z1 = WittVec::zero(R, m + 1);
    const WMat I0 = WMat::identity(D.h, z0), I1 = WMat::identity(D.h, z1);

    Classification C;
    C.coordinates.assign(basis.size(), R->zero());
    C.gauge = DisplayGroupElement{I1};
    const int bound = 2 * R->nilpotency_index() + 2;

    auto current = [&]() {
        WMat hu = basis.empty() ? u0R : inverse(unipotent_element(basis, C.coordinates, D.h, m)) * u0R;
        return mu_action(hu, C.gauge, D);
    };

    for (C.rounds = 0; C.rounds <= bound; ++C.rounds) {
        const WMat Ucur = current();
        if (Ucur == U) {
            C.gauge_fixes_tensors = fixes_tensors(C.gauge.g, D);
            return C;
        }
        // Linearized modulo the next power of the maximal ideal:
        //   E = -Delta - tau(Y) + Ucur sigma(Y) Ucur^{-1},
        // with Delta = sum [delta_j] X_j in the b-block and Y_b = v(z).
        const WMat Uinv = inverse(Ucur);
        const WMat E = (U - Ucur) * Uinv;
        const WMat T = -b_part(E, D, true);
        WMat Z(D.h, D.h, z0);
        std::vector<Elem> delta(basis.size(), R->zero());
        for (int it = 0; it <= m; ++it) {
            const WMat S = T + b_part(Ucur * Z * Uinv, D, true);
            for (size_t j = 0; j < basis.size(); ++j) {
                const int pos = basis[j].free_position;
                delta[j] = w0(S(pos / D.h, pos % D.h));
            }
            WMat y = basis.empty() ? S : S - (unipotent_element(basis, delta, D.h, m) - I0);
            WMat Zn(D.h, D.h, z0);
            for (int i = 0; i < D.h; ++i)
                for (int j = 0; j < D.h; ++j) {
                    if (!in_b_block(D, i, j)) continue;
                    WittVec x = y(i, j);
                    x[0] = R->zero();
                    Zn(i, j) = verschiebung_inverse(x).padded(m);
                }
            Z = std::move(Zn);
        }
        for (size_t j = 0; j < basis.size(); ++j) C.coordinates[j] = C.coordinates[j] + delta[j];

        const WMat rest = b_part(Ucur * Z * Uinv, D, false) - b_part(E, D, false);
        WMat Y(D.h, D.h, z1);
        for (int i = 0; i < D.h; ++i)
            for (int j = 0; j < D.h; ++j)
                Y(i, j) = in_b_block(D, i, j) ? verschiebung(Z(i, j).padded(m + 1)) : rest(i, j).padded(m + 1);
        C.gauge = C.gauge * DisplayGroupElement{I1 + Y};
    }
    throw NonConvergence("classify: successive approximation did not terminate");
}

// ------------------------------------------------------------ compatibility and factorization

bool universal_compatibility(const HodgeEmbeddingDatum& D, RingPtr k, int p_power, int max_degree) {
    const auto DG = DeformationRing::for_datum(D, k, p_power, max_degree);
    const auto Dgl = HodgeEmbeddingDatum::gl(D.h, D.d);
    const auto DGL = DeformationRing::for_datum(Dgl, k, p_power, max_degree);
    RingPtr RG = DG.ring(), RGL = DGL.ring();
    const auto bG = opposite_unipotent_basis(D), bGL = opposite_unipotent_basis(Dgl);

    std::vector<Elem> s, t, images;
    for (int j = 0; j < DG.variables; ++j) s.push_back(RG->var(j));
    for (int j = 0; j < DGL.variables; ++j) t.push_back(RGL->var(j));
    for (const auto& e : bGL) {
        Elem x = RG->zero();
        for (size_t j = 0; j < bG.size(); ++j) x = x + s[j].scaled(bG[j].matrix[e.free_position]);
        images.push_back(x);
    }
    const WMat hGL = unipotent_element(bGL, t, D.h, p_power);
    const WMat hG = unipotent_element(bG, s, D.h, p_power);
    return w_map(RingHom(RGL, RG, images), hGL) == hG;
}

json FactorizationResult::to_json() const {
    auto strs = [](const std::vector<Elem>& v) {
        json a = json::array();
        for (auto& x : v) a.push_back(elem_to_json(x));
        return a;
    };
    json j{{"factors", factors}, {"gl_coordinates", strs(gl_coordinates)}, {"g_coordinates", strs(g_coordinates)}};
    j["witness"] = witness ? witness->to_json() : json(nullptr);
    return j;
}

FactorizationResult tensor_factorization_test(const WMat& U, const WMat& u0, const HodgeEmbeddingDatum& D) {
    const auto Dgl = HodgeEmbeddingDatum::gl(D.h, D.d);
    const Classification C = classify_deformation(U, u0, Dgl);
    const auto bG = opposite_unipotent_basis(D), bGL = opposite_unipotent_basis(Dgl);
    RingPtr R = U.zero().ring();

    FactorizationResult out;
    out.gl_coordinates = C.coordinates;
    std::vector<Elem> at(static_cast<size_t>(D.h) * D.h, R->zero());
    for (size_t j = 0; j < bGL.size(); ++j) at[bGL[j].free_position] = C.coordinates[j];
    for (auto& e : bG) out.g_coordinates.push_back(at[e.free_position]);

    out.factors = true;
    for (const auto& e : bGL) {
        Elem x = at[e.free_position];
        for (size_t j = 0; j < bG.size(); ++j) x = x - out.g_coordinates[j].scaled(bG[j].matrix[e.free_position]);
        if (!x.is_zero()) out.factors = false;
    }
    if (!out.factors) {
        out.g_coordinates.clear();
        return out;
    }
    // U = tau(g)^{-1} U_G sigma(g) with U_G in G; beta = g^{-1} carries s to t.
    const DisplayGroupElement beta{inverse(C.gauge.g)};
    const WMat tb = tau_of(beta), tbd = inverse(tb).transpose();
    TensorWindow W{Window{D.d, D.h - D.d, U}, {}};
    const int m = U.zero().length();
    for (const Tensor& s : D.tensors) W.sections.push_back(tensor_action(tb, tbd, s.m, s.n, tensor_in(R, m, s)));
    out.witness = check_smu_structure(W, D, beta);
    return out;
}

}  // namespace wdk
