#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "wdk/crystal.hpp"

using namespace wdk;
using namespace wdk::testing;

namespace {

// A datum with the identity endomorphism as a (1, 1)-tensor next to the determinant form.
HodgeEmbeddingDatum with_identity_tensor(HodgeEmbeddingDatum D) {
    Tensor id{1, 1, std::vector<i64>(static_cast<size_t>(D.h) * D.h, 0), 0, "id"};
    for (int i = 0; i < D.h; ++i) id.coords[static_cast<size_t>(i) * D.h + i] = 1;
    D.tensors.push_back(id);
    D.validate();
    return D;
}

WMat diag_unit(RingPtr k, int m, const Elem& u) {
    WMat U = WMat::identity(2, WittVec::zero(k, m));
    U(0, 0) = WittVec::teichmuller(u, m);
    return U;
}

WittVec random_in_J(const PDThickening& T, int m, Rng& g) {
    RingPtr B = T.B();
    std::vector<Elem> x;
    for (int i = 0; i < m; ++i) {
        Elem a = T.section(random_elem(T.A(), g));
        Elem eps = B->var(T.A()->nvars());
        x.push_back(a * eps);
    }
    return WittVec(B, x);
}

// Ubar (1 + sum xi_k X_k) with xi_k in W(J) and X_k a Lie algebra basis.
WMat perturb(const WMat& Ubar, const LieAlgebra& L, const PDThickening& T, Rng& g) {
    RingPtr B = T.B();
    const int m = Ubar.zero().length();
    WMat N(L.h, L.h, WittVec::zero(B, m));
    for (int k = 0; k < L.dimension(); ++k) {
        WittVec xi = random_in_J(T, m, g);
        for (int i = 0; i < L.h * L.h; ++i)
            if (L.basis[k][i]) N(i / L.h, i % L.h) = N(i / L.h, i % L.h) + xi.times_int(L.basis[k][i]);
    }
    return Ubar * (WMat::identity(L.h, WittVec::zero(B, m)) + N);
}

// D^{-1} sigma(h) D at w0, D = mu(p): the blocks f(a), p sigma_1(b), f(c), f(d).
EMat untwisted_sigma(const DisplayGroupElement& h, const HodgeEmbeddingDatum& D, const PDThickening& T) {
    EMat S = w_ghost0(sigma_of(h, D, T));
    RingPtr B = T.B();
    for (int i = 0; i < D.h; ++i)
        for (int j = 0; j < D.h; ++j) {
            if (D.mu[i] == 0 && D.mu[j] == 1) S(i, j) = S(i, j) * B->from_int(B->p());
            if (D.mu[i] == 1 && D.mu[j] == 0) S(i, j) = w0(frobenius_to(h.g(i, j), h.length()));
        }
    return S;
}

}  // namespace

TEST_CASE("F and V on the canonical thickening are the Galois images") {
    Rng g(51);
    RingPtr k = F(2, 2);
    auto D = HodgeEmbeddingDatum::gl2_determinant();
    auto T = PDThickening::canonical(k, 3);
    for (int it = 0; it < 20; ++it) {
        WMat U = random_group_element(D, k, 3, g);
        auto E = evaluate_banal_crystal(U, D, T);
        EMat expect = to_galois(U, 3) * e_from_int(T.B(), {{1, 0}, {0, 2}});
        CHECK(E.F.M == expect);
        CHECK(check_fv(E));
        CHECK(E.weights == std::vector<int>{0, 1});
        auto Et = evaluate_banal_crystal(U, D, T, 0);
        CHECK(Et.rank == 4);
        CHECK(Et.F.exp == 2);
        CHECK(check_fv(Et));
    }
}

TEST_CASE("evaluations are compatible with morphisms of thickenings") {
    Rng g(52);
    RingPtr k = F(3);
    auto D = HodgeEmbeddingDatum::gl(3, 1);
    auto T3 = PDThickening::canonical(k, 3), T2 = PDThickening::canonical(k, 2), T1 = PDThickening::trivial(k);
    auto Te = PDThickening::square_zero(k);
    for (int it = 0; it < 10; ++it) {
        WMat U = random_group_element(D, k, 3, g);
        auto E3 = evaluate_banal_crystal(U, D, T3);
        for (const auto& T : {T2, T1}) {
            auto direct = evaluate_banal_crystal(U, D, T);
            auto moved = transport(E3, T);
            CHECK(moved.F.M == direct.F.M);
            CHECK(moved.V.M == direct.V.M);
        }
        auto Eeps = evaluate_banal_crystal(U, D, Te);
        CHECK(transport(Eeps, T1).F.M == evaluate_banal_crystal(U, D, T1).F.M);
        CHECK(check_fv(Eeps));
    }
}

TEST_CASE("canonical thickening longer than the display is a precision error") {
    RingPtr k = F(2);
    auto D = HodgeEmbeddingDatum::gl(2, 1);
    WMat U = WMat::identity(2, WittVec::zero(k, 2));
    CHECK_THROWS_AS(evaluate_banal_crystal(U, D, PDThickening::canonical(k, 3)), PrecisionError);
}

TEST_CASE("crystalline Tate tensors lie in the twisted Fil^0") {
    RingPtr k = F(2, 2);
    auto T = PDThickening::canonical(k, 2);
    for (auto D : {HodgeEmbeddingDatum::gl2_determinant(), HodgeEmbeddingDatum::symplectic(2), HodgeEmbeddingDatum::symplectic(1)}) {
        for (auto& t : tate_tensors(D, T)) CHECK(in_twisted_fil0(t, D));
    }
    auto D = HodgeEmbeddingDatum::gl2_determinant();
    auto t = tate_tensors(D, T)[0];
    t.section[3] = T.B()->one();  // e2* (x) e2* has weight -2
    CHECK_FALSE(in_twisted_fil0(t, D));
}

TEST_CASE("Frobenius equivariance of the tensors") {
    Rng g(53);
    RingPtr k = F(2, 2);
    auto T = PDThickening::canonical(k, 3);
    for (auto D : {HodgeEmbeddingDatum::gl2_determinant(), HodgeEmbeddingDatum::symplectic(2)}) {
        for (int it = 0; it < 25; ++it) {
            WMat U = random_group_element(D, k, 3, g);
            for (bool ok : check_frobenius_equivariance(U, D, T)) CHECK(ok);
        }
    }
    auto D = with_identity_tensor(HodgeEmbeddingDatum::gl2_determinant());
    WMat bad = diag_unit(k, 3, k->gen());
    auto res = check_frobenius_equivariance(bad, D, T);
    CHECK_FALSE(res[0]);
    CHECK(res[1]);
    CHECK_THROWS_AS(check_frobenius_equivariance(bad, D, PDThickening::trivial(k)), PrecisionError);
}

TEST_CASE("tensor windows from banal displays satisfy the structure conditions") {
    Rng g(54);
    RingPtr k = F(3);
    for (auto D : {HodgeEmbeddingDatum::gl2_determinant(), HodgeEmbeddingDatum::symplectic(2)}) {
        for (int it = 0; it < 5; ++it) {
            WMat U = random_group_element(D, k, 2, g);
            auto W = banal_tensor_window(U, D);
            auto rep = check_smu_structure(W, D);
            CHECK(rep.all());
            CHECK(extract_U_beta(W, DisplayGroupElement{WMat::identity(D.h, WittVec::zero(k, 3))}, D) == U);
        }
    }
    auto D = HodgeEmbeddingDatum::gl2_determinant();
    WMat U = random_group_element(D, k, 2, g);

    auto off = banal_tensor_window(U, D);
    off.sections[0][3] = WittVec::one(k, 2);
    CHECK_FALSE(check_smu_structure(off, D).tensors_in_fil0);

    auto shape = banal_tensor_window(U, D);
    shape.window.rank0 = 0;
    shape.window.rank1 = 2;
    CHECK_FALSE(check_smu_structure(shape, D).mu_shaped_trivialization);

    auto outside = banal_tensor_window(diag_unit(k, 2, k->from_int(2)), D);
    auto rep = check_smu_structure(outside, D);
    CHECK(rep.tensors_in_fil0);
    CHECK_FALSE(rep.mu_shaped_trivialization);
    CHECK_FALSE(rep.frobenius_equivariant);
}

TEST_CASE("U_beta obeys the twist law") {
    Rng g(55);
    RingPtr k = F(2, 2);
    for (auto D : {HodgeEmbeddingDatum::gl2_determinant(), HodgeEmbeddingDatum::symplectic(2)}) {
        for (int it = 0; it < 5; ++it) {
            WMat U = random_group_element(D, k, 2, g);
            auto W = banal_tensor_window(U, D);
            auto beta = random_display_group_element(D, k, 2, g);
            auto h = random_display_group_element(D, k, 2, g);
            WMat Ub = extract_U_beta(W, beta, D);
            CHECK(fixes_tensors(Ub, D));
            CHECK(extract_U_beta(W, beta * h, D) == mu_action(Ub, h, D));
        }
    }
    auto D = HodgeEmbeddingDatum::gl2_determinant();
    auto W = banal_tensor_window(random_group_element(D, k, 2, g), D);
    WMat scale = WMat::identity(2, WittVec::zero(k, 3));
    scale(0, 0) = WittVec::teichmuller(k->gen(), 3);
    CHECK_THROWS_AS(extract_U_beta(W, DisplayGroupElement{scale}, D), std::invalid_argument);
}

TEST_CASE("lifts over k[eps] are matched by the relative display group") {
    Rng g(56);
    RingPtr k = F(2, 2);
    auto T = PDThickening::square_zero(k);
    for (auto D : {HodgeEmbeddingDatum::gl(2, 1), HodgeEmbeddingDatum::symplectic(2)}) {
        const LieAlgebra L = lie_algebra(D);
        int done = 0, tries = 0;
        while (done < 10 && tries < 2000) {
            ++tries;
            WMat Ua = random_group_element(D, k, 2, g);
            if (!twisted_nilpotent(residue_twisted_operator(w_ghost0(Ua), D))) continue;
            WMat Ubar = lift_through_section(Ua, T);
            WMat U1 = perturb(Ubar, L, T, g), U2 = perturb(Ubar, L, T, g);
            auto h = match_lifts(U1, U2, D, T);
            CHECK(mu_action(U2, h, D, T) == U1);
            CHECK(in_relative_display_group(h, D, T));
            CHECK(w_map(RingHom::reduction(T.B(), k), h.g) == WMat::identity(D.h, WittVec::zero(k, 3)));
            // The crystal F-matrices on B are intertwined by w0(tau(h)).
            auto TB = PDThickening::trivial(T.B());
            EMat F1 = evaluate_banal_crystal(U1, D, TB).F.M, F2 = evaluate_banal_crystal(U2, D, TB).F.M;
            CHECK(w_ghost0(tau_of(h)) * F1 == F2 * untwisted_sigma(h, D, T));
            ++done;
        }
        CHECK(done == 10);
    }
}

TEST_CASE("ordinary reductions do not converge") {
    RingPtr k = F(2);
    auto T = PDThickening::square_zero(k);
    auto D = HodgeEmbeddingDatum::gl(2, 1);
    Rng g(57);
    WMat Ubar = lift_through_section(WMat::identity(2, WittVec::zero(k, 2)), T);
    WMat U1 = perturb(Ubar, lie_algebra(D), T, g);
    CHECK_THROWS_AS(match_lifts(U1, Ubar, D, T), NonConvergence);
    CHECK_THROWS_AS(match_lifts(U1, Ubar, D, PDThickening::canonical(k, 2)), std::invalid_argument);
}

TEST_CASE("quasi-isogenies") {
    Rng g(58);
    RingPtr k = F(2);
    auto D = with_identity_tensor(HodgeEmbeddingDatum::gl(2, 1));
    WMat U = random_group_element(D, k, 5, g);
    WMat pI = WMat::identity(2, WittVec::zero(k, 5)).map([](const WittVec& x) { return x.times_int(2); });
    auto rep = quasi_isogeny_check({pI, 0}, U, U, D);
    CHECK(rep.intertwines);
    CHECK(rep.fixes_tensors);

    auto Ddet = HodgeEmbeddingDatum::gl2_determinant();
    WMat V = random_group_element(Ddet, k, 5, g);
    CHECK_FALSE(quasi_isogeny_check({pI, 0}, V, V, Ddet).fixes_tensors);
    CHECK(quasi_isogeny_check({pI, 1}, V, V, Ddet).ok());

    RingPtr k4 = F(2, 2);
    for (auto Dg : {HodgeEmbeddingDatum::gl2_determinant(), HodgeEmbeddingDatum::symplectic(2)}) {
        for (int it = 0; it < 5; ++it) {
            WMat U0 = random_group_element(Dg, k4, 3, g);
            auto h = random_display_group_element(Dg, k4, 3, g);
            WMat U1 = mu_action(U0, h, Dg);
            auto r = quasi_isogeny_check({inverse(tau_of(h)), 0}, U0, U1, Dg);
            CHECK(r.ok());
            CHECK_FALSE(quasi_isogeny_check({inverse(tau_of(h)), 0}, U0, U0 + WMat::identity(Dg.h, WittVec::zero(k4, 3)), Dg).intertwines);
        }
    }
}
