#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "wdk/deform.hpp"

using namespace wdk;
using namespace wdk::testing;

namespace {

// Symmetric 2x2 matrices are the weight -1 part of sp4 in the basis with J = [[0, I], [-I, 0]].
int symmetric_kernel_dimension(int g) { return g * (g + 1) / 2; }

// An adjoint-nilpotent element of G over k: the antidiagonal form times a
// random Levi element diag(A, A^{-t}) and a unipotent in the b-block.
WMat supersingular_symplectic(RingPtr k, int m, Rng& g) {
    const int n = 2;
    WittVec z = WittVec::zero(k, m);
    WMat A = random_witt_invertible(k, m, n, g);
    WMat Ait = inverse(A).transpose();
    WMat levi(2 * n, 2 * n, z), J(2 * n, 2 * n, z);
    levi.set_block(0, 0, A);
    levi.set_block(n, n, Ait);
    for (int i = 0; i < n; ++i) {
        J(i, n + i) = WittVec::one(k, m);
        J(n + i, i) = -WittVec::one(k, m);
    }
    return J * levi;
}

std::vector<Elem> random_in_t(RingPtr R, int count, Rng& g) {
    // Random elements of the ideal (t): zero constant term.
    std::vector<Elem> out;
    for (int j = 0; j < count; ++j) {
        Elem x = random_elem(R, g);
        const int r = R->r();
        for (int c = 0; c < r; ++c) x.coords()[c] = 0;
        out.push_back(x);
    }
    return out;
}

WMat random_gauge(const HodgeEmbeddingDatum& D, RingPtr R, int m, Rng& g) {
    const LieAlgebra L = lie_algebra(D);
    WittVec z = WittVec::zero(R, m + 1);
    auto unip = [&](int w, bool in_I) {
        WMat N = WMat::identity(D.h, z);
        for (int k : L.of_weight(w)) {
            std::vector<Elem> xs;
            for (int i = 0; i < m + 1; ++i) xs.push_back(random_maximal(R, g));
            WittVec a(R, xs);
            if (in_I) a = verschiebung(a);
            for (int i = 0; i < D.h * D.h; ++i)
                if (L.basis[k][i]) N(i / D.h, i % D.h) = N(i / D.h, i % D.h) + a.times_int(L.basis[k][i]);
        }
        return N;
    };
    return unip(1, false) * unip(-1, true);
}

}  // namespace

TEST_CASE("opposite unipotent bases") {
    auto b = opposite_unipotent_basis(HodgeEmbeddingDatum::gl(2, 1));
    REQUIRE(b.size() == 1);
    CHECK(b[0].matrix == std::vector<i64>{0, 1, 0, 0});
    for (int h = 2; h <= 4; ++h)
        for (int d = 1; d < h; ++d) CHECK(opposite_unipotent_basis(HodgeEmbeddingDatum::gl(h, d)).size() == static_cast<size_t>(d * (h - d)));
    for (int g = 1; g <= 2; ++g) {
        auto bs = opposite_unipotent_basis(HodgeEmbeddingDatum::symplectic(g));
        CHECK(bs.size() == static_cast<size_t>(symmetric_kernel_dimension(g)));
        const int h = 2 * g;
        for (auto& x : bs) {
            // N^2 = 0 over the integers
            for (int i = 0; i < h; ++i)
                for (int j = 0; j < h; ++j) {
                    i64 s = 0;
                    for (int k = 0; k < h; ++k) s += x.matrix[i * h + k] * x.matrix[k * h + j];
                    CHECK(s == 0);
                }
        }
    }
}

TEST_CASE("universal deformation of GL2") {
    RingPtr k = F(2, 2);
    auto D = HodgeEmbeddingDatum::gl(2, 1);
    WMat u0 = w_from_int(k, 3, {{0, 1}, {1, 0}});
    auto U = universal_deformation(u0, D, 2, 2);
    RingPtr R = U.ring.ring();
    CHECK(U.u_univ.zero().length() == 2);
    CHECK(U.h_univ(0, 1) == WittVec::teichmuller(R->var(0), 2));
    CHECK(U.h_univ(1, 0).is_zero());
    CHECK(U.h_univ(0, 0) == WittVec::one(R, 2));
    CHECK(w_map(RingHom::reduction(R, k), U.u_univ) == w_truncate(u0, 2));
    CHECK(fixes_tensors(U.u_univ, D));
}

TEST_CASE("the universal symplectic deformation stays in G") {
    Rng g(61);
    RingPtr k = F(2, 2);
    auto D = HodgeEmbeddingDatum::symplectic(2);
    WMat u0 = supersingular_symplectic(k, 3, g);
    REQUIRE(fixes_tensors(u0, D));
    auto U = universal_deformation(u0, D, 2, 2);
    CHECK(U.ring.variables == 3);
    CHECK(fixes_tensors(U.u_univ, D));
    CHECK(universal_compatibility(D, k, 2, 2));
    CHECK(universal_compatibility(HodgeEmbeddingDatum::gl(3, 1), k, 1, 1));
}

TEST_CASE("classification inverts specialization") {
    Rng g(62);
    RingPtr k = F(2, 2);
    for (auto D : {HodgeEmbeddingDatum::gl(2, 1), HodgeEmbeddingDatum::symplectic(2)}) {
        WMat u0 = D.h == 2 ? w_from_int(k, 3, {{0, 1}, {1, 0}}) : supersingular_symplectic(k, 3, g);
        auto univ = universal_deformation(u0, D, 2, 2);
        RingPtr R = univ.ring.ring();
        for (int it = 0; it < 5; ++it) {
            auto c = random_in_t(R, univ.ring.variables, g);
            WMat U = specialize(univ.u_univ, c);
            auto cls = classify_deformation(U, u0, D);
            CHECK(cls.coordinates == c);
            CHECK(cls.gauge_fixes_tensors);
        }
    }
}

TEST_CASE("pure gauge deformations have zero coordinates") {
    Rng g(63);
    RingPtr k = F(2, 2);
    for (auto D : {HodgeEmbeddingDatum::gl(2, 1), HodgeEmbeddingDatum::symplectic(2)}) {
        RingPtr R = DeformationRing::for_datum(D, k, 2, 2).ring();
        WMat u0 = D.h == 2 ? w_from_int(k, 3, {{0, 1}, {1, 0}}) : supersingular_symplectic(k, 3, g);
        WMat u0R = u0.map([&](const WittVec& x) { return witt_from_residue(x, R, 2); });
        for (int it = 0; it < 3; ++it) {
            DisplayGroupElement h{random_gauge(D, R, 2, g)};
            REQUIRE(in_display_group(h, D));
            WMat U = mu_action(u0R, h, D);
            auto cls = classify_deformation(U, u0, D);
            for (auto& c : cls.coordinates) CHECK(c.is_zero());
            CHECK(mu_action(u0R, cls.gauge, D) == U);
        }
    }
}

TEST_CASE("random lifts over k[eps] substitute back") {
    Rng g(64);
    RingPtr k = F(3);
    RingPtr R = Tk(3, 1, 1);
    auto D = HodgeEmbeddingDatum::gl(3, 1);
    int done = 0;
    for (int it = 0; it < 400 && done < 5; ++it) {
        WMat u0 = random_witt_invertible(k, 2, 3, g);
        if (!twisted_nilpotent(residue_twisted_operator(w_ghost0(u0), D))) continue;
        WMat lift = u0.map([&](const WittVec& x) { return witt_from_residue(x, R, 2); });
        WMat pert = random_witt_matrix(R, 2, 3, 3, g).map([&](const WittVec& x) {
            std::vector<Elem> xs;
            for (int i = 0; i < 2; ++i) xs.push_back(x[i] * R->var(0));
            return WittVec(R, xs);
        });
        WMat U = lift + pert;
        auto cls = classify_deformation(U, u0, D);
        WMat hu = inverse(unipotent_element(opposite_unipotent_basis(D), cls.coordinates, 3, 2)) * lift;
        CHECK(mu_action(hu, cls.gauge, D) == U);
        ++done;
    }
    CHECK(done == 5);
}

TEST_CASE("classification errors") {
    RingPtr k = F(2);
    RingPtr R = Tk(2, 1, 1);
    auto D = HodgeEmbeddingDatum::gl(2, 1);
    WMat ordinary = WMat::identity(2, WittVec::zero(k, 2));
    WMat lift = ordinary.map([&](const WittVec& x) { return witt_from_residue(x, R, 2); });
    CHECK_THROWS_AS(classify_deformation(lift, ordinary, D), NonConvergence);
    WMat other = w_from_int(k, 2, {{0, 1}, {1, 0}});
    CHECK_THROWS_AS(classify_deformation(lift, other, D), std::invalid_argument);
}

TEST_CASE("factoring through the symplectic deformation space") {
    Rng g(65);
    RingPtr k = F(2, 2);
    RingPtr R = Tk(2, 2, 1);
    auto D = HodgeEmbeddingDatum::symplectic(2);
    auto Dgl = HodgeEmbeddingDatum::gl(4, 2);
    const auto bGL = opposite_unipotent_basis(Dgl);
    for (int it = 0; it < 5; ++it) {
        WMat u0 = supersingular_symplectic(k, 2, g);
        WMat lift = u0.map([&](const WittVec& x) { return witt_from_residue(x, R, 2); });
        Elem eps = R->var(0);
        Elem a = random_unit(R, g) * eps, b = random_unit(R, g) * eps, c = random_unit(R, g) * eps;

        // Symmetric direction: [[a, b], [b, c]]
        WMat Usym = inverse(unipotent_element(bGL, {a, b, b, c}, 4, 2)) * lift;
        auto yes = tensor_factorization_test(Usym, u0, D);
        CHECK(yes.factors);
        REQUIRE(yes.witness.has_value());
        CHECK(yes.witness->all());

        // Add a gauge on top: still factors.
        DisplayGroupElement h{random_gauge(Dgl, R, 2, g)};
        auto gauged = tensor_factorization_test(mu_action(Usym, h, Dgl), u0, D);
        CHECK(gauged.factors);
        REQUIRE(gauged.witness.has_value());
        CHECK(gauged.witness->all());

        // Non-symmetric direction.
        WMat Uns = inverse(unipotent_element(bGL, {R->zero(), a, R->zero(), R->zero()}, 4, 2)) * lift;
        auto no = tensor_factorization_test(Uns, u0, D);
        CHECK_FALSE(no.factors);
        CHECK_FALSE(no.witness.has_value());

        auto plain = tensor_factorization_test(lift, u0, D);
        CHECK(plain.factors);
    }
}
