#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "wdk/displays.hpp"

using namespace wdk;
using namespace wdk::testing;

namespace {

Display random_display(RingPtr R, int m, std::vector<int> deg, Rng& g) {
    return display_from_standard_datum(std::move(deg), random_witt_invertible(R, m, static_cast<int>(deg.size()), g));
}

// Fil^n of a tensor product straight from the definition: the span of
// e_a (x) f_b with deg a + deg b >= n, which is a coordinate subspace.
std::vector<int> naive_tensor_fil(const std::vector<int>& d1, const std::vector<int>& d2, int n) {
    std::vector<int> out;
    for (size_t a = 0; a < d1.size(); ++a)
        for (size_t b = 0; b < d2.size(); ++b)
            if (d1[a] + d2[b] >= n) out.push_back(static_cast<int>(a * d2.size() + b));
    return out;
}

}  // namespace

TEST_CASE("standard data must have invertible Phi") {
    RingPtr k = F(2);
    WMat singular = w_from_int(k, 2, {{1, 1}, {1, 1}});
    CHECK_THROWS_AS(display_from_standard_datum({0, 1}, singular), NotInvertible);
    CHECK_THROWS(display_from_standard_datum({0}, singular));
    CHECK_NOTHROW(display_from_standard_datum({0, 1}, w_from_int(k, 2, {{0, 1}, {1, 0}})));
}

TEST_CASE("Hodge filtration of a tensor product") {
    Rng g(21);
    for (auto [d1, d2] : {std::pair{std::vector<int>{0, 1}, std::vector<int>{0, 1}},
                          {std::vector<int>{0, 0, 1}, std::vector<int>{1, 2}},
                          {std::vector<int>{-1, 0}, std::vector<int>{0, 1, 1}}}) {
        Display A = random_display(F(2), 2, d1, g), B = random_display(F(2), 2, d2, g);
        Display T = tensor_displays(A, B);
        HodgeFiltration direct = hodge_filtration(T);
        HodgeFiltration combined = tensor_filtration(hodge_filtration(A), A.rank(), hodge_filtration(B), B.rank());
        for (int n = -3; n <= 5; ++n) {
            CHECK(direct.fil(n) == naive_tensor_fil(d1, d2, n));
            CHECK(combined.fil(n) == direct.fil(n));
        }
        CHECK(T.phi == kron(A.phi, B.phi));
    }
}

TEST_CASE("unit display is neutral for the tensor product") {
    Rng g(22);
    Display A = random_display(F(3), 2, {0, 1}, g);
    Display T = tensor_displays(unit_display(F(3), 2), A);
    CHECK(T.degrees == A.degrees);
    CHECK(T.phi == A.phi);
}

TEST_CASE("displays and windows correspond") {
    Rng g(23);
    for (RingPtr R : {F(2), Tk(2, 1, 1), F(3, 2)}) {
        const int m = 3;
        Display D = random_display(R, m, {1, 0, 1, 0}, g);
        Window W = display_to_window(D);
        CHECK(W.rank0 == 2);
        CHECK(W.rank1 == 2);
        Display back = window_to_display(W);
        CHECK(back.degrees == std::vector<int>{0, 0, 1, 1});
        // F0# V# = V# F0# = p
        WMat p = WittVec::from_int(R, m, R->p()) * WMat::identity(4, D.phi.zero());
        CHECK(f0_sharp(W) * v_sharp(W) == p);
        CHECK(v_sharp(W) * f0_sharp(W) == p);
    }
    Display bad = random_display(F(2), 2, {0, 2}, g);
    CHECK_THROWS_AS(display_to_window(bad), std::invalid_argument);
}

TEST_CASE("nilpotence of V-sharp on basic examples") {
    RingPtr k = F(2);
    auto win = [&](std::vector<std::vector<i64>> psi, int r0) {
        Window W;
        W.rank0 = r0;
        W.rank1 = static_cast<int>(psi.size()) - r0;
        W.psi = w_from_int(k, 2, psi);
        return W;
    };
    CHECK_FALSE(zink_nilpotence(win({{1, 0}, {0, 1}}, 1)));  // ordinary
    CHECK(zink_nilpotence(win({{0, 1}, {1, 0}}, 1)));        // supersingular
    CHECK(zink_nilpotence(win({{1}}, 1)));                   // only L0
    CHECK_FALSE(zink_nilpotence(win({{1}}, 0)));             // only L1
}

TEST_CASE("nilpotence is invariant under base change to the residue field") {
    Rng g(24);
    RingPtr R = Tk(2, 2, 2), k = F(2, 2);
    RingHom red = RingHom::reduction(R, k);
    for (int it = 0; it < 20; ++it) {
        Display D = random_display(R, 2, {0, 1, 1}, g);
        CHECK(zink_nilpotence(display_to_window(D)) == zink_nilpotence(display_to_window(base_change_display(D, red))));
    }
}
