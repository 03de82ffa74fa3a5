#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"
#include "wdk/frames.hpp"

using namespace wdk;
using namespace wdk::testing;

namespace {

void require_axioms(const Frame& F, std::uint64_t seed) {
    Rng g(seed);
    auto report = F.axiom_report(g, 6);
    REQUIRE(report.is_array());
    REQUIRE(!report.empty());
    std::string prev;
    for (auto& entry : report) {
        const std::string id = entry.at("id").get<std::string>();
        CHECK(prev < id);  // sorted, one entry per check
        prev = id;
        INFO("axiom ", id, " on ", F.ring()->name(), " length ", F.length());
        CHECK(entry.at("pass").get<bool>());
    }
}

// Divided ghost components over Z/p^e for xi_i = p * y_i, computed with
// plain integers: L_n = sum_i xi_i^(p^(n-i)) / p^(n-i).
std::vector<i64> integer_log(int p, int e, const std::vector<i64>& y) {
    const BigInt N = boost::multiprecision::pow(BigInt(p), e);
    std::vector<i64> out;
    for (size_t n = 0; n < y.size(); ++n) {
        BigInt s = 0;
        for (size_t i = 0; i <= n; ++i) {
            const unsigned k = static_cast<unsigned>(n - i);
            BigInt pk = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(boost::multiprecision::pow(BigInt(p), k)));
            BigInt xi_pow = boost::multiprecision::pow(BigInt(p * y[i]), static_cast<unsigned>(boost::multiprecision::pow(BigInt(p), k)));
            (void)pk;
            s += xi_pow / boost::multiprecision::pow(BigInt(p), k);
        }
        s %= N;
        out.push_back(static_cast<i64>(s));
    }
    return out;
}

}  // namespace

TEST_CASE("Witt frames satisfy the frame axioms") {
    std::uint64_t seed = 10;
    for (RingPtr R : {F(2), F(2, 2), F(3), Tk(2, 1, 2), W(2, 2)})
        for (int m : {1, 2, 3}) require_axioms(Frame::witt(R, m), seed++);
}

TEST_CASE("relative frames satisfy the frame axioms") {
    std::uint64_t seed = 100;
    for (int m : {1, 2, 3}) {
        require_axioms(Frame::relative(PDThickening::square_zero(F(2, 2)), m), seed++);
        require_axioms(Frame::relative(PDThickening::square_zero(Tk(3, 1, 1), 2), m), seed++);
        require_axioms(Frame::relative(PDThickening::canonical(F(2), 3), m), seed++);
        require_axioms(Frame::relative(PDThickening::canonical(F(3), 2), m), seed++);
        require_axioms(Frame::relative(PDThickening::trivial(F(2)), m), seed++);
    }
}

TEST_CASE("truncations are semi-frames without sigma") {
    Frame F4 = Frame::witt(F(2), 4);
    Frame T2 = F4.truncate(2);
    CHECK(!T2.has_sigma());
    CHECK(T2.length() == 2);
    require_axioms(T2, 7);
}

TEST_CASE("divided-power logarithm on the canonical thickening") {
    Rng g(5);
    for (auto [p, e] : {std::pair{2, 4}, {3, 3}, {5, 2}}) {
        PDThickening T = PDThickening::canonical(F(p), e);
        RingPtr B = T.B();
        for (int it = 0; it < 20; ++it) {
            const int m = 3;
            std::vector<i64> y(m);
            std::vector<Elem> xs;
            for (auto& v : y) {
                v = static_cast<i64>(g() % static_cast<std::uint64_t>(ipow(p, e)));
                xs.push_back(B->from_int(p * v));
            }
            WittVec xi(B, xs);
            auto log = pd_log(T, xi);
            auto want = integer_log(p, e, y);
            for (int n = 0; n < m; ++n) CHECK(log[n] == B->from_int(want[n]));
            CHECK(pd_log_inv(T, log) == xi);
        }
    }
}

TEST_CASE("logarithm shift laws") {
    Rng g(6);
    for (PDThickening T : {PDThickening::canonical(F(2), 3), PDThickening::square_zero(F(3, 2)), PDThickening::canonical(F(3), 2)}) {
        RingPtr B = T.B();
        for (int it = 0; it < 10; ++it) {
            std::vector<Elem> log;
            for (int n = 0; n < 3; ++n) {
                Elem b = random_elem(B, g);
                log.push_back(b - T.section(T.project(b)));
            }
            WittVec xi = pd_log_inv(T, log);
            CHECK(pd_log(T, xi) == log);
            // log(V xi) = [0, log xi]
            auto lv = pd_log(T, verschiebung_extend(xi));
            CHECK(lv[0].is_zero());
            for (int n = 0; n < 3; ++n) CHECK(lv[n + 1] == log[n]);
            // log(F xi)_n = p log(xi)_{n+1}
            auto lf = pd_log(T, frobenius_to(xi, 2));
            for (int n = 0; n < 2; ++n) CHECK(lf[n] == log[n + 1].scaled(B->p()));
            // log is additive
            WittVec eta = pd_log_inv(T, {log[1], log[0], log[2]});
            auto ls = pd_log(T, xi + eta);
            CHECK(ls[0] == log[0] + log[1]);
            CHECK(ls[2] == log[2] + log[2]);
        }
    }
}

TEST_CASE("graded Nakayama agrees with direct inversion") {
    Rng g(7);
    std::vector<Frame> frames{Frame::witt(F(2), 3), Frame::witt(Tk(3, 1, 1), 2),
                              Frame::relative(PDThickening::canonical(F(2), 3), 2),
                              Frame::relative(PDThickening::square_zero(F(2)), 2)};
    for (const Frame& Fr : frames)
        for (const std::vector<int>& deg : {std::vector<int>{0, 1}, {0, 0, 1}, {-1, 0, 0}, {0, 1, 1}}) {
            int bijective = 0;
            for (int it = 0; it < 25; ++it) {
                GradedMap f = random_graded_map(Fr, deg, deg, g);
                const bool nak = nakayama_check(Fr, f);
                auto inv = graded_inverse(Fr, f);
                CHECK(nak == inv.has_value());
                if (inv) {
                    ++bijective;
                    GradedMap id = compose(f, *inv);
                    CHECK(id.tau_matrix == WMat::identity(static_cast<int>(deg.size()), f.tau_matrix.zero()));
                }
            }
            CHECK(bijective > 0);
        }
}

TEST_CASE("multiplication by t is not an isomorphism") {
    for (const Frame& Fr : {Frame::witt(F(2), 2), Frame::witt(F(3), 3)}) {
        WittVec one = WittVec::one(Fr.ring(), Fr.length());
        GradedMap t{{0}, {1}, WMat(1, 1, one)};
        t.tau_matrix(0, 0) = one;  // t in S_{-1}, tau(t) = 1
        validate_graded_map(Fr, t);
        CHECK_FALSE(nakayama_check(Fr, t));
        CHECK_FALSE(graded_inverse(Fr, t).has_value());
    }
}

TEST_CASE("truncation towers are reconstructed") {
    Rng g(8);
    for (const Frame& Fr : {Frame::witt(F(2), 3), Frame::witt(F(3, 2), 2), Frame::witt(Tk(2, 1, 1), 3)}) {
        const std::vector<int> deg{0, 1, 1};
        TruncationTower T = random_tower(Fr, deg, g);
        TowerLimit L = tower_reconstruct(T);
        CHECK(L.degrees == deg);
        REQUIRE(static_cast<int>(L.psi.size()) == Fr.length());
        for (int m = 1; m <= Fr.length(); ++m) CHECK(nakayama_check(Fr.truncate(m), L.psi[m - 1]));
        for (int m = 1; m < Fr.length(); ++m) {
            GradedMap lhs = compose(T.theta[m - 1], truncate_map(L.psi[m], m));
            CHECK(lhs.tau_matrix == L.psi[m - 1].tau_matrix);
        }
    }
}

TEST_CASE("inconsistent towers are rejected") {
    Rng g(9);
    Frame Fr = Frame::witt(F(2), 3);
    TruncationTower T = random_tower(Fr, {0, 1}, g);
    T.degrees[0] = {0, 2};
    CHECK_THROWS_AS(tower_reconstruct(T), std::invalid_argument);
    TruncationTower U = random_tower(Fr, {0, 1}, g);
    U.theta[0].tau_matrix = WMat(2, 2, U.theta[0].tau_matrix.zero());
    CHECK_THROWS_AS(tower_reconstruct(U), std::invalid_argument);
}
