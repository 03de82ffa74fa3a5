#pragma once
// Shared fixtures for the unit tests: small rings and seeded generators.

#include "wdk/random.hpp"

namespace wdk::testing {

inline RingPtr F(int p, int r = 1) { return BaseRing::finite_field(p, BaseRing::default_minpoly(p, r)); }
inline RingPtr W(int p, int e, int r = 1) { return BaseRing::galois(p, e, BaseRing::default_minpoly(p, r)); }
// k[t]/(t^(deg+1))
inline RingPtr Tk(int p, int r, int deg) { return BaseRing::truncated_poly(F(p, r), 1, deg + 1); }

inline Rng rng(std::uint64_t salt = 0) { return Rng(0x5eed0000ULL + salt); }

}  // namespace wdk::testing
