#pragma once
// Seeded sampling of ring elements, Witt vectors and matrices.

#include <random>

#include "wdk/matrix.hpp"

namespace wdk {

using Rng = std::mt19937_64;

Elem random_elem(RingPtr R, Rng& rng);
// Element of the maximal ideal (residue zero).
Elem random_maximal(RingPtr R, Rng& rng);
Elem random_unit(RingPtr R, Rng& rng);
WittVec random_witt(RingPtr R, int m, Rng& rng);
WittVec random_witt_unit(RingPtr R, int m, Rng& rng);
EMat random_matrix(RingPtr R, int rows, int cols, Rng& rng);
WMat random_witt_matrix(RingPtr R, int m, int rows, int cols, Rng& rng);
// Invertible matrices: a random product of elementary and diagonal-unit factors.
EMat random_invertible(RingPtr R, int n, Rng& rng);
WMat random_witt_invertible(RingPtr R, int m, int n, Rng& rng);

}  // namespace wdk
