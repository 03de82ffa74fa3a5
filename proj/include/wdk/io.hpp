#pragma once
// JSON encoding of ring elements, Witt vectors and matrices.
//
// An element is an integer (its image under Z -> R) or the array of its
// dim() coordinates. Output uses a bare integer exactly when dim() == 1.
// A Witt vector is an integer or an array of elements; a matrix is an array
// of rows.

#include "wdk/matrix.hpp"

namespace wdk {

nlohmann::json elem_to_json(const Elem& a);
Elem elem_from_json(RingPtr R, const nlohmann::json& j);

nlohmann::json witt_to_json(const WittVec& x);
// Arrays longer than m are truncated; shorter ones raise PrecisionError.
WittVec witt_from_json(RingPtr R, int m, const nlohmann::json& j);

nlohmann::json emat_to_json(const EMat& A);
EMat emat_from_json(RingPtr R, const nlohmann::json& j);
nlohmann::json wmat_to_json(const WMat& A);
WMat wmat_from_json(RingPtr R, int m, const nlohmann::json& j);

}  // namespace wdk
