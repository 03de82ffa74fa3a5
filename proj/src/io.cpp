#include "wdk/io.hpp"

namespace wdk {

using nlohmann::json;

json elem_to_json(const Elem& a) {
    if (a.coords().size() == 1) return a.coords()[0];
    return json(std::vector<i64>(a.coords().begin(), a.coords().end()));
}

Elem elem_from_json(RingPtr R, const json& j) {
    if (j.is_number_integer()) return R->from_int(j.get<i64>());
    if (!j.is_array() || static_cast<int>(j.size()) != R->dim())
        throw std::invalid_argument("element: expected an integer or " + std::to_string(R->dim()) + " coordinates over " + R->name());
    Elem::Coords c;
    for (auto& v : j) {
        i64 x = v.get<i64>() % R->modulus();
        c.push_back(x < 0 ? x + R->modulus() : x);
    }
    return Elem(R, c);
}

json witt_to_json(const WittVec& x) {
    json a = json::array();
    for (auto& e : x.coords()) a.push_back(elem_to_json(e));
    return a;
}

WittVec witt_from_json(RingPtr R, int m, const json& j) {
    if (j.is_number_integer()) return WittVec::from_int(R, m, j.get<i64>());
    if (!j.is_array() || j.empty()) throw std::invalid_argument("Witt vector: expected an integer or a nonempty array");
    if (static_cast<int>(j.size()) < m)
        throw PrecisionError("Witt vector of length " + std::to_string(j.size()) + " given where length " + std::to_string(m) + " is needed");
    std::vector<Elem> xs;
    for (int i = 0; i < m; ++i) xs.push_back(elem_from_json(R, j[i]));
    return WittVec(R, std::move(xs));
}

namespace {

template <class T, class F>
Matrix<T> matrix_from_json(const json& j, const T& zero, F entry) {
    if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) throw std::invalid_argument("matrix: expected a nonempty array of rows");
    const int rows = static_cast<int>(j.size()), cols = static_cast<int>(j[0].size());
    Matrix<T> A(rows, cols, zero);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols) throw std::invalid_argument("matrix: rows of different lengths");
        for (int c = 0; c < cols; ++c) A(i, c) = entry(j[i][c]);
    }
    return A;
}

template <class T, class F>
json matrix_to_json(const Matrix<T>& A, F entry) {
    json rows = json::array();
    for (int i = 0; i < A.rows(); ++i) {
        json r = json::array();
        for (int c = 0; c < A.cols(); ++c) r.push_back(entry(A(i, c)));
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

json emat_to_json(const EMat& A) { return matrix_to_json(A, elem_to_json); }
json wmat_to_json(const WMat& A) { return matrix_to_json(A, witt_to_json); }

EMat emat_from_json(RingPtr R, const json& j) {
    return matrix_from_json(j, R->zero(), [&](const json& e) { return elem_from_json(R, e); });
}

WMat wmat_from_json(RingPtr R, int m, const json& j) {
    return matrix_from_json(j, WittVec::zero(R, m), [&](const json& e) { return witt_from_json(R, m, e); });
}

}  // namespace wdk
