#include "wdk/matrix.hpp"

namespace wdk {

WMat w_truncate(const WMat& A, int m) {
    return A.map([m](const WittVec& x) { return x.truncated(m); });
}

WMat w_pad(const WMat& A, int m) {
    return A.map([m](const WittVec& x) { return x.padded(m); });
}

WMat w_frobenius(const WMat& A) {
    return A.map([](const WittVec& x) { return frobenius(x); });
}

EMat w_ghost0(const WMat& A) {
    return A.map([](const WittVec& x) { return w0(x); });
}

WMat w_map(const RingHom& f, const WMat& A) {
    return A.map([&f](const WittVec& x) { return map_witt(f, x); });
}

WMat w_teichmuller(const EMat& A, int m) {
    return A.map([m](const Elem& a) { return WittVec::teichmuller(a, m); });
}

WMat w_from_int(RingPtr R, int m, const std::vector<std::vector<i64>>& rows) {
    const int nr = static_cast<int>(rows.size()), nc = nr ? static_cast<int>(rows[0].size()) : 0;
    WMat A(nr, nc, WittVec::zero(R, m));
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) A(i, j) = WittVec::from_int(R, m, rows[i][j]);
    return A;
}

EMat e_from_int(RingPtr R, const std::vector<std::vector<i64>>& rows) {
    const int nr = static_cast<int>(rows.size()), nc = nr ? static_cast<int>(rows[0].size()) : 0;
    EMat A(nr, nc, R->zero());
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j) A(i, j) = R->from_int(rows[i][j]);
    return A;
}

EMat e_map(const RingHom& f, const EMat& A) {
    return A.map([&f](const Elem& a) { return f(a); });
}

}  // namespace wdk
