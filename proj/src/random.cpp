#include "wdk/random.hpp"

namespace wdk {

Elem random_elem(RingPtr R, Rng& rng) {
    std::uniform_int_distribution<i64> d(0, R->modulus() - 1);
    Elem a = R->zero();
    for (auto& c : a.coords()) c = d(rng);
    return a;
}

Elem random_maximal(RingPtr R, Rng& rng) {
    Elem a = random_elem(R, rng);
    // zero the residue: constant-monomial coordinates become multiples of p
    for (int j = 0; j < R->r(); ++j) a.coords()[j] -= a.coords()[j] % R->p();
    return a;
}

Elem random_unit(RingPtr R, Rng& rng) {
    for (;;) {
        Elem a = random_elem(R, rng);
        if (a.is_unit()) return a;
    }
}

WittVec random_witt(RingPtr R, int m, Rng& rng) {
    std::vector<Elem> x;
    for (int i = 0; i < m; ++i) x.push_back(random_elem(R, rng));
    return WittVec(R, std::move(x));
}

WittVec random_witt_unit(RingPtr R, int m, Rng& rng) {
    WittVec w = random_witt(R, m, rng);
    w[0] = random_unit(R, rng);
    return w;
}

EMat random_matrix(RingPtr R, int rows, int cols, Rng& rng) {
    EMat A(rows, cols, R->zero());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) A(i, j) = random_elem(R, rng);
    return A;
}

WMat random_witt_matrix(RingPtr R, int m, int rows, int cols, Rng& rng) {
    WMat A(rows, cols, WittVec::zero(R, m));
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) A(i, j) = random_witt(R, m, rng);
    return A;
}

EMat random_invertible(RingPtr R, int n, Rng& rng) {
    // Rejection sampling is fast for small residue fields and keeps the
    // distribution uniform on GL_n.
    for (;;) {
        EMat A = random_matrix(R, n, n, rng);
        if (is_invertible(A)) return A;
    }
}

WMat random_witt_invertible(RingPtr R, int m, int n, Rng& rng) {
    for (;;) {
        WMat A = random_witt_matrix(R, m, n, n, rng);
        // invertibility only depends on the residue of w0
        EMat r = A.map([](const WittVec& x) { return x.ring()->residue(x[0]); });
        if (is_invertible(r)) return A;
    }
}

}  // namespace wdk
