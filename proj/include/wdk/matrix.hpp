#pragma once
// Dense matrices over Elem or WittVec. A matrix carries a zero prototype so
// that empty blocks (rank-0 pieces of a grading) still know their ring.

#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "wdk/witt.hpp"

namespace wdk {

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, const T& zero) : r_(rows), c_(cols), zero_(zero), a_(static_cast<size_t>(rows) * cols, zero) {}

    static Matrix identity(int n, const T& zero) {
        Matrix m(n, n, zero);
        for (int i = 0; i < n; ++i) m(i, i) = one_like(zero);
        return m;
    }
    static Matrix diagonal(const std::vector<T>& d, const T& zero) {
        Matrix m(static_cast<int>(d.size()), static_cast<int>(d.size()), zero);
        for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    const T& zero() const { return zero_; }
    T& operator()(int i, int j) { return a_[static_cast<size_t>(i) * c_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * c_ + j]; }

    bool is_zero() const {
        for (auto& x : a_)
            if (!wdk::is_zero(x)) return false;
        return true;
    }
    bool is_square() const { return r_ == c_; }

    friend bool operator==(const Matrix& a, const Matrix& b) { return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_; }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        same_shape(a, b);
        Matrix m = a;
        for (size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = m.a_[i] + b.a_[i];
        return m;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        same_shape(a, b);
        Matrix m = a;
        for (size_t i = 0; i < m.a_.size(); ++i) m.a_[i] = m.a_[i] - b.a_[i];
        return m;
    }
    Matrix operator-() const {
        Matrix m = *this;
        for (auto& x : m.a_) x = -x;
        return m;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.c_ != b.r_) throw std::invalid_argument("matrix product: shape mismatch");
        Matrix m(a.r_, b.c_, a.zero_);
        for (int i = 0; i < a.r_; ++i)
            for (int k = 0; k < a.c_; ++k) {
                const T& x = a(i, k);
                if (wdk::is_zero(x)) continue;
                for (int j = 0; j < b.c_; ++j) {
                    const T& y = b(k, j);
                    if (!wdk::is_zero(y)) m(i, j) = m(i, j) + x * y;
                }
            }
        return m;
    }
    friend Matrix operator*(const T& s, const Matrix& a) {
        Matrix m = a;
        for (auto& x : m.a_) x = s * x;
        return m;
    }

    Matrix transpose() const {
        Matrix m(c_, r_, zero_);
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    Matrix block(int r0, int c0, int nr, int nc) const {
        Matrix m(nr, nc, zero_);
        for (int i = 0; i < nr; ++i)
            for (int j = 0; j < nc; ++j) m(i, j) = (*this)(r0 + i, c0 + j);
        return m;
    }
    void set_block(int r0, int c0, const Matrix& b) {
        for (int i = 0; i < b.r_; ++i)
            for (int j = 0; j < b.c_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    template <class F>
    auto map(F&& f) const -> Matrix<std::decay_t<decltype(f(std::declval<const T&>()))>> {
        using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
        Matrix<U> m(r_, c_, f(zero_));
        for (int i = 0; i < r_; ++i)
            for (int j = 0; j < c_; ++j) m(i, j) = f((*this)(i, j));
        return m;
    }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (int i = 0; i < r_; ++i) {
            os << (i ? ", [" : "[");
            for (int j = 0; j < c_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
            os << "]";
        }
        os << "]";
        return os.str();
    }

private:
    static void same_shape(const Matrix& a, const Matrix& b) {
        if (a.r_ != b.r_ || a.c_ != b.c_) throw std::invalid_argument("matrix sum: shape mismatch");
    }

    int r_ = 0, c_ = 0;
    T zero_{};
    std::vector<T> a_;
};

using EMat = Matrix<Elem>;
using WMat = Matrix<WittVec>;

// Gauss-Jordan elimination with unit pivots. Over a local ring a square matrix
// is invertible exactly when some pivot in each column is a unit.
template <class T>
Matrix<T> inverse(const Matrix<T>& A) {
    if (!A.is_square()) throw std::invalid_argument("inverse of a non-square matrix");
    const int n = A.rows();
    Matrix<T> M = A, X = Matrix<T>::identity(n, A.zero());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (is_unit(M(i, col))) {
                piv = i;
                break;
            }
        if (piv < 0) throw NotInvertible("matrix is not invertible");
        if (piv != col)
            for (int j = 0; j < n; ++j) {
                std::swap(M(piv, j), M(col, j));
                std::swap(X(piv, j), X(col, j));
            }
        T s = wdk::inverse(M(col, col));
        for (int j = 0; j < n; ++j) {
            M(col, j) = s * M(col, j);
            X(col, j) = s * X(col, j);
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || is_zero(M(i, col))) continue;
            T f = M(i, col);
            for (int j = 0; j < n; ++j) {
                M(i, j) = M(i, j) - f * M(col, j);
                X(i, j) = X(i, j) - f * X(col, j);
            }
        }
    }
    return X;
}

template <class T>
bool is_invertible(const Matrix<T>& A) {
    if (!A.is_square()) return false;
    try {
        (void)inverse(A);
        return true;
    } catch (const NotInvertible&) {
        return false;
    }
}

// Characteristic polynomial det(X - A), coefficients from X^0 up to X^n,
// by Berkowitz's division-free algorithm.
template <class T>
std::vector<T> charpoly(const Matrix<T>& A) {
    if (!A.is_square()) throw std::invalid_argument("charpoly of a non-square matrix");
    const int n = A.rows();
    const T zero = A.zero(), one = one_like(zero);
    // v holds the coefficients (highest degree first) of the char poly of the
    // leading principal r x r submatrix.
    std::vector<T> v{one};
    for (int r = 0; r < n; ++r) {
        // Partition the (r+1)x(r+1) leading block as [[M, C], [R, a]].
        const T& a = A(r, r);
        // Toeplitz column: 1, -a, -R C, -R M C, ..., -R M^{r-1} C
        std::vector<T> col{one, -a};
        std::vector<T> x(r);
        for (int i = 0; i < r; ++i) x[i] = A(i, r);  // C
        for (int k = 0; k < r; ++k) {
            T s = zero;
            for (int i = 0; i < r; ++i) s = s + A(r, i) * x[i];
            col.push_back(-s);
            std::vector<T> y(r, zero);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j) y[i] = y[i] + A(i, j) * x[j];
            x = std::move(y);
        }
        std::vector<T> w(r + 2, zero);
        for (int i = 0; i < r + 2; ++i)
            for (int j = 0; j <= i && j <= r; ++j) w[i] = w[i] + col[i - j] * v[j];
        v = std::move(w);
    }
    std::vector<T> out(v.rbegin(), v.rend());
    return out;
}

template <class T>
T determinant(const Matrix<T>& A) {
    auto c = charpoly(A);
    T d = c[0];
    return A.rows() % 2 ? -d : d;
}

template <class T>
Matrix<T> kron(const Matrix<T>& A, const Matrix<T>& B) {
    Matrix<T> m(A.rows() * B.rows(), A.cols() * B.cols(), A.zero());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) {
            if (is_zero(A(i, j))) continue;
            for (int k = 0; k < B.rows(); ++k)
                for (int l = 0; l < B.cols(); ++l) m(i * B.rows() + k, j * B.cols() + l) = A(i, j) * B(k, l);
        }
    return m;
}

// Entrywise helpers for Witt matrices.
WMat w_truncate(const WMat& A, int m);
WMat w_pad(const WMat& A, int m);
WMat w_frobenius(const WMat& A);
EMat w_ghost0(const WMat& A);  // w0 entrywise
WMat w_map(const RingHom& f, const WMat& A);
WMat w_teichmuller(const EMat& A, int m);
WMat w_from_int(RingPtr R, int m, const std::vector<std::vector<i64>>& rows);
EMat e_from_int(RingPtr R, const std::vector<std::vector<i64>>& rows);
EMat e_map(const RingHom& f, const EMat& A);

}  // namespace wdk
