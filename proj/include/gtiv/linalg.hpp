#pragma once

#include <cassert>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "scalar.hpp"

namespace gtiv {

template <class R>
using Vec = std::vector<R>;

/// Small dense matrix over the scalar type R. Row-major; dimensions stay in
/// the single digits everywhere in this library, so plain Gaussian
/// elimination with full fraction arithmetic is the right tool.
template <class R>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, R(0)) {}
    Mat(std::initializer_list<std::initializer_list<R>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
            for (const auto& v : row) data_.push_back(v);
        }
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = R(1);
        return m;
    }
    static Mat diagonal(const Vec<R>& d) {
        Mat m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    R& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const R& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Vec<R> column(std::size_t j) const {
        Vec<R> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    Mat columns(std::size_t first, std::size_t count) const {
        Mat m(rows_, count);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < count; ++j) m(i, j) = (*this)(i, first + j);
        return m;
    }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
        Mat p(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const R& a = (*this)(i, k);
                if (scalar_traits<R>::is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
            }
        return p;
    }

    Vec<R> operator*(const Vec<R>& v) const {
        if (cols_ != v.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
        Vec<R> p(rows_, R(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) p[i] += (*this)(i, j) * v[j];
        return p;
    }

    Mat operator+(const Mat& o) const {
        Mat s(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] + o.data_[i];
        return s;
    }
    Mat operator-(const Mat& o) const {
        Mat s(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] - o.data_[i];
        return s;
    }
    Mat operator*(const R& c) const {
        Mat s(rows_, cols_);
        for (std::size_t i = 0; i < data_.size(); ++i) s.data_[i] = data_[i] * c;
        return s;
    }

    R trace() const {
        R t(0);
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    std::size_t rows_, cols_;
    std::vector<R> data_;
};

template <class R>
R dot(const Vec<R>& a, const Vec<R>& b) {
    R s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class R>
R determinant(Mat<R> m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: square matrix required");
    const std::size_t n = m.rows();
    R det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && scalar_traits<R>::is_zero(m(pivot, col))) ++pivot;
        if (pivot == n) return R(0);
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(pivot, j));
            det = -det;
        }
        det *= m(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            if (scalar_traits<R>::is_zero(m(i, col))) continue;
            R f = m(i, col) / m(col, col);
            for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

/// Gauss-Jordan inverse. Throws on singular input.
template <class R>
Mat<R> inverse(Mat<R> m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: square matrix required");
    const std::size_t n = m.rows();
    Mat<R> inv = Mat<R>::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && scalar_traits<R>::is_zero(m(pivot, col))) ++pivot;
        if (pivot == n) throw std::domain_error("inverse: singular matrix");
        if (pivot != col)
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(col, j), m(pivot, j));
                std::swap(inv(col, j), inv(pivot, j));
            }
        R p = m(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            m(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || scalar_traits<R>::is_zero(m(i, col))) continue;
            R f = m(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) -= f * m(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

/// Solves A x = b for square A; returns nothing when A is singular.
template <class R>
std::optional<Vec<R>> solve(Mat<R> a, Vec<R> b) {
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n) throw std::invalid_argument("solve: dimension mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && scalar_traits<R>::is_zero(a(pivot, col))) ++pivot;
        if (pivot == n) return std::nullopt;
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || scalar_traits<R>::is_zero(a(i, col))) continue;
            R f = a(i, col) / a(col, col);
            for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
            b[i] -= f * b[col];
        }
    }
    Vec<R> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a(i, i);
    return x;
}

template <class R>
std::size_t rank(Mat<R> m) {
    std::size_t r = 0;
    const std::size_t rows = m.rows(), cols = m.cols();
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t pivot = r;
        while (pivot < rows && scalar_traits<R>::is_zero(m(pivot, col))) ++pivot;
        if (pivot == rows) continue;
        if (pivot != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(m(r, j), m(pivot, j));
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (scalar_traits<R>::is_zero(m(i, col))) continue;
            R f = m(i, col) / m(r, col);
            for (std::size_t j = col; j < cols; ++j) m(i, j) -= f * m(r, j);
        }
        ++r;
    }
    return r;
}

/// Integer matrix power; exponent may be negative for invertible matrices.
template <class R>
Mat<R> matrix_power(const Mat<R>& a, long e) {
    Mat<R> base = e < 0 ? inverse(a) : a;
    unsigned long k = e < 0 ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Mat<R> result = Mat<R>::identity(a.rows());
    while (k) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

/// Moore-Penrose style left inverse (B^T B)^{-1} B^T for a matrix with
/// independent columns; recovers integer coordinates from lattice points.
template <class R>
Mat<R> left_inverse(const Mat<R>& b) {
    Mat<R> bt = b.transpose();
    return inverse(bt * b) * bt;
}

}  // namespace gtiv
