#include "observerlab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace observerlab {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("Matrix: dimensions must be positive");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.begin()->size() : 0;
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) {
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        }
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
    if (cols_ != rhs.rows_) {
        throw std::invalid_argument("Matrix multiply: inner dimensions differ");
    }
    Matrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const double a = (*this)(i, k);
            for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
        }
    return out;
}

Matrix Matrix::operator+(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw std::invalid_argument("Matrix add: shapes differ");
    }
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& rhs) const {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw std::invalid_argument("Matrix subtract: shapes differ");
    }
    Matrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
}

namespace {

Matrix minor_of(const Matrix& m, std::size_t skip_r, std::size_t skip_c) {
    const std::size_t n = m.rows();
    Matrix out(n - 1, n - 1);
    std::size_t oi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == skip_r) continue;
        std::size_t oj = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == skip_c) continue;
            out(oi, oj++) = m(i, j);
        }
        ++oi;
    }
    return out;
}

}  // namespace

double det(const Matrix& m) {
    if (!m.square()) {
        throw std::invalid_argument("det: matrix must be square");
    }
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    double acc = 0.0;
    double sign = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        acc += sign * m(0, j) * det(minor_of(m, 0, j));
        sign = -sign;
    }
    return acc;
}

Matrix adjugate(const Matrix& m) {
    if (!m.square()) {
        throw std::invalid_argument("adjugate: matrix must be square");
    }
    const std::size_t n = m.rows();
    if (n == 1) {
        Matrix out(1, 1);
        out(0, 0) = 1.0;  // adj(M) M = det(M) I for the empty minor
        return out;
    }
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double cof = (((i + j) % 2) ? -1.0 : 1.0) * det(minor_of(m, i, j));
            out(j, i) = cof;  // transpose of the cofactor matrix
        }
    return out;
}

std::size_t rank(const Matrix& m, double rel_tol) {
    Matrix a = m;
    const std::size_t rows = a.rows(), cols = a.cols();
    const double scale = a.max_abs();
    if (scale == 0.0) return 0;
    const double tol = rel_tol * scale;

    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        for (std::size_t i = r + 1; i < rows; ++i)
            if (std::abs(a(i, c)) > std::abs(a(pivot, c))) pivot = i;
        if (std::abs(a(pivot, c)) <= tol) continue;
        if (pivot != r)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(pivot, j), a(r, j));
        for (std::size_t i = r + 1; i < rows; ++i) {
            const double f = a(i, c) / a(r, c);
            for (std::size_t j = c; j < cols; ++j) a(i, j) -= f * a(r, j);
        }
        ++r;
    }
    return r;
}

namespace {

// Sum of k x k principal minors, by enumerating index subsets. Fine for the
// small n this library targets.
double principal_minor_sum(const Matrix& m, std::size_t k) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    double sum = 0.0;
    while (true) {
        Matrix sub(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sub(i, j) = m(idx[i], idx[j]);
        sum += det(sub);
        // next combination
        std::size_t i = k;
        while (i-- > 0) {
            if (idx[i] != i + n - k) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0) return sum;
        }
    }
}

}  // namespace

std::vector<double> eigen_real_parts(const Matrix& m) {
    if (!m.square()) {
        throw std::invalid_argument("eigen_real_parts: matrix must be square");
    }
    const std::size_t n = m.rows();
    // p(x) = x^n + c[n-1] x^(n-1) + ... + c[0], c[n-k] = (-1)^k e_k
    std::vector<double> coeff(n, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        const double ek = principal_minor_sum(m, k);
        coeff[n - k] = ((k % 2) ? -1.0 : 1.0) * ek;
    }

    using cd = std::complex<double>;
    double radius = 1.0;
    for (double c : coeff) radius = std::max(radius, 1.0 + std::abs(c));
    std::vector<cd> roots(n);
    const cd seed(0.4, 0.9);
    cd p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        p *= seed;
        roots[i] = radius * p;
    }
    auto eval = [&](cd x) {
        cd acc = 1.0;
        for (std::size_t k = n; k-- > 0;) acc = acc * x + coeff[k];
        return acc;
    };
    for (int it = 0; it < 1000; ++it) {
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cd denom = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            if (std::abs(denom) == 0.0) denom = cd(1e-30, 0.0);
            const cd delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            moved = std::max(moved, std::abs(delta));
        }
        if (moved < 1e-13 * radius) break;
    }
    std::vector<double> re(n);
    for (std::size_t i = 0; i < n; ++i) re[i] = roots[i].real();
    std::sort(re.begin(), re.end());
    return re;
}

std::vector<double> mat_vec(const Matrix& m, std::span<const double> v) {
    if (v.size() != m.cols()) {
        throw std::invalid_argument("mat_vec: dimension mismatch");
    }
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: dimension mismatch");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

Matrix outer(std::span<const double> a, std::span<const double> b) {
    Matrix out(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out(i, j) = a[i] * b[j];
    return out;
}

}  // namespace observerlab
