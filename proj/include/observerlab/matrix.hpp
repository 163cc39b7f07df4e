#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace observerlab {

/// Small dense row-major matrix. Sized for state-space work (n <= 4-ish);
/// determinant and adjugate use cofactor expansion so the defining identity
/// adj(M)*M = det(M)*I holds to roundoff.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

    Matrix transposed() const;
    double max_abs() const;

    Matrix operator*(const Matrix& rhs) const;
    Matrix operator+(const Matrix& rhs) const;
    Matrix operator-(const Matrix& rhs) const;

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Determinant by cofactor expansion. Rejects non-square input.
double det(const Matrix& m);

/// Adjugate (transpose of the cofactor matrix); adj of a 1x1 matrix is [[1]].
Matrix adjugate(const Matrix& m);

/// Rank via Gaussian elimination with partial pivoting; pivots below
/// rel_tol * max|entry| count as zero.
std::size_t rank(const Matrix& m, double rel_tol = 1e-10);

/// Real parts of the eigenvalues (characteristic polynomial from principal
/// minors, roots by Durand-Kerner), sorted ascending. Diagnostic accuracy,
/// intended for small n.
std::vector<double> eigen_real_parts(const Matrix& m);

std::vector<double> mat_vec(const Matrix& m, std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

/// a * b^T
Matrix outer(std::span<const double> a, std::span<const double> b);

}  // namespace observerlab
