#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "observerlab/matrix.hpp"

namespace observerlab {

/// Uniform sampling grid. Sample k lives at t0 + k*step, computed directly
/// (never by repeated addition) so there is no accumulated drift.
class TimeGrid {
public:
    TimeGrid() = default;
    TimeGrid(double t0, double step, std::size_t count);

    double t0() const { return t0_; }
    double step() const { return step_; }
    std::size_t count() const { return count_; }
    double time_at(std::size_t k) const { return t0_ + static_cast<double>(k) * step_; }
    double t_end() const { return time_at(count_ - 1); }

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double t0_ = 0.0;
    double step_ = 0.0;
    std::size_t count_ = 0;
};

/// Scalar time series on a TimeGrid.
class Signal {
public:
    Signal() = default;
    Signal(TimeGrid grid, std::vector<double> values);
    static Signal zeros(const TimeGrid& grid);
    static Signal constant(const TimeGrid& grid, double value);

    const TimeGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double max_abs() const;
    bool all_finite() const;

    friend bool operator==(const Signal&, const Signal&) = default;

private:
    TimeGrid grid_;
    std::vector<double> values_;
};

/// Binary signal ops require identical grids and throw otherwise.
Signal operator+(const Signal& a, const Signal& b);
Signal operator-(const Signal& a, const Signal& b);
Signal operator*(double s, const Signal& a);

/// Vector-valued time series, flat sample-major storage.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(TimeGrid grid, std::size_t dim);
    Trajectory(TimeGrid grid, std::size_t dim, std::vector<double> flat);

    const TimeGrid& grid() const { return grid_; }
    std::size_t dim() const { return dim_; }
    std::size_t count() const { return grid_.count(); }

    std::span<const double> sample(std::size_t k) const {
        return {data_.data() + k * dim_, dim_};
    }
    std::span<double> sample(std::size_t k) { return {data_.data() + k * dim_, dim_}; }
    double value(std::size_t k, std::size_t j) const { return data_[k * dim_ + j]; }

    Signal component(std::size_t j) const;
    double max_abs() const;
    bool all_finite() const;

    std::span<const double> flat() const { return data_; }
    std::span<double> flat() { return data_; }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    TimeGrid grid_;
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

Trajectory operator-(const Trajectory& a, const Trajectory& b);

/// Matrix-valued time series (one rows x cols matrix per sample), flat
/// row-major storage per sample. Used for fundamental and extended-regressor
/// matrices.
class MatrixSeries {
public:
    MatrixSeries() = default;
    MatrixSeries(TimeGrid grid, std::size_t rows, std::size_t cols);

    const TimeGrid& grid() const { return grid_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t count() const { return grid_.count(); }

    std::span<const double> sample(std::size_t k) const {
        return {data_.data() + k * rows_ * cols_, rows_ * cols_};
    }
    std::span<double> sample(std::size_t k) { return {data_.data() + k * rows_ * cols_, rows_ * cols_}; }
    double& entry(std::size_t k, std::size_t r, std::size_t c) {
        return data_[(k * rows_ + r) * cols_ + c];
    }
    double entry(std::size_t k, std::size_t r, std::size_t c) const {
        return data_[(k * rows_ + r) * cols_ + c];
    }

    Matrix at(std::size_t k) const;
    void set(std::size_t k, const Matrix& m);

    std::span<const double> flat() const { return data_; }
    std::span<double> flat() { return data_; }

private:
    TimeGrid grid_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

}  // namespace observerlab
