#include "observerlab/signal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace observerlab {

TimeGrid::TimeGrid(double t0, double step, std::size_t count)
    : t0_(t0), step_(step), count_(count) {
    if (!(step > 0.0)) throw std::invalid_argument("TimeGrid: step must be > 0");
    if (count == 0) throw std::invalid_argument("TimeGrid: count must be positive");
}

Signal::Signal(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.count()) {
        throw std::invalid_argument("Signal: value count does not match grid");
    }
}

Signal Signal::zeros(const TimeGrid& grid) {
    return Signal(grid, std::vector<double>(grid.count(), 0.0));
}

Signal Signal::constant(const TimeGrid& grid, double value) {
    return Signal(grid, std::vector<double>(grid.count(), value));
}

double Signal::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

bool Signal::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
}

namespace {
void require_same_grid(const Signal& a, const Signal& b, const char* op) {
    if (!(a.grid() == b.grid())) {
        throw std::invalid_argument(std::string("Signal ") + op + ": grids differ");
    }
}
}  // namespace

Signal operator+(const Signal& a, const Signal& b) {
    require_same_grid(a, b, "+");
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
    return Signal(a.grid(), std::move(out));
}

Signal operator-(const Signal& a, const Signal& b) {
    require_same_grid(a, b, "-");
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
    return Signal(a.grid(), std::move(out));
}

Signal operator*(double s, const Signal& a) {
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = s * a[k];
    return Signal(a.grid(), std::move(out));
}

Trajectory::Trajectory(TimeGrid grid, std::size_t dim)
    : grid_(grid), dim_(dim), data_(grid.count() * dim, 0.0) {
    if (dim == 0) throw std::invalid_argument("Trajectory: dim must be positive");
}

Trajectory::Trajectory(TimeGrid grid, std::size_t dim, std::vector<double> flat)
    : grid_(grid), dim_(dim), data_(std::move(flat)) {
    if (dim == 0) throw std::invalid_argument("Trajectory: dim must be positive");
    if (data_.size() != grid_.count() * dim_) {
        throw std::invalid_argument("Trajectory: flat size does not match grid x dim");
    }
}

Signal Trajectory::component(std::size_t j) const {
    if (j >= dim_) throw std::invalid_argument("Trajectory::component: index out of range");
    std::vector<double> out(count());
    for (std::size_t k = 0; k < count(); ++k) out[k] = data_[k * dim_ + j];
    return Signal(grid_, std::move(out));
}

double Trajectory::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool Trajectory::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

Trajectory operator-(const Trajectory& a, const Trajectory& b) {
    if (!(a.grid() == b.grid()) || a.dim() != b.dim()) {
        throw std::invalid_argument("Trajectory -: grids or dims differ");
    }
    Trajectory out(a.grid(), a.dim());
    for (std::size_t k = 0; k < a.count(); ++k) {
        auto sa = a.sample(k);
        auto sb = b.sample(k);
        auto so = out.sample(k);
        for (std::size_t j = 0; j < a.dim(); ++j) so[j] = sa[j] - sb[j];
    }
    return out;
}

MatrixSeries::MatrixSeries(TimeGrid grid, std::size_t rows, std::size_t cols)
    : grid_(grid), rows_(rows), cols_(cols), data_(grid.count() * rows * cols, 0.0) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("MatrixSeries: dimensions must be positive");
    }
}

Matrix MatrixSeries::at(std::size_t k) const {
    Matrix m(rows_, cols_);
    auto s = sample(k);
    std::copy(s.begin(), s.end(), m.data().begin());
    return m;
}

void MatrixSeries::set(std::size_t k, const Matrix& m) {
    if (m.rows() != rows_ || m.cols() != cols_) {
        throw std::invalid_argument("MatrixSeries::set: shape mismatch");
    }
    auto s = sample(k);
    std::copy(m.data().begin(), m.data().end(), s.begin());
}

}  // namespace observerlab
