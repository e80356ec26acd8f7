#include "eigenbridge/processes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "eigenbridge/error.hpp"

namespace eigenbridge {

namespace {

constexpr double kUnitTol = 1e-10;
constexpr double kOrthoTol = 1e-10;

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
        else comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

template <Scalar T>
void require_unit(std::span<const T> u) {
    const double norm = norm2<T>(u);
    if (!(std::abs(norm - 1.0) < kUnitTol)) throw Error(Errc::NotUnit, "vector norm deviates from 1");
}

template <class Increment>
std::vector<double> scaled_prefix_sums(std::size_t n, double scale, Increment increment) {
    std::vector<double> values(n + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t i = 0; i < n; ++i) {
        acc.add(increment(i));
        values[i + 1] = scale * acc.value();
    }
    return values;
}

}  // namespace

std::string ProcessLabel::name(Field field) const {
    const std::string jk = std::to_string(j) + std::to_string(k);
    if (field == Field::Complex) {
        switch (kind) {
            case Kind::Diag: return "X" + std::to_string(k) + std::to_string(k);
            case Kind::CrossReal: return "ReX" + jk;
            case Kind::CrossImag: return "ImX" + jk;
        }
    }
    return kind == Kind::Diag ? "X" + std::to_string(k) : "Y" + jk;
}

StepProcess::StepProcess(std::vector<double> values, ProcessLabel label)
    : values_(std::move(values)), label_(label) {
    if (values_.size() < 2) throw Error(Errc::BadDimension, "process needs n >= 1");
    values_[0] = 0.0;
}

std::size_t grid_index(std::size_t n, double t) noexcept {
    if (t <= 0.0) return 0;
    const double raw = std::floor(static_cast<double>(n) * t + 1e-9);
    return std::min(n, static_cast<std::size_t>(raw));
}

double StepProcess::at(double t) const noexcept { return values_[grid_index(n(), t)]; }

double StepProcess::sup_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void StepProcess::write_csv(std::ostream& out) const {
    out << "index,t,value\n";
    char buf[96];
    for (std::size_t i = 0; i < values_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, static_cast<double>(i) / static_cast<double>(n()),
                      values_[i]);
        out << buf;
    }
}

TimeChangedProcess::TimeChangedProcess(std::vector<double> eigenvalues, std::vector<double> values)
    : eigenvalues_(std::move(eigenvalues)), values_(std::move(values)) {
    if (values_.size() != eigenvalues_.size() + 1)
        throw Error(Errc::LengthMismatch, "time-changed process needs one more value than eigenvalues");
}

double TimeChangedProcess::evaluate(double x) const noexcept {
    const auto count = std::upper_bound(eigenvalues_.begin(), eigenvalues_.end(), x) - eigenvalues_.begin();
    return values_[static_cast<std::size_t>(count)];
}

StepProcess diag_process_complex(std::span<const Complex> u, std::size_t k) {
    require_unit(u);
    const std::size_t n = u.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    return {scaled_prefix_sums(n, std::sqrt(static_cast<double>(n)), [&](std::size_t i) { return std::norm(u[i]) - inv_n; }),
            {ProcessLabel::Kind::Diag, k, k}};
}

std::pair<StepProcess, StepProcess> cross_process_complex(std::span<const Complex> u, std::span<const Complex> w,
                                                          std::size_t j, std::size_t k) {
    if (u.size() != w.size()) throw Error(Errc::LengthMismatch, "vectors differ in length");
    require_unit(u);
    require_unit(w);
    if (!(std::abs(dot<Complex>(u, w)) < kOrthoTol)) throw Error(Errc::NotOrthogonal, "u^* w is not zero");
    const std::size_t n = u.size();
    const double scale = std::sqrt(2.0 * static_cast<double>(n));
    auto re = scaled_prefix_sums(n, scale, [&](std::size_t i) { return (std::conj(u[i]) * w[i]).real(); });
    auto im = scaled_prefix_sums(n, scale, [&](std::size_t i) { return (std::conj(u[i]) * w[i]).imag(); });
    return {StepProcess(std::move(re), {ProcessLabel::Kind::CrossReal, j, k}),
            StepProcess(std::move(im), {ProcessLabel::Kind::CrossImag, j, k})};
}

StepProcess diag_process_real(std::span<const double> y, std::size_t k) {
    require_unit(y);
    const std::size_t n = y.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    return {scaled_prefix_sums(n, std::sqrt(0.5 * static_cast<double>(n)), [&](std::size_t i) { return y[i] * y[i] - inv_n; }),
            {ProcessLabel::Kind::Diag, k, k}};
}

StepProcess cross_process_real(std::span<const double> y1, std::span<const double> y2, std::size_t j, std::size_t k) {
    if (y1.size() != y2.size()) throw Error(Errc::LengthMismatch, "vectors differ in length");
    require_unit(y1);
    require_unit(y2);
    if (!(std::abs(dot<double>(y1, y2)) < kOrthoTol)) throw Error(Errc::NotOrthogonal, "y1 . y2 is not zero");
    const std::size_t n = y1.size();
    return {scaled_prefix_sums(n, std::sqrt(static_cast<double>(n)), [&](std::size_t i) { return y1[i] * y2[i]; }),
            {ProcessLabel::Kind::CrossReal, j, k}};
}

template <Scalar T>
std::vector<StepProcess> frame_processes(const Matrix<T>& frame) {
    const std::size_t m = frame.cols();
    std::vector<StepProcess> out;
    for (std::size_t k = 0; k < m; ++k) {
        if constexpr (is_complex_v<T>) out.push_back(diag_process_complex(frame.col(k), k + 1));
        else out.push_back(diag_process_real(frame.col(k), k + 1));
    }
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t k = j + 1; k < m; ++k) {
            if constexpr (is_complex_v<T>) {
                auto [re, im] = cross_process_complex(frame.col(j), frame.col(k), j + 1, k + 1);
                out.push_back(std::move(re));
                out.push_back(std::move(im));
            } else {
                out.push_back(cross_process_real(frame.col(j), frame.col(k), j + 1, k + 1));
            }
        }
    return out;
}

TimeChangedProcess time_change(const StepProcess& p, std::vector<double> eigenvalues) {
    if (p.n() != eigenvalues.size()) throw Error(Errc::LengthMismatch, "process length differs from eigenvalue count");
    return {std::move(eigenvalues), {p.values().begin(), p.values().end()}};
}

template <Scalar T>
TimeChangedProcess weighted_spectral_cdf(const SpectralDecomposition<T>& d, std::span<const T> v) {
    require_unit(v);
    const auto coords = eigen_coordinates(d, v);
    std::vector<double> cdf(coords.size() + 1, 0.0);
    // Plain summation of nonnegative terms keeps the CDF exactly monotone.
    for (std::size_t i = 0; i < coords.size(); ++i) cdf[i + 1] = cdf[i] + abs2(coords[i]);
    return {d.eigenvalues, std::move(cdf)};
}

template std::vector<StepProcess> frame_processes(const Matrix<double>&);
template std::vector<StepProcess> frame_processes(const Matrix<Complex>&);
template TimeChangedProcess weighted_spectral_cdf(const SpectralDecomposition<double>&, std::span<const double>);
template TimeChangedProcess weighted_spectral_cdf(const SpectralDecomposition<Complex>&, std::span<const Complex>);

}  // namespace eigenbridge
