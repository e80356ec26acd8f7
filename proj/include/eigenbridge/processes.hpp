#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eigenbridge/linalg.hpp"

namespace eigenbridge {

struct ProcessLabel {
    enum class Kind { Diag, CrossReal, CrossImag };
    Kind kind = Kind::Diag;
    std::size_t j = 1;  // 1-based vector indices
    std::size_t k = 1;

    /// "X11", "ReX12", "ImX12" for complex inputs; "X1", "Y12" for real ones.
    [[nodiscard]] std::string name(Field field) const;

    friend bool operator==(const ProcessLabel&, const ProcessLabel&) = default;
};

/// Right-continuous step path on [0, 1]: value values[i] on [i/n, (i+1)/n),
/// values[0] == 0.
class StepProcess {
public:
    StepProcess(std::vector<double> values, ProcessLabel label);

    [[nodiscard]] std::size_t n() const noexcept { return values_.size() - 1; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const ProcessLabel& label() const noexcept { return label_; }

    /// values[[n t]] with [.] the greatest integer function; t in [0, 1].
    [[nodiscard]] double at(double t) const noexcept;
    [[nodiscard]] double sup_abs() const noexcept;
    /// |values[n]|; zero in exact arithmetic for orthonormal inputs.
    [[nodiscard]] double pin_residual() const noexcept { return std::abs(values_.back()); }

    /// CSV with header "index,t,value"; floats at 17 significant digits.
    void write_csv(std::ostream& out) const;

private:
    std::vector<double> values_;
    ProcessLabel label_;
};

/// Piecewise-constant function on the real line indexed by eigenvalue count:
/// evaluate(x) = values[#{i : lambda_i <= x}].
class TimeChangedProcess {
public:
    TimeChangedProcess(std::vector<double> eigenvalues, std::vector<double> values);

    [[nodiscard]] double evaluate(double x) const noexcept;
    [[nodiscard]] std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

private:
    std::vector<double> eigenvalues_;
    std::vector<double> values_;
};

/// Index [n t] with a guard against t*n landing a rounding error below an integer.
std::size_t grid_index(std::size_t n, double t) noexcept;

/// sqrt(n) * prefix sums of (|u_i|^2 - 1/n). Throws Errc::NotUnit.
StepProcess diag_process_complex(std::span<const Complex> u, std::size_t k = 1);

/// sqrt(2n) * prefix sums of conj(u_i) w_i, split into real and imaginary parts.
/// Throws Errc::NotUnit or Errc::NotOrthogonal.
std::pair<StepProcess, StepProcess> cross_process_complex(std::span<const Complex> u, std::span<const Complex> w,
                                                          std::size_t j = 1, std::size_t k = 2);

/// sqrt(n/2) * prefix sums of (y_i^2 - 1/n).
StepProcess diag_process_real(std::span<const double> y, std::size_t k = 1);

/// sqrt(n) * prefix sums of y1_i y2_i.
StepProcess cross_process_real(std::span<const double> y1, std::span<const double> y2, std::size_t j = 1,
                               std::size_t k = 2);

/// All bridge processes of the columns of an n x m orthonormal frame, in the
/// order X11, X22, ..., then (Re, Im) X_jk for j < k (complex), or X1..Xm then
/// Y_jk (real).
template <Scalar T>
std::vector<StepProcess> frame_processes(const Matrix<T>& frame);

/// Throws Errc::LengthMismatch unless p.n() equals the eigenvalue count.
TimeChangedProcess time_change(const StepProcess& p, std::vector<double> eigenvalues);

/// G(x) = sum_{lambda_k <= x} |u_k^* v|^2. Throws Errc::NotUnit.
template <Scalar T>
TimeChangedProcess weighted_spectral_cdf(const SpectralDecomposition<T>& d, std::span<const T> v);

}  // namespace eigenbridge
