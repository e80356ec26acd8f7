#pragma once

#include <optional>
#include <span>
#include <vector>

#include "eigenbridge/linalg.hpp"
#include "eigenbridge/mp_law.hpp"

namespace eigenbridge {

/// Limit behaviour of the top eigenvalue of theta v v^* + S for a spectral
/// law F of S. lambda1, limit_variance and limit_norm are set only in the
/// supercritical regime.
struct SpikeSolution {
    enum class Regime { Supercritical, Subcritical };

    Regime regime = Regime::Subcritical;
    double theta = 0.0;
    double threshold_theta_c = 0.0;
    std::optional<double> lambda1;
    std::optional<double> limit_variance;
    std::optional<double> limit_norm;

    [[nodiscard]] bool supercritical() const noexcept { return regime == Regime::Supercritical; }
};

/// theta v v^* + S, exactly Hermitian. Throws Errc::BadTheta or Errc::NotUnit.
template <Scalar T>
Matrix<T> build_spiked(const Matrix<T>& s, double theta, std::span<const T> v);

/// Root of sum_i |c_i|^2 / (lambda - lambda_i) = 1/theta above the top
/// eigenvalue, by bisection. c holds the eigenbasis coordinates of v.
/// Throws Errc::NoRoot when the left-hand side never reaches 1/theta.
template <Scalar T>
double secular_root(std::span<const double> eigenvalues, std::span<const T> c, double theta);

template <Scalar T>
double largest_eig_secular(const SpectralDecomposition<T>& d, double theta, std::span<const T> v);

/// (lambda1 I - S)^{-1} v, a multiple of the top eigenvector of the spiked matrix.
template <Scalar T>
std::vector<T> top_eigvec_resolvent(const SpectralDecomposition<T>& d, double lambda1, std::span<const T> v);

/// ||(lambda1 I - S)^{-1} v|| from coordinates.
template <Scalar T>
double resolvent_norm(std::span<const double> eigenvalues, std::span<const T> c, double lambda1);

/// 1 / lim_{lambda -> sup F} integral (lambda - x)^{-1} dF; zero when F has an
/// atom at its right end. The Marchenko-Pastur edge value is extrapolated
/// from lambda = b + 1e-8 and b + 2e-8 (error ~ sqrt(lambda - b)).
double detection_threshold(const LimitLaw& law);

/// Throws Errc::BadTheta for theta <= 0.
SpikeSolution theoretical_solution(const LimitLaw& law, double theta);

/// sqrt(2n) x^*(lambda I - S)^{-1} v for complex T, sqrt(n) x^T(...)v for real T,
/// from eigenbasis coordinates of x and v.
template <Scalar T>
T projection_stat(std::span<const double> eigenvalues, std::span<const T> cx, std::span<const T> cv, double lambda);

/// Throws Errc::NotOrthogonal unless |x^* v| < 1e-10; Errc::PoleTooClose.
template <Scalar T>
T projection_stat(const SpectralDecomposition<T>& d, double lambda, std::span<const T> v, std::span<const T> x);

}  // namespace eigenbridge
