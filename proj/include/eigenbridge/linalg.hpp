#pragma once

#include <span>
#include <vector>

#include "eigenbridge/matrix.hpp"

namespace eigenbridge {

/// Thin QR factors with a strictly positive real diagonal on R.
template <Scalar T>
struct QrFactors {
    Matrix<T> q;
    Matrix<T> r;
};

/// Eigenvalues in nondecreasing order with orthonormal eigenvector columns.
/// Column j is normalized so its entry of largest magnitude (lowest index on
/// ties) is real and positive.
template <Scalar T>
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    Matrix<T> eigenvectors;

    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
    [[nodiscard]] double max_eigenvalue() const noexcept { return eigenvalues.back(); }
};

/// Spectrum together with the eigenbasis coordinates of a few probe vectors:
/// coefficients(i, k) = u_i^* p_k. Each row is only defined up to the
/// sign/phase of the corresponding eigenvector; every quantity built from
/// these coordinates downstream is invariant under that ambiguity.
template <Scalar T>
struct ProjectedSpectrum {
    std::vector<double> eigenvalues;
    Matrix<T> coefficients;

    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues.size(); }
    [[nodiscard]] double max_eigenvalue() const noexcept { return eigenvalues.back(); }
};

/// Modified Gram-Schmidt. Throws Errc::RankDeficient when a residual column
/// drops below 1e-12 of its original norm.
template <Scalar T>
QrFactors<T> gram_schmidt(const Matrix<T>& m);

/// Householder reduction to real tridiagonal form followed by implicit QL.
/// Throws Errc::NotSymmetric or Errc::NoConvergence.
template <Scalar T>
SpectralDecomposition<T> sym_eig(const Matrix<T>& s);

/// Same reduction, but instead of the full eigenvector matrix only U^* P is
/// accumulated, at O(n^2 m) extra cost.
template <Scalar T>
ProjectedSpectrum<T> sym_eig_projected(const Matrix<T>& s, const Matrix<T>& probes);

/// Eigenvalues only.
template <Scalar T>
std::vector<double> sym_eigenvalues(const Matrix<T>& s);

template <Scalar T>
ProjectedSpectrum<T> project(const SpectralDecomposition<T>& d, const Matrix<T>& probes);

/// (1/s) V V^*, exactly Hermitian.
template <Scalar T>
Matrix<T> scaled_gram(const Matrix<T>& v, double scale);

/// sum_i conj(u_i^* x) (u_i^* v) / (lambda - lambda_i)^power, i.e. x^*(lambda I - S)^{-power} v.
/// Throws Errc::PoleTooClose when lambda - lambda_max < 1e-14.
template <Scalar T>
T resolvent_quadratic_form(const SpectralDecomposition<T>& d, std::span<const T> x, std::span<const T> v,
                           double lambda, int power);

/// Coordinate form of the above: cx and cv are eigenbasis coordinates.
template <Scalar T>
T resolvent_quadratic_form(std::span<const double> eigenvalues, std::span<const T> cx, std::span<const T> cv,
                           double lambda, int power);

/// Coordinates u_i^* x of one vector in the eigenbasis.
template <Scalar T>
std::vector<T> eigen_coordinates(const SpectralDecomposition<T>& d, std::span<const T> x);

/// max-norm of U diag(lambda) U^* - S.
template <Scalar T>
double reconstruction_residual(const SpectralDecomposition<T>& d, const Matrix<T>& s);

}  // namespace eigenbridge
