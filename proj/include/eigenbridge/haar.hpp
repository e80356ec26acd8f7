#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "eigenbridge/linalg.hpp"
#include "eigenbridge/rng.hpp"

namespace eigenbridge {

inline constexpr double kDefaultGapTol = 1e-9;

/// Haar-distributed n x n unitary: Gram-Schmidt on i.i.d. standard complex
/// Gaussians, R with positive diagonal.
ComplexMatrix haar_unitary(std::size_t n, RngStream& rng);

/// Real counterpart on the orthogonal group.
RealMatrix haar_orthogonal(std::size_t n, RngStream& rng);

template <Scalar T>
Matrix<T> haar(std::size_t n, RngStream& rng);

/// First m columns of the matrix haar<T>(n) would produce from the same
/// stream position (Gram-Schmidt never looks ahead), drawn from an n x m
/// Gaussian block only.
template <Scalar T>
Matrix<T> haar_frame(std::size_t n, std::size_t m, RngStream& rng);

/// Maximal runs [first, last) of consecutive eigenvalues whose successive gaps
/// are below gap_tol * (1 + |lambda|).
std::vector<std::pair<std::size_t, std::size_t>> eigenvalue_blocks(const std::vector<double>& eigenvalues,
                                                                   double gap_tol);

/// Replaces the eigenvector columns of every repeated-eigenvalue block by
/// (columns) x (independent Haar matrix of the block size); singleton blocks
/// get a uniform sign or phase.
template <Scalar T>
SpectralDecomposition<T> randomize_eigenspaces(SpectralDecomposition<T> d, double gap_tol, RngStream& rng);

/// The same transformation expressed on eigenbasis coordinates: with the
/// columns mapped to Q_B H, the coordinate block becomes H^* C_B. Consumes
/// the stream exactly like the full version.
template <Scalar T>
ProjectedSpectrum<T> randomize_eigenspaces(ProjectedSpectrum<T> p, double gap_tol, RngStream& rng);

}  // namespace eigenbridge
