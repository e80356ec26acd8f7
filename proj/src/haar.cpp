#include "eigenbridge/haar.hpp"

#include <cmath>

#include "eigenbridge/entry_law.hpp"

namespace eigenbridge {

namespace {

template <Scalar T>
EntryLaw gaussian_law() {
    return is_complex_v<T> ? EntryLaw::complex_gaussian() : EntryLaw::real_gaussian();
}

}  // namespace

template <Scalar T>
Matrix<T> haar(std::size_t n, RngStream& rng) {
    return gram_schmidt(sample_matrix<T>(gaussian_law<T>(), n, n, rng)).q;
}

template <Scalar T>
Matrix<T> haar_frame(std::size_t n, std::size_t m, RngStream& rng) {
    return gram_schmidt(sample_matrix<T>(gaussian_law<T>(), n, m, rng)).q;
}

ComplexMatrix haar_unitary(std::size_t n, RngStream& rng) { return haar<Complex>(n, rng); }
RealMatrix haar_orthogonal(std::size_t n, RngStream& rng) { return haar<double>(n, rng); }

std::vector<std::pair<std::size_t, std::size_t>> eigenvalue_blocks(const std::vector<double>& eigenvalues,
                                                                   double gap_tol) {
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    std::size_t first = 0;
    for (std::size_t i = 1; i <= eigenvalues.size(); ++i) {
        const bool split = i == eigenvalues.size() ||
                           eigenvalues[i] - eigenvalues[i - 1] >= gap_tol * (1.0 + std::abs(eigenvalues[i]));
        if (split) {
            blocks.emplace_back(first, i);
            first = i;
        }
    }
    return blocks;
}

template <Scalar T>
SpectralDecomposition<T> randomize_eigenspaces(SpectralDecomposition<T> d, double gap_tol, RngStream& rng) {
    auto& q = d.eigenvectors;
    const std::size_t rows = q.rows();
    for (const auto& [first, last] : eigenvalue_blocks(d.eigenvalues, gap_tol)) {
        const std::size_t k = last - first;
        const Matrix<T> h = haar<T>(k, rng);
        Matrix<T> block(rows, k);
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t l = 0; l < k; ++l) {
                const T f = h(l, j);
                const auto src = q.col(first + l);
                auto dst = block.col(j);
                for (std::size_t i = 0; i < rows; ++i) dst[i] += src[i] * f;
            }
        for (std::size_t j = 0; j < k; ++j) std::copy(block.col(j).begin(), block.col(j).end(), q.col(first + j).begin());
    }
    return d;
}

template <Scalar T>
ProjectedSpectrum<T> randomize_eigenspaces(ProjectedSpectrum<T> p, double gap_tol, RngStream& rng) {
    auto& c = p.coefficients;
    for (const auto& [first, last] : eigenvalue_blocks(p.eigenvalues, gap_tol)) {
        const std::size_t k = last - first;
        const Matrix<T> h = haar<T>(k, rng);
        for (std::size_t probe = 0; probe < c.cols(); ++probe) {
            auto col = c.col(probe);
            std::vector<T> rotated(k);
            for (std::size_t j = 0; j < k; ++j) {
                T acc{};
                for (std::size_t l = 0; l < k; ++l) acc += conj(h(l, j)) * col[first + l];
                rotated[j] = acc;
            }
            std::copy(rotated.begin(), rotated.end(), col.begin() + static_cast<std::ptrdiff_t>(first));
        }
    }
    return p;
}

template Matrix<double> haar(std::size_t, RngStream&);
template Matrix<Complex> haar(std::size_t, RngStream&);
template Matrix<double> haar_frame(std::size_t, std::size_t, RngStream&);
template Matrix<Complex> haar_frame(std::size_t, std::size_t, RngStream&);
template SpectralDecomposition<double> randomize_eigenspaces(SpectralDecomposition<double>, double, RngStream&);
template SpectralDecomposition<Complex> randomize_eigenspaces(SpectralDecomposition<Complex>, double, RngStream&);
template ProjectedSpectrum<double> randomize_eigenspaces(ProjectedSpectrum<double>, double, RngStream&);
template ProjectedSpectrum<Complex> randomize_eigenspaces(ProjectedSpectrum<Complex>, double, RngStream&);

}  // namespace eigenbridge
