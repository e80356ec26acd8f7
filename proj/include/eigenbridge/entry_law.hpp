#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "eigenbridge/matrix.hpp"
#include "eigenbridge/rng.hpp"

namespace eigenbridge {

/// Standardized, symmetric entry distributions: mean 0, E|v|^2 = 1.
struct EntryLaw {
    enum class Kind { RealGaussian, ComplexGaussian, Rademacher, SymmetricTwoPoint };

    Kind kind = Kind::RealGaussian;
    // SymmetricTwoPoint only: v = +-scale with probability 1/(2 scale^2)
    // each, 0 otherwise. Requires scale >= 1; scale == 1 is Rademacher.
    double scale = 1.0;

    static EntryLaw real_gaussian() { return {Kind::RealGaussian, 1.0}; }
    static EntryLaw complex_gaussian() { return {Kind::ComplexGaussian, 1.0}; }
    static EntryLaw rademacher() { return {Kind::Rademacher, 1.0}; }
    static EntryLaw two_point(double scale);

    [[nodiscard]] bool is_complex() const noexcept { return kind == Kind::ComplexGaussian; }
    /// E|v|^4.
    [[nodiscard]] double fourth_moment() const noexcept;
    [[nodiscard]] std::string name() const;

    /// Accepts "gaussian", "complex-gaussian", "rademacher", "two-point:<scale>".
    static EntryLaw parse(std::string_view text);

    friend bool operator==(const EntryLaw&, const EntryLaw&) = default;
};

double sample_real(const EntryLaw& law, RngStream& rng);
Complex sample_complex(const EntryLaw& law, RngStream& rng);

/// i.i.d. entries in column-major order. A complex law requested into a real
/// matrix is an Errc::BadParam; real laws fill complex matrices with real values.
template <Scalar T>
Matrix<T> sample_matrix(const EntryLaw& law, std::size_t rows, std::size_t cols, RngStream& rng);

/// m pairwise-orthogonal unit vectors with entries +-1/sqrt(n): the first m
/// rows of the order-2^m Sylvester sign pattern, tiled n/2^m times.
/// Throws Errc::BadDimension unless 2^m divides n.
RealMatrix sign_vector_family(std::size_t n, std::size_t m);

/// Integer Gram matrix of the unscaled sign pattern (entries in {-1, +1}).
std::vector<std::vector<long>> sign_family_integer_gram(std::size_t n, std::size_t m);

template <Scalar T>
Matrix<T> promote(const RealMatrix& m) {
    if constexpr (is_complex_v<T>) {
        Matrix<T> out(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.data().size(); ++i) out.data()[i] = m.data()[i];
        return out;
    } else {
        return m;
    }
}

}  // namespace eigenbridge
