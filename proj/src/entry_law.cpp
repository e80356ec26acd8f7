#include "eigenbridge/entry_law.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "eigenbridge/error.hpp"

namespace eigenbridge {

namespace {

std::uint64_t sylvester_sign_bit(std::size_t row, std::size_t col) noexcept {
    return static_cast<std::uint64_t>(__builtin_popcountll(static_cast<unsigned long long>(row & col)) & 1);
}

}  // namespace

EntryLaw EntryLaw::two_point(double scale) {
    if (!(scale >= 1.0) || !std::isfinite(scale)) throw Error(Errc::BadParam, "two-point scale must be >= 1");
    return {Kind::SymmetricTwoPoint, scale};
}

double EntryLaw::fourth_moment() const noexcept {
    switch (kind) {
        case Kind::RealGaussian: return 3.0;
        case Kind::ComplexGaussian: return 2.0;
        case Kind::Rademacher: return 1.0;
        case Kind::SymmetricTwoPoint: return scale * scale;
    }
    return 0.0;
}

std::string EntryLaw::name() const {
    switch (kind) {
        case Kind::RealGaussian: return "gaussian";
        case Kind::ComplexGaussian: return "complex-gaussian";
        case Kind::Rademacher: return "rademacher";
        case Kind::SymmetricTwoPoint: {
            char buf[64];
            std::snprintf(buf, sizeof buf, "two-point:%.17g", scale);
            return buf;
        }
    }
    return "unknown";
}

EntryLaw EntryLaw::parse(std::string_view text) {
    if (text == "gaussian" || text == "real-gaussian") return real_gaussian();
    if (text == "complex-gaussian") return complex_gaussian();
    if (text == "rademacher") return rademacher();
    constexpr std::string_view prefix = "two-point:";
    if (text.starts_with(prefix)) {
        const std::string number(text.substr(prefix.size()));
        char* end = nullptr;
        const double scale = std::strtod(number.c_str(), &end);
        if (end == number.c_str() || *end != '\0') throw Error(Errc::ConfigError, "bad two-point scale");
        return two_point(scale);
    }
    throw Error(Errc::ConfigError, "unknown entry law '" + std::string(text) + "'");
}

double sample_real(const EntryLaw& law, RngStream& rng) {
    switch (law.kind) {
        case EntryLaw::Kind::RealGaussian: return rng.normal();
        case EntryLaw::Kind::Rademacher: return (rng() >> 63) ? 1.0 : -1.0;
        case EntryLaw::Kind::SymmetricTwoPoint: {
            const double u = rng.uniform();
            const double p = 1.0 / (2.0 * law.scale * law.scale);
            if (u < p) return law.scale;
            if (u < 2.0 * p) return -law.scale;
            return 0.0;
        }
        case EntryLaw::Kind::ComplexGaussian: break;
    }
    throw Error(Errc::BadParam, "complex law sampled into a real entry");
}

Complex sample_complex(const EntryLaw& law, RngStream& rng) {
    if (law.kind == EntryLaw::Kind::ComplexGaussian) {
        const double re = rng.normal();
        const double im = rng.normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }
    return {sample_real(law, rng), 0.0};
}

template <Scalar T>
Matrix<T> sample_matrix(const EntryLaw& law, std::size_t rows, std::size_t cols, RngStream& rng) {
    Matrix<T> out(rows, cols);
    for (auto& x : out.data()) {
        if constexpr (is_complex_v<T>) x = sample_complex(law, rng);
        else x = sample_real(law, rng);
    }
    return out;
}

template Matrix<double> sample_matrix(const EntryLaw&, std::size_t, std::size_t, RngStream&);
template Matrix<Complex> sample_matrix(const EntryLaw&, std::size_t, std::size_t, RngStream&);

std::vector<std::vector<long>> sign_family_integer_gram(std::size_t n, std::size_t m) {
    if (m >= 63 || n % (std::size_t{1} << m) != 0)
        throw Error(Errc::BadDimension, "n must be a multiple of 2^m");
    const std::size_t period = std::size_t{1} << m;
    std::vector<std::vector<long>> gram(m, std::vector<long>(m, 0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t i = 0; i < n; ++i) {
                const auto col = i % period;
                gram[a][b] += (sylvester_sign_bit(a, col) ^ sylvester_sign_bit(b, col)) ? -1 : 1;
            }
    return gram;
}

RealMatrix sign_vector_family(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0 || m >= 63 || n % (std::size_t{1} << m) != 0)
        throw Error(Errc::BadDimension, "n = " + std::to_string(n) + " is not a multiple of 2^" + std::to_string(m));
    const std::size_t period = std::size_t{1} << m;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    RealMatrix out(n, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < n; ++i) out(i, k) = sylvester_sign_bit(k, i % period) ? -scale : scale;
    return out;
}

}  // namespace eigenbridge
