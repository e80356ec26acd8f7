#pragma once

#include <cmath>

#include "eigenbridge/entry_law.hpp"
#include "eigenbridge/linalg.hpp"
#include "eigenbridge/rng.hpp"

namespace testing {

using namespace eigenbridge;

template <Scalar T>
Matrix<T> random_hermitian(std::size_t n, RngStream& rng) {
    const auto law = is_complex_v<T> ? EntryLaw::complex_gaussian() : EntryLaw::real_gaussian();
    const auto g = sample_matrix<T>(law, n, n, rng);
    Matrix<T> s(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) s(i, j) = 0.5 * (g(i, j) + conj(g(j, i)));
    for (std::size_t i = 0; i < n; ++i) s(i, i) = T(real_part(s(i, i)));
    return s;
}

template <Scalar T>
std::vector<T> random_unit(std::size_t n, RngStream& rng) {
    const auto law = is_complex_v<T> ? EntryLaw::complex_gaussian() : EntryLaw::real_gaussian();
    auto v = sample_matrix<T>(law, n, 1, rng).column_copy(0);
    const double nv = norm2<T>(v);
    for (auto& x : v) x /= nv;
    return v;
}

inline double mean(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double variance(const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

}  // namespace testing
