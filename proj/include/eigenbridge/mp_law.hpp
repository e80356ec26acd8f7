#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "eigenbridge/linalg.hpp"

namespace eigenbridge {

struct MarchenkoPastur {
    double y = 1.0;

    [[nodiscard]] double lower_edge() const noexcept;
    [[nodiscard]] double upper_edge() const noexcept;
    /// Mass 1 - 1/y at the origin for y > 1, else 0. Never part of the density.
    [[nodiscard]] double zero_atom() const noexcept;
};

struct DiscreteLaw {
    std::vector<std::pair<double, double>> atoms;  // (location, mass)
};

/// Spectral limit law: Marchenko-Pastur or a finite discrete law.
class LimitLaw {
public:
    static LimitLaw marchenko_pastur(double y);
    /// Masses must be positive and sum to 1 within 1e-12.
    static LimitLaw discrete(std::vector<std::pair<double, double>> atoms);
    /// Eigenvalues of S weighted by |u_i^* v|^2 (zero-weight eigenvalues dropped).
    template <Scalar T>
    static LimitLaw weighted_spectrum(const SpectralDecomposition<T>& d, std::span<const T> v);

    [[nodiscard]] bool is_marchenko_pastur() const noexcept { return std::holds_alternative<MarchenkoPastur>(law_); }
    [[nodiscard]] const MarchenkoPastur* mp() const noexcept { return std::get_if<MarchenkoPastur>(&law_); }
    [[nodiscard]] const DiscreteLaw* atoms() const noexcept { return std::get_if<DiscreteLaw>(&law_); }

    /// Right end of the support.
    [[nodiscard]] double support_max() const noexcept;
    [[nodiscard]] double cdf(double x) const;

    /// Integral of (lambda - x)^{-power} dF(x), power 1 or 2.
    [[nodiscard]] double resolvent_moment(double lambda, int power) const;

private:
    explicit LimitLaw(std::variant<MarchenkoPastur, DiscreteLaw> law) : law_(std::move(law)) {}
    std::variant<MarchenkoPastur, DiscreteLaw> law_;
};

/// ((1 - sqrt y)^2, (1 + sqrt y)^2). Throws Errc::BadParam for y <= 0.
std::pair<double, double> mp_support_edges(double y);

/// Absolutely continuous part only: sqrt((x-a)(b-x)) / (2 pi y x) on (a, b).
double mp_density(double y, double x);

/// Zero atom plus the integrated density, via x = a + (b - a) sin^2(phi).
double mp_cdf(double y, double x);

/// Throws Errc::PoleTooClose unless lambda exceeds the support by 1e-12.
double resolvent_moment(const LimitLaw& law, double lambda, int power);

}  // namespace eigenbridge
