#include "eigenbridge/mp_law.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eigenbridge/error.hpp"
#include "eigenbridge/quadrature.hpp"

namespace eigenbridge {

namespace {

constexpr double kQuadTol = 1e-10;
constexpr double kPoleMargin = 1e-12;

// Density times dx under x = a + (b - a) sin^2(phi), phi in (0, pi/2).
double mp_weight(const MarchenkoPastur& law, double phi) {
    const double a = law.lower_edge();
    const double width = law.upper_edge() - a;
    const double s2 = std::sin(phi) * std::sin(phi);
    const double c2 = std::cos(phi) * std::cos(phi);
    const double x = a + width * s2;
    return width * width * s2 * c2 / (std::numbers::pi * law.y * x);
}

}  // namespace

double MarchenkoPastur::lower_edge() const noexcept { return (1.0 - std::sqrt(y)) * (1.0 - std::sqrt(y)); }
double MarchenkoPastur::upper_edge() const noexcept { return (1.0 + std::sqrt(y)) * (1.0 + std::sqrt(y)); }
double MarchenkoPastur::zero_atom() const noexcept { return y > 1.0 ? 1.0 - 1.0 / y : 0.0; }

std::pair<double, double> mp_support_edges(double y) {
    if (!(y > 0.0) || !std::isfinite(y)) throw Error(Errc::BadParam, "aspect ratio y must be positive");
    const MarchenkoPastur law{y};
    return {law.lower_edge(), law.upper_edge()};
}

double mp_density(double y, double x) {
    const auto [a, b] = mp_support_edges(y);
    if (!(x > a && x < b)) return 0.0;
    return std::sqrt((x - a) * (b - x)) / (2.0 * std::numbers::pi * y * x);
}

double mp_cdf(double y, double x) {
    const auto [a, b] = mp_support_edges(y);
    const MarchenkoPastur law{y};
    if (x < 0.0) return 0.0;
    if (x >= b) return 1.0;
    double total = law.zero_atom();
    if (x > a) {
        const double phi_x = std::asin(std::sqrt(std::clamp((x - a) / (b - a), 0.0, 1.0)));
        total += integrate([&](double phi) { return mp_weight(law, phi); }, 0.0, phi_x, kQuadTol);
    }
    return std::clamp(total, 0.0, 1.0);
}

LimitLaw LimitLaw::marchenko_pastur(double y) {
    mp_support_edges(y);
    return LimitLaw(MarchenkoPastur{y});
}

LimitLaw LimitLaw::discrete(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw Error(Errc::BadParam, "discrete law needs at least one atom");
    double total = 0.0;
    for (const auto& [loc, mass] : atoms) {
        if (!std::isfinite(loc) || !(mass > 0.0)) throw Error(Errc::BadParam, "atoms need finite location, positive mass");
        total += mass;
    }
    if (std::abs(total - 1.0) > 1e-12) throw Error(Errc::BadParam, "atom masses do not sum to 1");
    std::sort(atoms.begin(), atoms.end());
    return LimitLaw(DiscreteLaw{std::move(atoms)});
}

template <Scalar T>
LimitLaw LimitLaw::weighted_spectrum(const SpectralDecomposition<T>& d, std::span<const T> v) {
    const auto coords = eigen_coordinates(d, v);
    std::vector<std::pair<double, double>> atoms;
    double total = 0.0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        const double w = abs2(coords[i]);
        if (w > 0.0) {
            atoms.emplace_back(d.eigenvalues[i], w);
            total += w;
        }
    }
    // Parseval holds to rounding; renormalize so the mass check is exact.
    for (auto& atom : atoms) atom.second /= total;
    return discrete(std::move(atoms));
}

template LimitLaw LimitLaw::weighted_spectrum(const SpectralDecomposition<double>&, std::span<const double>);
template LimitLaw LimitLaw::weighted_spectrum(const SpectralDecomposition<Complex>&, std::span<const Complex>);

double LimitLaw::support_max() const noexcept {
    if (const auto* law = mp()) return law->upper_edge();
    return atoms()->atoms.back().first;
}

double LimitLaw::cdf(double x) const {
    if (const auto* law = mp()) return mp_cdf(law->y, x);
    double total = 0.0;
    for (const auto& [loc, mass] : atoms()->atoms)
        if (loc <= x) total += mass;
    return std::min(total, 1.0);
}

double LimitLaw::resolvent_moment(double lambda, int power) const {
    if (power != 1 && power != 2) throw Error(Errc::BadParam, "resolvent moment power must be 1 or 2");
    if (!(lambda - support_max() > kPoleMargin))
        throw Error(Errc::PoleTooClose, "lambda is not above the support");
    if (const auto* law = mp()) {
        const double a = law->lower_edge();
        const double b = law->upper_edge();
        const double gap = lambda - b;
        const double width = b - a;
        auto integrand = [&](double phi) {
            const double c = std::cos(phi);
            const double dist = gap + width * c * c;  // lambda - x without cancellation at the edge
            return mp_weight(*law, phi) / std::pow(dist, power);
        };
        double total = integrate(integrand, 0.0, 0.5 * std::numbers::pi, kQuadTol);
        total += law->zero_atom() / std::pow(lambda, power);
        return total;
    }
    double total = 0.0;
    for (const auto& [loc, mass] : atoms()->atoms) total += mass / std::pow(lambda - loc, power);
    return total;
}

double resolvent_moment(const LimitLaw& law, double lambda, int power) { return law.resolvent_moment(lambda, power); }

}  // namespace eigenbridge
