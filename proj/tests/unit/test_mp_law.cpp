#include <doctest.h>

#include <cmath>
#include <numbers>

#include "eigenbridge/error.hpp"
#include "eigenbridge/mp_law.hpp"
#include "eigenbridge/quadrature.hpp"
#include "helpers.hpp"

using namespace eigenbridge;

namespace {

// Closed-form Stieltjes transform of the Marchenko-Pastur law (atom
// included) at real lambda > b, and minus its derivative.
double stieltjes(double y, double lambda) {
    const double d = std::sqrt((lambda - 1.0 - y) * (lambda - 1.0 - y) - 4.0 * y);
    return (lambda + y - 1.0 - d) / (2.0 * y * lambda);
}

double stieltjes_second(double y, double lambda) {
    const double u = lambda - 1.0 - y;
    const double d = std::sqrt(u * u - 4.0 * y);
    const double num = lambda + y - 1.0 - d;
    const double dnum = 1.0 - u / d;
    const double den = 2.0 * y * lambda;
    return -(dnum * den - num * 2.0 * y) / (den * den);
}

// Composite Simpson on x = a + (b - a)(1 - cos psi)/2, an independent route
// to the absolutely continuous part of the CDF.
double cdf_oracle(double y, double x) {
    const double a = (1 - std::sqrt(y)) * (1 - std::sqrt(y));
    const double b = (1 + std::sqrt(y)) * (1 + std::sqrt(y));
    const double atom = y > 1.0 ? 1.0 - 1.0 / y : 0.0;
    if (x <= a) return x >= 0.0 ? atom : 0.0;
    if (x >= b) return 1.0;
    const double top = std::acos(1.0 - 2.0 * (x - a) / (b - a));
    const int panels = 20000;
    const double h = top / panels;
    auto g = [&](double psi) {
        const double half = 0.5 * (b - a);
        const double pos = a + half * (1.0 - std::cos(psi));
        const double s = std::sin(psi);
        // a = 0: sin^2 / (1 - cos) = 1 + cos removes the 0/0 at psi = 0.
        if (a == 0.0) return half * (1.0 + std::cos(psi)) / (2.0 * std::numbers::pi * y);
        return half * half * s * s / (2.0 * std::numbers::pi * y * pos);
    };
    double sum = g(0.0) + g(top);
    for (int i = 1; i < panels; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * g(i * h);
    return atom + sum * h / 3.0;
}

}  // namespace

TEST_CASE("support edges") {
    auto check = [](double y, double a, double b) {
        const auto [lo, hi] = mp_support_edges(y);
        CHECK(lo == doctest::Approx(a).epsilon(1e-15));
        CHECK(hi == doctest::Approx(b).epsilon(1e-15));
    };
    check(1.0, 0.0, 4.0);
    check(0.25, 0.25, 2.25);
    check(4.0, 1.0, 9.0);
    try {
        (void)mp_support_edges(0.0);
        FAIL("expected BadParam");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BadParam);
    }
}

TEST_CASE("density") {
    // sqrt(2 * 2) / (2 pi * 2)
    CHECK(mp_density(1.0, 2.0) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-15));
    for (double y : {0.25, 0.5, 2.0}) {
        const auto [a, b] = mp_support_edges(y);
        CHECK(mp_density(y, a) == 0.0);
        CHECK(mp_density(y, b) == 0.0);
        CHECK(mp_density(y, b + 1.0) == 0.0);
        CHECK(mp_density(y, 0.0) == 0.0);
    }
    // x = 4 sin^2 phi absorbs the 1/sqrt(x) growth at the origin.
    const double mass = integrate(
        [](double phi) {
            const double s = std::sin(phi), c = std::cos(phi);
            return mp_density(1.0, 4.0 * s * s) * 8.0 * s * c;
        },
        0.0, std::numbers::pi / 2.0);
    CHECK(std::abs(mass - 1.0) < 1e-8);
}

TEST_CASE("cdf hand values") {
    CHECK(mp_cdf(2.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mp_cdf(2.0, -0.1) == 0.0);
    const double b = mp_support_edges(0.5).second;
    CHECK(mp_cdf(0.5, b) == 1.0);
    CHECK(mp_cdf(0.5, b + 3.0) == 1.0);
    // y = 1: x = 4 sin^2 phi turns the integrand into 4 cos^2(phi) / pi.
    CHECK(std::abs(mp_cdf(1.0, 2.0) - (0.5 + 1.0 / std::numbers::pi)) < 1e-10);
}

TEST_CASE("cdf reaches one at the upper edge") {
    for (double y : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        const double b = mp_support_edges(y).second;
        CHECK(std::abs(mp_cdf(y, b * (1.0 - 1e-15)) - 1.0) < 1e-8);
    }
}

TEST_CASE("cdf agrees with an independent quadrature") {
    for (double y : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        const auto [a, b] = mp_support_edges(y);
        for (int k = 0; k <= 10; ++k) {
            const double x = a + (b - a) * k / 10.0;
            CAPTURE(y);
            CAPTURE(x);
            CHECK(std::abs(mp_cdf(y, x) - cdf_oracle(y, x)) < 1e-7);
        }
    }
}

TEST_CASE("cdf is nondecreasing") {
    double prev = 0.0;
    for (int k = 0; k <= 400; ++k) {
        const double value = mp_cdf(0.7, -0.1 + k * 0.01);
        CHECK(value >= prev);
        prev = value;
    }
}

TEST_CASE("discrete law resolvent moments") {
    const auto delta = LimitLaw::discrete({{0.0, 1.0}});
    CHECK(delta.resolvent_moment(2.5, 1) == doctest::Approx(1.0 / 2.5).epsilon(1e-15));
    CHECK(delta.resolvent_moment(2.5, 2) == doctest::Approx(1.0 / 6.25).epsilon(1e-15));
    const auto law = LimitLaw::discrete({{-1.0, 0.25}, {0.5, 0.5}, {2.0, 0.25}});
    const double direct = 0.25 / 4.0 + 0.5 / 2.5 + 0.25 / 1.0;
    CHECK(std::abs(law.resolvent_moment(3.0, 1) - direct) < 1e-12);
    CHECK(law.support_max() == 2.0);
    CHECK(law.cdf(0.5) == 0.75);
    CHECK_THROWS_AS(LimitLaw::discrete({{0.0, 0.5}}), Error);
    try {
        (void)law.resolvent_moment(2.0, 1);
        FAIL("expected PoleTooClose");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PoleTooClose);
    }
}

TEST_CASE("Marchenko-Pastur resolvent moments match the closed form") {
    for (double y : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const auto law = LimitLaw::marchenko_pastur(y);
        const double b = law.support_max();
        for (double gap : {1e-3, 0.1, 1.0, 5.0}) {
            CAPTURE(y);
            CAPTURE(gap);
            const double lambda = b + gap;
            CHECK(std::abs(law.resolvent_moment(lambda, 1) - stieltjes(y, lambda)) < 1e-9);
            const double second = stieltjes_second(y, lambda);
            CHECK(std::abs(law.resolvent_moment(lambda, 2) - second) < 1e-8 * std::max(1.0, second));
        }
    }
}

TEST_CASE("edge value of the resolvent integral") {
    // Closed form gives 1 / (sqrt(y)(1 + sqrt(y))) at lambda = b.
    const auto law = LimitLaw::marchenko_pastur(1.0);
    CHECK(std::abs(law.resolvent_moment(4.0 + 1e-6, 1) - 0.5) < 1e-3);
    CHECK(std::abs(stieltjes(1.0, 4.0 + 1e-12) - 0.5) < 1e-5);
}

TEST_CASE("resolvent moment is decreasing and differentiates consistently") {
    const auto law = LimitLaw::marchenko_pastur(0.5);
    const double b = law.support_max();
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 50; ++k) {
        const double value = law.resolvent_moment(b + 0.1 * k, 1);
        CHECK(value < prev);
        prev = value;
    }
    for (double lambda : {b + 0.05, b + 0.5, b + 3.0}) {
        const double h = 1e-5;
        const double fd = (law.resolvent_moment(lambda + h, 1) - law.resolvent_moment(lambda - h, 1)) / (2 * h);
        const double exact = -law.resolvent_moment(lambda, 2);
        CHECK(std::abs(fd - exact) < 1e-4 * std::abs(exact));
    }
}

TEST_CASE("weighted spectrum law reproduces the resolvent quadratic form") {
    RngStream rng(61, 0);
    for (int inst = 0; inst < 10; ++inst) {
        const auto v = sample_matrix<double>(EntryLaw::real_gaussian(), 10, 20, rng);
        const auto m = scaled_gram(v, 1.0 / 20.0);
        const auto d = sym_eig(m);
        const auto x = testing::random_unit<double>(10, rng);
        const auto law = LimitLaw::weighted_spectrum<double>(d, x);
        for (double gap : {0.01, 0.5, 2.0}) {
            const double lambda = d.max_eigenvalue() + gap;
            for (int p : {1, 2})
                CHECK(std::abs(law.resolvent_moment(lambda, p) - resolvent_quadratic_form<double>(d, x, x, lambda, p)) <
                      1e-10 * std::max(1.0, law.resolvent_moment(lambda, p)));
        }
    }
}
