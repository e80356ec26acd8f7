#include "eigenbridge/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace eigenbridge {

namespace {

constexpr std::size_t kOrder = 16;

const GaussRule& default_rule() {
    static const GaussRule rule = gauss_legendre(kOrder);
    return rule;
}

double apply_rule(const std::function<double(double)>& f, double a, double b) {
    const auto& rule = default_rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

double refine(const std::function<double(double)>& f, double a, double b, double whole, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const double left = apply_rule(f, a, mid);
    const double right = apply_rule(f, mid, b);
    const double halves = left + right;
    if (depth <= 0 || std::abs(halves - whole) <= tol) return halves;
    return refine(f, a, mid, left, 0.5 * tol, depth - 1) + refine(f, mid, b, right, 0.5 * tol, depth - 1);
}

}  // namespace

GaussRule gauss_legendre(std::size_t order) {
    GaussRule rule;
    rule.nodes.resize(order);
    rule.weights.resize(order);
    const std::size_t half = (order + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(order) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (std::size_t j = 1; j <= order; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * static_cast<double>(j) - 1.0) * z * p2 - (static_cast<double>(j) - 1.0) * p3) /
                     static_cast<double>(j);
            }
            dp = static_cast<double>(order) * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[order - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    return rule;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    return refine(f, a, b, apply_rule(f, a, b), abs_tol, max_depth);
}

}  // namespace eigenbridge
