#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace eigenbridge {

struct GaussRule {
    std::vector<double> nodes;  // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre rule of the given order; nodes from Newton iteration on P_n.
GaussRule gauss_legendre(std::size_t order);

/// Adaptive Gauss-Legendre: an interval is accepted when the single-rule
/// estimate and the sum over its two halves agree to the local tolerance;
/// otherwise both halves are refined with half the tolerance each.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10,
                 int max_depth = 40);

}  // namespace eigenbridge
