#include "eigenbridge/spike.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "eigenbridge/error.hpp"

namespace eigenbridge {

namespace {

constexpr double kPoleTol = 1e-14;
constexpr double kEdgeOffset = 1e-8;
constexpr double kEdgeStability = 1e-4;
constexpr double kLimitResidualTol = 1e-10;
constexpr int kMaxBisection = 200;

// Bisection for a decreasing g with g(lo) > target >= g(hi).
double bisect_decreasing(const std::function<double(double)>& g, double lo, double hi, double target) {
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < kMaxBisection; ++iter) {
        mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double value = g(mid);
        if (value == target) return mid;
        if (value > target) lo = mid;
        else hi = mid;
    }
    // Whichever bracket end is closer in residual.
    const double rl = std::abs(g(lo) - target);
    const double rh = std::abs(g(hi) - target);
    return rl <= rh ? lo : hi;
}

template <Scalar T>
void require_unit(std::span<const T> v) {
    if (!(std::abs(norm2<T>(v) - 1.0) < 1e-10)) throw Error(Errc::NotUnit, "v is not a unit vector");
}

}  // namespace

template <Scalar T>
Matrix<T> build_spiked(const Matrix<T>& s, double theta, std::span<const T> v) {
    if (!(theta > 0.0)) throw Error(Errc::BadTheta, "theta must be positive");
    require_unit(v);
    if (v.size() != s.rows() || !s.square()) throw Error(Errc::LengthMismatch, "v does not match S");
    const std::size_t n = s.rows();
    Matrix<T> b(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j; i < n; ++i) {
            const T lower = theta * v[i] * conj(v[j]) + s(i, j);
            const T upper = theta * v[j] * conj(v[i]) + s(j, i);
            const T avg = 0.5 * (lower + conj(upper));
            b(i, j) = avg;
            b(j, i) = conj(avg);
        }
    for (std::size_t i = 0; i < n; ++i) b(i, i) = T(real_part(b(i, i)));
    return b;
}

template <Scalar T>
double secular_root(std::span<const double> eigenvalues, std::span<const T> c, double theta) {
    if (!(theta > 0.0)) throw Error(Errc::BadTheta, "theta must be positive");
    const double top = eigenvalues.back();
    const double target = 1.0 / theta;
    auto f = [&](double lambda) {
        double acc = 0.0;
        for (std::size_t i = 0; i < eigenvalues.size(); ++i) acc += abs2(c[i]) / (lambda - eigenvalues[i]);
        return acc;
    };
    const double lo = top + std::max(kPoleTol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(top));
    if (!(f(lo) > target)) throw Error(Errc::NoRoot, "v*(lambda - S)^{-1} v stays below 1/theta above lambda_max");
    double hi = top + theta + 1.0;
    for (int expand = 0; f(hi) >= target; ++expand) {
        if (expand > 100) throw Error(Errc::NoRoot, "bracket expansion failed");
        hi = top + 2.0 * (hi - top);
    }
    return bisect_decreasing(f, lo, hi, target);
}

template <Scalar T>
double largest_eig_secular(const SpectralDecomposition<T>& d, double theta, std::span<const T> v) {
    require_unit(v);
    const auto c = eigen_coordinates(d, v);
    return secular_root<T>(d.eigenvalues, c, theta);
}

template <Scalar T>
std::vector<T> top_eigvec_resolvent(const SpectralDecomposition<T>& d, double lambda1, std::span<const T> v) {
    if (lambda1 - d.max_eigenvalue() < kPoleTol) throw Error(Errc::PoleTooClose, "lambda1 not above lambda_max(S)");
    const auto c = eigen_coordinates(d, v);
    std::vector<T> w(d.size(), T{});
    for (std::size_t i = 0; i < d.size(); ++i) {
        const T f = c[i] / (lambda1 - d.eigenvalues[i]);
        const auto u = d.eigenvectors.col(i);
        for (std::size_t r = 0; r < w.size(); ++r) w[r] += u[r] * f;
    }
    return w;
}

template <Scalar T>
double resolvent_norm(std::span<const double> eigenvalues, std::span<const T> c, double lambda1) {
    return std::sqrt(real_part(resolvent_quadratic_form<T>(eigenvalues, c, c, lambda1, 2)));
}

double detection_threshold(const LimitLaw& law) {
    if (!law.is_marchenko_pastur()) return 0.0;
    const double edge = law.support_max();
    const double f1 = law.resolvent_moment(edge + kEdgeOffset, 1);
    const double f2 = law.resolvent_moment(edge + 2.0 * kEdgeOffset, 1);
    if (!(std::abs(f1 - f2) < kEdgeStability))
        throw Error(Errc::NoConvergence, "edge value of the resolvent integral is not stable");
    const double limit = f1 + (f1 - f2) / (std::sqrt(2.0) - 1.0);
    return 1.0 / limit;
}

SpikeSolution theoretical_solution(const LimitLaw& law, double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) throw Error(Errc::BadTheta, "theta must be positive");
    SpikeSolution out;
    out.theta = theta;
    out.threshold_theta_c = detection_threshold(law);
    if (theta <= out.threshold_theta_c) {
        out.regime = SpikeSolution::Regime::Subcritical;
        return out;
    }
    out.regime = SpikeSolution::Regime::Supercritical;
    const double edge = law.support_max();
    const double target = 1.0 / theta;
    auto f = [&](double lambda) { return law.resolvent_moment(lambda, 1); };
    double lo = edge + kEdgeOffset;
    if (!(f(lo) > target)) lo = edge + 2e-12;
    const double lambda1 = bisect_decreasing(f, lo, edge + theta + 1.0, target);
    if (!(std::abs(f(lambda1) - target) < kLimitResidualTol))
        throw Error(Errc::NoConvergence, "limit secular equation did not converge");
    const double second = law.resolvent_moment(lambda1, 2);
    out.lambda1 = lambda1;
    out.limit_variance = second - target * target;
    out.limit_norm = std::sqrt(second);
    return out;
}

template <Scalar T>
T projection_stat(std::span<const double> eigenvalues, std::span<const T> cx, std::span<const T> cv, double lambda) {
    const double n = static_cast<double>(eigenvalues.size());
    const double scale = is_complex_v<T> ? std::sqrt(2.0 * n) : std::sqrt(n);
    return scale * resolvent_quadratic_form<T>(eigenvalues, cx, cv, lambda, 1);
}

template <Scalar T>
T projection_stat(const SpectralDecomposition<T>& d, double lambda, std::span<const T> v, std::span<const T> x) {
    if (!(std::abs(dot<T>(x, v)) < 1e-10)) throw Error(Errc::NotOrthogonal, "x is not orthogonal to v");
    const auto cx = eigen_coordinates(d, x);
    const auto cv = eigen_coordinates(d, v);
    return projection_stat<T>(d.eigenvalues, cx, cv, lambda);
}

#define EIGENBRIDGE_INSTANTIATE(T)                                                                             \
    template Matrix<T> build_spiked(const Matrix<T>&, double, std::span<const T>);                             \
    template double secular_root(std::span<const double>, std::span<const T>, double);                         \
    template double largest_eig_secular(const SpectralDecomposition<T>&, double, std::span<const T>);          \
    template std::vector<T> top_eigvec_resolvent(const SpectralDecomposition<T>&, double, std::span<const T>); \
    template double resolvent_norm(std::span<const double>, std::span<const T>, double);                       \
    template T projection_stat(std::span<const double>, std::span<const T>, std::span<const T>, double);       \
    template T projection_stat(const SpectralDecomposition<T>&, double, std::span<const T>, std::span<const T>);

EIGENBRIDGE_INSTANTIATE(double)
EIGENBRIDGE_INSTANTIATE(Complex)

#undef EIGENBRIDGE_INSTANTIATE

}  // namespace eigenbridge
