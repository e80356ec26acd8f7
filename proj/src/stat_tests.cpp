#include "eigenbridge/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eigenbridge/error.hpp"

namespace eigenbridge {

namespace {

constexpr std::size_t kMinReplicates = 500;
constexpr double kSeriesCutoff = 1e-12;

std::size_t time_slot(const std::vector<double>& times, double t) {
    for (std::size_t i = 0; i < times.size(); ++i)
        if (std::abs(times[i] - t) < 1e-12) return i;
    throw Error(Errc::LengthMismatch, "grid time " + std::to_string(t) + " was not sampled");
}

double mean_of(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

}  // namespace

TestReport TestReport::make(std::string name, double statistic, double threshold, std::size_t replicates) {
    TestReport r;
    r.name = std::move(name);
    r.statistic = statistic;
    r.threshold = threshold;
    r.replicates = replicates;
    r.pass = statistic <= threshold;
    return r;
}

void TestReport::add_detail(const std::string& key, double value) { details[key] = value; }

nlohmann::json TestReport::to_json() const {
    return {{"name", name},           {"statistic", statistic}, {"threshold", threshold},
            {"replicates", replicates}, {"pass", pass},           {"details", details}};
}

double kolmogorov_cdf(double x) {
    if (!(x > 0.0)) return 0.0;
    if (x < 1.0) {
        // Jacobi-theta form, fast for small x.
        double sum = 0.0;
        for (int j = 1; j < 1000; ++j) {
            const double odd = 2.0 * j - 1.0;
            const double term = std::exp(-odd * odd * std::numbers::pi * std::numbers::pi / (8.0 * x * x));
            sum += term;
            if (term < kSeriesCutoff * sum || term == 0.0) break;
        }
        return std::sqrt(2.0 * std::numbers::pi) / x * sum;
    }
    double sum = 0.0;
    for (int j = 1; j < 1000; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1) ? term : -term;
        if (term < kSeriesCutoff) break;
    }
    return 1.0 - 2.0 * sum;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.size() < 2) throw Error(Errc::Degenerate, "need at least 2 samples");
    for (double s : samples)
        if (!std::isfinite(s)) throw Error(Errc::Degenerate, "non-finite sample");
    std::sort(samples.begin(), samples.end());
    const double count = static_cast<double>(samples.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        const double upper = static_cast<double>(i + 1) / count;
        const double lower = static_cast<double>(i) / count;
        sup = std::max({sup, std::abs(upper - f), std::abs(lower - f)});
    }
    return sup;
}

TestReport bridge_covariance_from_samples(const std::vector<double>& times,
                                          const std::vector<std::vector<double>>& samples,
                                          const std::vector<std::pair<double, double>>& grid, double threshold,
                                          const std::string& name) {
    const std::size_t reps = samples.size();
    if (reps < kMinReplicates) throw Error(Errc::TooFewPaths, "need at least 500 paths");
    std::vector<double> means(times.size(), 0.0);
    for (const auto& row : samples)
        for (std::size_t g = 0; g < times.size(); ++g) means[g] += row[g];
    for (auto& m : means) m /= static_cast<double>(reps);

    double worst = 0.0;
    std::pair<double, double> worst_at{0.0, 0.0};
    for (auto [s, t] : grid) {
        if (s > t) std::swap(s, t);
        const std::size_t is = time_slot(times, s);
        const std::size_t it = time_slot(times, t);
        double cov = 0.0;
        for (const auto& row : samples) cov += (row[is] - means[is]) * (row[it] - means[it]);
        cov /= static_cast<double>(reps - 1);
        const double dev = std::abs(cov - s * (1.0 - t));
        if (dev > worst) {
            worst = dev;
            worst_at = {s, t};
        }
    }
    auto report = TestReport::make(name, worst, threshold, reps);
    report.add_detail("worst_s", worst_at.first);
    report.add_detail("worst_t", worst_at.second);
    return report;
}

TestReport bridge_covariance_check(const std::vector<StepProcess>& paths,
                                   const std::vector<std::pair<double, double>>& grid, double threshold,
                                   const std::string& name) {
    if (paths.size() < kMinReplicates) throw Error(Errc::TooFewPaths, "need at least 500 paths");
    const std::size_t n = paths.front().n();
    std::vector<double> times;
    for (auto [s, t] : grid)
        for (double u : {s, t})
            if (std::none_of(times.begin(), times.end(), [&](double v) { return std::abs(v - u) < 1e-12; }))
                times.push_back(u);
    std::vector<std::vector<double>> samples;
    samples.reserve(paths.size());
    for (const auto& p : paths) {
        if (p.n() != n) throw Error(Errc::LengthMismatch, "paths differ in n");
        std::vector<double> row;
        for (double t : times) row.push_back(p.at(t));
        samples.push_back(std::move(row));
    }
    return bridge_covariance_from_samples(times, samples, grid, threshold, name);
}

double sample_correlation(std::span<const double> a, std::span<const double> b) {
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa == 0.0 || sbb == 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

TestReport cross_independence_check(const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
                                    double threshold, const std::string& name) {
    if (pairs.empty()) throw Error(Errc::LengthMismatch, "no pairs supplied");
    const std::size_t reps = pairs.front().first.size();
    if (reps < kMinReplicates) throw Error(Errc::LengthMismatch, "need at least 500 replicates per array");
    double worst = 0.0;
    for (const auto& [a, b] : pairs) {
        if (a.size() != reps || b.size() != reps) throw Error(Errc::LengthMismatch, "arrays differ in length");
        worst = std::max(worst, std::abs(sample_correlation(a, b)));
    }
    if (threshold < 0.0) threshold = 4.0 / std::sqrt(static_cast<double>(reps));
    auto report = TestReport::make(name, worst, threshold, reps);
    report.add_detail("pairs", static_cast<double>(pairs.size()));
    return report;
}

TestReport gaussian_moment_check(std::span<const double> samples, double target_variance, double variance_tol,
                                 const std::string& name) {
    if (target_variance < 0.0 || !std::isfinite(target_variance))
        throw Error(Errc::BadVariance, "target variance must be nonnegative");
    const std::size_t reps = samples.size();
    if (reps < kMinReplicates) throw Error(Errc::TooFewPaths, "need at least 500 samples");
    const double r = static_cast<double>(reps);

    if (target_variance == 0.0) {
        double worst = 0.0;
        for (double s : samples) worst = std::max(worst, std::abs(s));
        auto report = TestReport::make(name, worst, 1e-12, reps);
        report.add_detail("max_abs", worst);
        return report;
    }

    const double mean = mean_of(samples);
    double m2 = 0.0, m4 = 0.0;
    for (double s : samples) {
        const double d = s - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double var = m2 / (r - 1.0);
    const double pop_var = m2 / r;
    const double kurt = pop_var > 0.0 ? (m4 / r) / (pop_var * pop_var) - 3.0 : 0.0;

    const double mean_bound = 4.0 * std::sqrt(target_variance / r);
    const double kurt_bound = 4.0 * std::sqrt(24.0 / r);
    const double ratio = var / target_variance;
    const double statistic = std::max({std::abs(mean) / mean_bound, std::abs(ratio - 1.0) / variance_tol,
                                       std::abs(kurt) / kurt_bound});
    auto report = TestReport::make(name, statistic, 1.0, reps);
    report.add_detail("mean", mean);
    report.add_detail("mean_bound", mean_bound);
    report.add_detail("variance", var);
    report.add_detail("target_variance", target_variance);
    report.add_detail("variance_ratio", ratio);
    report.add_detail("variance_tol", variance_tol);
    report.add_detail("excess_kurtosis", kurt);
    report.add_detail("kurtosis_bound", kurt_bound);
    return report;
}

}  // namespace eigenbridge
