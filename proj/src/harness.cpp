#include "eigenbridge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "eigenbridge/error.hpp"
#include "eigenbridge/haar.hpp"
#include "eigenbridge/mp_law.hpp"
#include "eigenbridge/processes.hpp"
#include "eigenbridge/spike.hpp"

#ifndef EIGENBRIDGE_VERSION
#define EIGENBRIDGE_VERSION "0.1.0-unknown"
#endif

namespace eigenbridge {

namespace {

constexpr double kPinTol = 1e-8;
constexpr double kHaarKsTol = 0.06;
constexpr double kCovKsTol = 0.08;
constexpr double kCovarianceTol = 0.05;
constexpr double kLambdaMaxTol = 0.1;
constexpr double kMpKsTol = 0.05;
constexpr double kMpMargin = 0.1;
constexpr double kSpikeLambdaTol = 0.05;
constexpr double kSpikeNormTol = 0.05;
constexpr double kSpikeVarianceTol = 0.15;
constexpr double kSubcriticalTol = 0.1;
constexpr std::size_t kMinStatReplicates = 500;

[[noreturn]] void config_error(const std::string& what) { throw Error(Errc::ConfigError, what); }

std::string format_time(double t) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.2f", t);
    return buf;
}

std::vector<std::string> process_names(Field field, std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t k = 1; k <= m; ++k) names.push_back(ProcessLabel{ProcessLabel::Kind::Diag, k, k}.name(field));
    for (std::size_t j = 1; j <= m; ++j)
        for (std::size_t k = j + 1; k <= m; ++k) {
            names.push_back(ProcessLabel{ProcessLabel::Kind::CrossReal, j, k}.name(field));
            if (field == Field::Complex) names.push_back(ProcessLabel{ProcessLabel::Kind::CrossImag, j, k}.name(field));
        }
    return names;
}

std::vector<std::string> projection_names(Field field, std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t k = 1; k < m; ++k) {
        if (field == Field::Complex) {
            names.push_back("proj_re_" + std::to_string(k));
            names.push_back("proj_im_" + std::to_string(k));
        } else {
            names.push_back("proj_" + std::to_string(k));
        }
    }
    return names;
}

// Appends pin residual, sup statistics and grid samples of the processes.
void append_bridge_values(const std::vector<StepProcess>& processes, std::vector<double>& values) {
    double pin = 0.0;
    for (const auto& p : processes) pin = std::max(pin, p.pin_residual());
    values.push_back(pin);
    for (const auto& p : processes) values.push_back(p.sup_abs());
    for (const auto& p : processes)
        for (double t : sampling_grid()) values.push_back(p.at(t));
}

template <Scalar T>
Matrix<T> noise_covariance(const ExperimentConfig& cfg, RngStream& rng) {
    const auto v = sample_matrix<T>(cfg.effective_law(), cfg.n, cfg.s, rng);
    return scaled_gram(v, 1.0 / static_cast<double>(cfg.s));
}

template <class Fn>
std::vector<ReplicateRecord> run_replicates(const ExperimentConfig& cfg, std::size_t threads, Fn&& body) {
    std::vector<ReplicateRecord> records(cfg.replicates);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t index = next.fetch_add(1);
            if (index >= cfg.replicates) return;
            try {
                RngStream rng(cfg.master_seed, index);
                records[index] = body(rng);
                records[index].replicate_index = index;
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(cfg.replicates);
                return;
            }
        }
    };
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, cfg.replicates));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

void add_bridge_tests(ExperimentResult& result, Field field, double ks_tol) {
    const auto& cfg = result.config;
    const auto names = process_names(field, cfg.m);
    const std::size_t reps = result.records.size();

    const auto pins = result.column("pin_residual");
    auto pin_report = TestReport::make("pinning", *std::max_element(pins.begin(), pins.end()), kPinTol, reps);
    result.reports.push_back(pin_report);

    for (const auto& name : names) {
        const auto sups = result.column("sup_" + name);
        if (reps >= 2) result.reports.push_back(TestReport::make("ks_sup_" + name, ks_distance(sups, kolmogorov_cdf), ks_tol, reps));
        else result.skipped.push_back("ks_sup_" + name);
    }

    const std::vector<double> times = {0.25, 0.5, 0.75};
    std::vector<std::pair<double, double>> grid;
    for (double s : times)
        for (double t : times)
            if (s <= t) grid.emplace_back(s, t);
    for (const auto& name : names) {
        if (reps < kMinStatReplicates) {
            result.skipped.push_back("covariance_" + name);
            continue;
        }
        std::vector<std::vector<double>> samples(reps);
        std::vector<std::vector<double>> cols;
        for (double t : times) cols.push_back(result.column(name + "@" + format_time(t)));
        for (std::size_t r = 0; r < reps; ++r)
            for (const auto& c : cols) samples[r].push_back(c[r]);
        result.reports.push_back(bridge_covariance_from_samples(times, samples, grid, kCovarianceTol, "covariance_" + name));
    }

    if (reps < kMinStatReplicates || names.size() < 2) {
        result.skipped.push_back("independence");
        return;
    }
    std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
    for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = a + 1; b < names.size(); ++b)
            pairs.emplace_back(result.column(names[a] + "@0.50"), result.column(names[b] + "@0.50"));
    result.reports.push_back(cross_independence_check(pairs, -1.0, "independence"));
}

double mean_of(const std::vector<double>& x) {
    if (x.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

void add_lambda_max_test(ExperimentResult& result) {
    const double b = mp_support_edges(result.config.aspect_ratio()).second;
    const double mean = mean_of(result.column("lambda_max"));
    auto report = TestReport::make("lambda_max_mean", std::abs(mean - b), kLambdaMaxTol, result.records.size());
    report.add_detail("mean_lambda_max", mean);
    report.add_detail("edge", b);
    result.reports.push_back(report);
}

void add_spike_tests(ExperimentResult& result, const SpikeSolution& sol) {
    const auto& cfg = result.config;
    const std::size_t reps = result.records.size();
    const auto no_root = result.column("no_root");
    const auto discarded = result.column("discarded");
    const auto lambdas = result.column("lambda_n1");
    const auto norms = result.column("resolvent_norm");

    std::vector<double> roots;
    std::vector<double> root_norms;
    for (std::size_t r = 0; r < reps; ++r)
        if (no_root[r] == 0.0) {
            roots.push_back(lambdas[r]);
            root_norms.push_back(norms[r]);
        }
    const double n_no_root = static_cast<double>(reps - roots.size());
    const double n_discarded = static_cast<double>(std::count(discarded.begin(), discarded.end(), 1.0));

    if (!sol.supercritical()) {
        const double b = mp_support_edges(cfg.aspect_ratio()).second;
        const double mean = mean_of(roots);
        auto report = TestReport::make("lambda_n1_edge", std::abs(mean - b), kSubcriticalTol, roots.size());
        report.add_detail("mean_lambda_n1", mean);
        report.add_detail("edge", b);
        report.add_detail("no_root", n_no_root);
        result.reports.push_back(report);
        return;
    }

    const double mean = mean_of(roots);
    auto lam = TestReport::make("lambda1_mean", std::abs(mean - *sol.lambda1), kSpikeLambdaTol, roots.size());
    lam.add_detail("mean_lambda_n1", mean);
    lam.add_detail("lambda1", *sol.lambda1);
    lam.add_detail("no_root", n_no_root);
    result.reports.push_back(lam);

    const double mean_norm = mean_of(root_norms);
    auto nrm = TestReport::make("resolvent_norm_mean", std::abs(mean_norm / *sol.limit_norm - 1.0), kSpikeNormTol,
                                root_norms.size());
    nrm.add_detail("mean_norm", mean_norm);
    nrm.add_detail("limit_norm", *sol.limit_norm);
    result.reports.push_back(nrm);

    std::vector<std::vector<double>> series;
    const auto names = projection_names(cfg.field, cfg.m);
    for (const auto& name : names) {
        const auto col = result.column(name);
        std::vector<double> kept;
        for (std::size_t r = 0; r < reps; ++r)
            if (discarded[r] == 0.0 && no_root[r] == 0.0) kept.push_back(col[r]);
        if (kept.size() < kMinStatReplicates) {
            result.skipped.push_back("projection_moments_" + name);
            continue;
        }
        auto report = gaussian_moment_check(kept, *sol.limit_variance, kSpikeVarianceTol, "projection_moments_" + name);
        report.add_detail("discarded", n_discarded);
        result.reports.push_back(report);
        series.push_back(std::move(kept));
    }
    if (series.size() >= 2 && std::all_of(series.begin(), series.end(), [&](const auto& s) { return s.size() == series[0].size(); })) {
        std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
        for (std::size_t a = 0; a < series.size(); ++a)
            for (std::size_t b = a + 1; b < series.size(); ++b) pairs.emplace_back(series[a], series[b]);
        result.reports.push_back(cross_independence_check(pairs, -1.0, "projection_independence"));
    }
}

}  // namespace

std::string_view to_string(Experiment e) noexcept {
    switch (e) {
        case Experiment::HaarBridge: return "haar-bridge";
        case Experiment::CovBridge: return "cov-bridge";
        case Experiment::MpCheck: return "mp-check";
        case Experiment::LambdaMax: return "lambda-max";
        case Experiment::SpikeDetect: return "spike-detect";
    }
    return "unknown";
}

Experiment parse_experiment(std::string_view name) {
    for (auto e : {Experiment::HaarBridge, Experiment::CovBridge, Experiment::MpCheck, Experiment::LambdaMax,
                   Experiment::SpikeDetect})
        if (to_string(e) == name) return e;
    config_error("unknown experiment '" + std::string(name) + "'");
}

EntryLaw ExperimentConfig::effective_law() const {
    if (field == Field::Complex && law.kind == EntryLaw::Kind::RealGaussian) return EntryLaw::complex_gaussian();
    return law;
}

void ExperimentConfig::validate() {
    if (n < 2) config_error("n must be at least 2");
    if (replicates < 1) config_error("replicates must be at least 1");
    if (m < 1) config_error("m must be at least 1");
    if (field == Field::Real && law.is_complex()) config_error("a complex entry law needs --field complex");
    const bool covariance = experiment != Experiment::HaarBridge;
    if (covariance) {
        if (y_override) {
            if (!(*y_override > 0.0)) config_error("y must be positive");
            s = static_cast<std::size_t>(std::llround(static_cast<double>(n) / *y_override));
        }
        if (s < 1) config_error("covariance experiments need s >= 1 (or --y)");
    }
    if (experiment == Experiment::CovBridge) {
        if (field != Field::Real) config_error("cov-bridge is defined for real entries only");
        if (m >= 63 || n % (std::size_t{1} << m) != 0) config_error("cov-bridge requires n to be a multiple of 2^m");
    }
    if (experiment == Experiment::HaarBridge && m > n) config_error("haar-bridge requires m <= n");
    if (experiment == Experiment::SpikeDetect) {
        if (!(theta > 0.0)) config_error("spike-detect requires theta > 0");
        if (m >= 63 || n % (std::size_t{1} << m) != 0) config_error("spike-detect requires n to be a multiple of 2^m");
    }
    if (thread_count && *thread_count < 1) config_error("threads must be at least 1");
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j = {{"experiment", to_string(experiment)},
                        {"n", n},
                        {"s", s},
                        {"m", m},
                        {"field", field == Field::Complex ? "complex" : "real"},
                        {"law", law.name()},
                        {"theta", theta},
                        {"reps", replicates},
                        {"seed", master_seed},
                        {"out", output_path}};
    if (y_override) j["y"] = *y_override;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    try {
        cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());
        cfg.n = j.value("n", std::size_t{0});
        cfg.s = j.value("s", std::size_t{0});
        cfg.m = j.value("m", std::size_t{2});
        const auto field = j.value("field", std::string("real"));
        if (field != "real" && field != "complex") config_error("field must be real or complex");
        cfg.field = field == "complex" ? Field::Complex : Field::Real;
        cfg.law = EntryLaw::parse(j.value("law", std::string("gaussian")));
        cfg.theta = j.value("theta", 0.0);
        if (j.contains("y")) cfg.y_override = j.at("y").get<double>();
        cfg.replicates = j.value("reps", std::size_t{100});
        if (j.contains("seed")) {
            const auto& seed = j.at("seed");
            if (seed.is_string()) {
                const auto parsed = parse_seed(seed.get<std::string>());
                if (!parsed) config_error("bad seed");
                cfg.master_seed = *parsed;
            } else {
                cfg.master_seed = seed.get<std::uint64_t>();
            }
        }
        cfg.output_path = j.value("out", std::string());
        if (j.contains("threads")) cfg.thread_count = j.at("threads").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        config_error(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

const std::vector<double>& sampling_grid() {
    static const std::vector<double> grid = [] {
        std::vector<double> g;
        for (int i = 1; i <= 19; ++i) g.push_back(i / 20.0);
        return g;
    }();
    return grid;
}

std::string version_string() { return EIGENBRIDGE_VERSION; }

std::size_t resolve_thread_count(const ExperimentConfig& cfg) {
    if (cfg.thread_count) return *cfg.thread_count;
    if (const char* env = std::getenv("EIGENBRIDGE_THREADS")) {
        char* end = nullptr;
        const long value = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && value >= 1) return static_cast<std::size_t>(value);
    }
    return 1;
}

std::vector<std::string> record_columns(const ExperimentConfig& cfg) {
    std::vector<std::string> cols;
    auto bridge_columns = [&](Field field) {
        const auto names = process_names(field, cfg.m);
        cols.push_back("pin_residual");
        for (const auto& name : names) cols.push_back("sup_" + name);
        for (const auto& name : names)
            for (double t : sampling_grid()) cols.push_back(name + "@" + format_time(t));
    };
    switch (cfg.experiment) {
        case Experiment::HaarBridge: bridge_columns(cfg.field); break;
        case Experiment::CovBridge:
            cols = {"lambda_max", "zero_eigenvalues"};
            bridge_columns(Field::Real);
            break;
        case Experiment::MpCheck: cols = {"lambda_min", "lambda_max", "ks_mp", "mass_outside"}; break;
        case Experiment::LambdaMax: cols = {"lambda_max"}; break;
        case Experiment::SpikeDetect: {
            cols = {"lambda_max_s", "lambda_n1", "no_root", "discarded", "resolvent_norm"};
            const auto proj = projection_names(cfg.field, cfg.m);
            cols.insert(cols.end(), proj.begin(), proj.end());
            break;
        }
    }
    return cols;
}

ReplicateRecord pipeline_haar_bridge(const ExperimentConfig& cfg, RngStream& rng) {
    ReplicateRecord rec;
    // The u_k = U^* e_k are the first m columns of the Haar matrix U^*.
    if (cfg.field == Field::Complex) append_bridge_values(frame_processes(haar_frame<Complex>(cfg.n, cfg.m, rng)), rec.values);
    else append_bridge_values(frame_processes(haar_frame<double>(cfg.n, cfg.m, rng)), rec.values);
    return rec;
}

ReplicateRecord pipeline_cov_bridge(const ExperimentConfig& cfg, RngStream& rng) {
    const auto m_n = noise_covariance<double>(cfg, rng);
    const auto probes = sign_vector_family(cfg.n, cfg.m);
    auto spectrum = sym_eig_projected(m_n, probes);
    spectrum = randomize_eigenspaces(std::move(spectrum), kDefaultGapTol, rng);

    ReplicateRecord rec;
    const double top = spectrum.max_eigenvalue();
    const double zero_tol = kDefaultGapTol * (1.0 + std::abs(top));
    const auto zeros = std::count_if(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end(),
                                     [&](double l) { return std::abs(l) < zero_tol; });
    rec.values = {top, static_cast<double>(zeros)};
    append_bridge_values(frame_processes(spectrum.coefficients), rec.values);
    return rec;
}

ReplicateRecord pipeline_mp_check(const ExperimentConfig& cfg, RngStream& rng) {
    std::vector<double> eig;
    if (cfg.field == Field::Complex) eig = sym_eigenvalues(noise_covariance<Complex>(cfg, rng));
    else eig = sym_eigenvalues(noise_covariance<double>(cfg, rng));
    const double y = cfg.aspect_ratio();
    const auto [a, b] = mp_support_edges(y);
    const double zero_tol = kDefaultGapTol * (1.0 + std::abs(eig.back()));
    std::size_t outside = 0;
    for (auto& l : eig) {
        const bool at_zero_atom = y > 1.0 && std::abs(l) < zero_tol;
        if (!at_zero_atom && (l < a - kMpMargin || l > b + kMpMargin)) ++outside;
        l = std::max(l, 0.0);  // M_n is nonnegative definite
    }
    const double ks = ks_distance(eig, [y](double x) { return mp_cdf(y, x); });
    ReplicateRecord rec;
    rec.values = {eig.front(), eig.back(), ks, static_cast<double>(outside) / static_cast<double>(eig.size())};
    return rec;
}

ReplicateRecord pipeline_lambda_max(const ExperimentConfig& cfg, RngStream& rng) {
    std::vector<double> eig;
    if (cfg.field == Field::Complex) eig = sym_eigenvalues(noise_covariance<Complex>(cfg, rng));
    else eig = sym_eigenvalues(noise_covariance<double>(cfg, rng));
    ReplicateRecord rec;
    rec.values = {eig.back()};
    return rec;
}

template <Scalar T>
ReplicateRecord spike_replicate(const Matrix<T>& s, std::size_t m, const SpikeContext& ctx) {
    const std::size_t n = s.rows();
    const auto probes = promote<T>(sign_vector_family(n, m));
    const auto spectrum = sym_eig_projected(s, probes);
    const auto& c = spectrum.coefficients;
    const double top = spectrum.max_eigenvalue();

    ReplicateRecord rec;
    const std::size_t n_proj = (m - 1) * (is_complex_v<T> ? 2 : 1);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    double lambda = nan;
    bool no_root = false;
    try {
        lambda = secular_root<T>(spectrum.eigenvalues, c.col(0), ctx.theta);
    } catch (const Error& e) {
        if (e.code() != Errc::NoRoot) throw;
        no_root = true;
    }
    const bool discarded = top > ctx.truncation;
    rec.flagged = no_root || discarded;
    rec.values = {top, lambda, no_root ? 1.0 : 0.0, discarded ? 1.0 : 0.0, nan};
    if (no_root) {
        rec.values.resize(rec.values.size() + n_proj, nan);
        return rec;
    }
    rec.values[4] = resolvent_norm<T>(spectrum.eigenvalues, c.col(0), lambda);
    for (std::size_t k = 1; k < m; ++k) {
        const T stat = projection_stat<T>(spectrum.eigenvalues, c.col(k), c.col(0), lambda);
        rec.values.push_back(real_part(stat));
        if constexpr (is_complex_v<T>) rec.values.push_back(stat.imag());
    }
    return rec;
}

template ReplicateRecord spike_replicate(const Matrix<double>&, std::size_t, const SpikeContext&);
template ReplicateRecord spike_replicate(const Matrix<Complex>&, std::size_t, const SpikeContext&);

ReplicateRecord pipeline_spike(const ExperimentConfig& cfg, RngStream& rng, const SpikeContext& ctx) {
    if (cfg.field == Field::Complex) return spike_replicate(noise_covariance<Complex>(cfg, rng), cfg.m, ctx);
    return spike_replicate(noise_covariance<double>(cfg, rng), cfg.m, ctx);
}

bool ExperimentResult::all_pass() const {
    return std::all_of(reports.begin(), reports.end(), [](const TestReport& r) { return r.pass; });
}

const TestReport* ExperimentResult::find(std::string_view name) const {
    for (const auto& r : reports)
        if (r.name == name) return &r;
    return nullptr;
}

std::vector<double> ExperimentResult::column(std::string_view name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw Error(Errc::LengthMismatch, "no column named " + std::string(name));
    const auto idx = static_cast<std::size_t>(it - columns.begin());
    std::vector<double> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.values[idx]);
    return out;
}

std::string ExperimentResult::replicates_csv() const {
    std::ostringstream out;
    out << "replicate,flag";
    for (const auto& c : columns) out << ',' << c;
    out << '\n';
    char buf[40];
    for (const auto& r : records) {
        out << r.replicate_index << ',' << (r.flagged ? 1 : 0);
        for (double v : r.values) {
            std::snprintf(buf, sizeof buf, ",%.17g", v);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

nlohmann::json ExperimentResult::summary() const {
    nlohmann::json tests = nlohmann::json::array();
    for (const auto& r : reports) tests.push_back(r.to_json());
    const auto flagged = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.flagged; });
    return {{"version", version_string()},
            {"config", config.to_json()},
            {"theory", theory},
            {"replicates", records.size()},
            {"flagged", flagged},
            {"tests", tests},
            {"skipped", skipped},
            {"all_pass", all_pass()}};
}

ExperimentResult run_experiment(ExperimentConfig cfg) {
    cfg.validate();
    ExperimentResult result;
    result.config = cfg;
    result.columns = record_columns(cfg);
    const std::size_t threads = resolve_thread_count(cfg);

    switch (cfg.experiment) {
        case Experiment::HaarBridge:
            result.records = run_replicates(cfg, threads, [&](RngStream& rng) { return pipeline_haar_bridge(cfg, rng); });
            add_bridge_tests(result, cfg.field, kHaarKsTol);
            break;
        case Experiment::CovBridge:
            result.records = run_replicates(cfg, threads, [&](RngStream& rng) { return pipeline_cov_bridge(cfg, rng); });
            add_bridge_tests(result, Field::Real, kCovKsTol);
            add_lambda_max_test(result);
            if (cfg.n > cfg.s) {
                const auto zeros = result.column("zero_eigenvalues");
                double worst = 0.0;
                for (double z : zeros) worst = std::max(worst, std::abs(z - static_cast<double>(cfg.n - cfg.s)));
                result.reports.push_back(TestReport::make("zero_eigenvalues", worst, 0.0, zeros.size()));
            }
            break;
        case Experiment::MpCheck: {
            result.records = run_replicates(cfg, threads, [&](RngStream& rng) { return pipeline_mp_check(cfg, rng); });
            const auto [a, b] = mp_support_edges(cfg.aspect_ratio());
            result.theory = {{"y", cfg.aspect_ratio()}, {"a", a}, {"b", b}};
            const auto ks = result.column("ks_mp");
            const auto outside = result.column("mass_outside");
            result.reports.push_back(TestReport::make("mp_ks", *std::max_element(ks.begin(), ks.end()), kMpKsTol, ks.size()));
            result.reports.push_back(
                TestReport::make("mp_outside_mass", *std::max_element(outside.begin(), outside.end()), 0.0, outside.size()));
            break;
        }
        case Experiment::LambdaMax:
            result.records = run_replicates(cfg, threads, [&](RngStream& rng) { return pipeline_lambda_max(cfg, rng); });
            result.theory = {{"y", cfg.aspect_ratio()}, {"b", mp_support_edges(cfg.aspect_ratio()).second}};
            add_lambda_max_test(result);
            break;
        case Experiment::SpikeDetect: {
            const auto law = LimitLaw::marchenko_pastur(cfg.aspect_ratio());
            const auto sol = theoretical_solution(law, cfg.theta);
            SpikeContext ctx{cfg.theta, std::numeric_limits<double>::infinity()};
            result.theory = {{"y", cfg.aspect_ratio()},
                             {"b", law.support_max()},
                             {"theta_c", sol.threshold_theta_c},
                             {"supercritical", sol.supercritical()}};
            if (sol.supercritical()) {
                // Any level strictly between sup F and lambda1 works; use the
                // midpoint of sup F and the midpoint of (sup F, lambda1).
                const double mid = 0.5 * (law.support_max() + *sol.lambda1);
                ctx.truncation = 0.5 * (law.support_max() + mid);
                result.theory["lambda1"] = *sol.lambda1;
                result.theory["limit_variance"] = *sol.limit_variance;
                result.theory["limit_norm"] = *sol.limit_norm;
                result.theory["truncation"] = ctx.truncation;
            }
            result.records = run_replicates(cfg, threads, [&](RngStream& rng) { return pipeline_spike(cfg, rng, ctx); });
            add_spike_tests(result, sol);
            break;
        }
    }

    if (!cfg.output_path.empty()) {
        const std::filesystem::path dir(cfg.output_path);
        std::filesystem::create_directories(dir);
        std::ofstream(dir / "replicates.csv") << result.replicates_csv();
        std::ofstream(dir / "summary.json") << result.summary().dump(2) << '\n';
    }
    return result;
}

}  // namespace eigenbridge
