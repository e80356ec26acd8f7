#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "eigenbridge/entry_law.hpp"
#include "eigenbridge/linalg.hpp"
#include "eigenbridge/rng.hpp"
#include "eigenbridge/stat_tests.hpp"

namespace eigenbridge {

enum class Experiment { HaarBridge, CovBridge, MpCheck, LambdaMax, SpikeDetect };

std::string_view to_string(Experiment e) noexcept;
/// Throws Errc::ConfigError on an unknown name.
Experiment parse_experiment(std::string_view name);

struct ExperimentConfig {
    Experiment experiment = Experiment::HaarBridge;
    std::size_t n = 0;
    std::size_t s = 0;
    std::size_t m = 2;
    Field field = Field::Real;
    EntryLaw law = EntryLaw::real_gaussian();
    double theta = 0.0;
    std::optional<double> y_override;  // s = round(n / y) when set
    std::size_t replicates = 100;
    std::uint64_t master_seed = 0;
    std::string output_path;
    std::optional<std::size_t> thread_count;

    /// Fills derived fields (s from y) and throws Errc::ConfigError naming the
    /// first violated constraint.
    void validate();

    /// Entry law actually sampled: a Gaussian request on the complex field
    /// becomes the standard complex Gaussian.
    [[nodiscard]] EntryLaw effective_law() const;
    [[nodiscard]] double aspect_ratio() const { return static_cast<double>(n) / static_cast<double>(s); }

    [[nodiscard]] nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ReplicateRecord {
    std::size_t replicate_index = 0;
    bool flagged = false;
    std::vector<double> values;  // aligned with ExperimentResult::columns
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<std::string> columns;
    std::vector<ReplicateRecord> records;
    std::vector<TestReport> reports;
    std::vector<std::string> skipped;  // tests that need more replicates than were run
    nlohmann::json theory = nlohmann::json::object();

    [[nodiscard]] bool all_pass() const;
    [[nodiscard]] const TestReport* find(std::string_view name) const;
    [[nodiscard]] std::vector<double> column(std::string_view name) const;

    [[nodiscard]] std::string replicates_csv() const;
    [[nodiscard]] nlohmann::json summary() const;
};

/// Fixed path-sampling grid t = 0.05, 0.10, ..., 0.95.
const std::vector<double>& sampling_grid();

std::string version_string();

/// cfg.thread_count, else $EIGENBRIDGE_THREADS, else 1.
std::size_t resolve_thread_count(const ExperimentConfig& cfg);

/// Runs every replicate (stream index = replicate index), evaluates the test
/// suite of the experiment kind and, when output_path is set, writes
/// <out>/replicates.csv and <out>/summary.json.
ExperimentResult run_experiment(ExperimentConfig cfg);

/// Column layout of one replicate row for the configured experiment.
std::vector<std::string> record_columns(const ExperimentConfig& cfg);

ReplicateRecord pipeline_haar_bridge(const ExperimentConfig& cfg, RngStream& rng);
ReplicateRecord pipeline_cov_bridge(const ExperimentConfig& cfg, RngStream& rng);
ReplicateRecord pipeline_mp_check(const ExperimentConfig& cfg, RngStream& rng);
ReplicateRecord pipeline_lambda_max(const ExperimentConfig& cfg, RngStream& rng);

/// Truncation level above which a spike replicate is discarded (infinite in
/// the subcritical regime).
struct SpikeContext {
    double theta = 0.0;
    double truncation = 0.0;
};
ReplicateRecord pipeline_spike(const ExperimentConfig& cfg, RngStream& rng, const SpikeContext& ctx);

/// Spike statistics for a given noise matrix S, probes = sign vectors
/// (v first, then the x_k). Exposed so a fixed S can be fed in directly.
template <Scalar T>
ReplicateRecord spike_replicate(const Matrix<T>& s, std::size_t m, const SpikeContext& ctx);

}  // namespace eigenbridge
