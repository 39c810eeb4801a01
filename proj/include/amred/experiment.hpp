#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "amred/active_subspace.hpp"
#include "amred/geometry.hpp"
#include "amred/levelset.hpp"
#include "amred/manifold.hpp"
#include "amred/surrogate.hpp"

namespace amred {

enum class Method { am, as };

const char* to_string(Method method);

struct ExperimentSpec {
    std::string function_id = "f1";
    double spacing = 0.05;
    std::size_t surrogate_degree = 5;
    std::size_t n_queries = 100;
    std::uint64_t rng_seed = 42;
    /// Defaults to the domain centre.
    std::optional<Point> seed_point;
    /// Defaults to default_traversal_config().
    std::optional<TraversalConfig> traversal;
    /// Steer traversals with analytic gradients instead of field samples.
    bool exact_traversal_gradients = false;
    bool run_am = true;
    bool run_as = true;
};

/// Throws UsageError for an empty method set, zero queries or bad spacing.
void validate(const ExperimentSpec& spec);

/// Everything built once per experiment and shared read-only by its queries.
struct ExperimentModels {
    GradientField field;
    /// Direct evaluation for truths; absent for ingested fields, whose truths
    /// are the nearest-sample values.
    std::optional<ScalarFunction> function;
    std::optional<ActiveManifold> manifold;
    std::optional<PolynomialSurrogate> am_surrogate;
    std::optional<TraversalConfig> traversal;
    std::optional<ActiveSubspaceModel> as_model;
};

ExperimentModels prepare_models(const ExperimentSpec& spec);
/// For an ingested field; spec.function_id and spec.spacing are ignored.
ExperimentModels prepare_models(GradientField field, const ExperimentSpec& spec);

struct QueryRecord {
    std::size_t index = 0;
    Method method = Method::am;
    Point query;
    /// Landing parameter s* for AM, projection <p, w1> for AS.
    double param = 0.0;
    double estimate = 0.0;
    double truth = 0.0;
    double abs_error = 0.0;
    std::size_t iterations = 0;
    double drift = 0.0;
    std::string status;
    bool success = false;
    bool extrapolated = false;
};

struct MethodSummary {
    Method method = Method::am;
    /// Over successful queries only; NaN when none succeeded.
    double mean_abs_error = 0.0;
    std::size_t successes = 0;
    std::size_t failures = 0;
    std::size_t extrapolations = 0;
};

struct ErrorReport {
    std::uint64_t seed = 0;
    std::vector<MethodSummary> methods;
    std::vector<QueryRecord> records;

    /// Throws UsageError when the method did not run.
    const MethodSummary& summary(Method method) const;
};

/// n points uniform on [-1,1]^dim.  Coordinates come from std::mt19937_64
/// seeded with `seed`, as (word >> 11) * 2^-53 mapped affinely onto [-1, 1).
std::vector<Point> draw_queries(std::size_t count, std::size_t dimension, std::uint64_t seed);

/// Seed of Monte Carlo fold k: seed + k * 0x9E3779B97F4A7C15 (mod 2^64).
/// Fold 0 reuses the experiment seed.
std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold);

ErrorReport run_queries(const ExperimentModels& models, const ExperimentSpec& spec,
                        std::uint64_t seed);

ErrorReport run_experiment(const ExperimentSpec& spec);

struct MonteCarloReport {
    std::vector<ErrorReport> folds;
    /// Mean over folds of each method's mean error, in the order of
    /// folds.front().methods.
    std::vector<MethodSummary> fold_mean;

    const MethodSummary& mean(Method method) const;
};

MonteCarloReport monte_carlo(const ExperimentModels& models, const ExperimentSpec& spec,
                             std::size_t folds);
MonteCarloReport monte_carlo(const ExperimentSpec& spec, std::size_t folds);

/// Comment header lines (`# ...`) carrying the configuration, the seed and the
/// per-fold summaries, then one row per query:
/// fold,method,index,x1..xn,s_star,estimate,true_value,abs_error,iterations,drift,status
void write_report_csv(const MonteCarloReport& report, const ExperimentSpec& spec,
                      const std::string& source, std::size_t dimension, std::ostream& out);
void write_report_csv(const MonteCarloReport& report, const ExperimentSpec& spec,
                      const std::string& source, std::size_t dimension, const std::string& path);

GradientField ingest_gradient_csv(const std::string& path);

/// CSV `s,z,fhat` with one row per manifold vertex.  Throws UsageError for an
/// empty path.
void emit_plot_data(const ActiveManifold& manifold, const PolynomialSurrogate& surrogate,
                    const std::string& path);

}  // namespace amred
