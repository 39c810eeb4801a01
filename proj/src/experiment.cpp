#include "amred/experiment.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>

#include "amred/error.hpp"
#include "amred/text.hpp"

namespace amred {

const char* to_string(Method method) { return method == Method::am ? "AM" : "AS"; }

void validate(const ExperimentSpec& spec) {
    if (spec.n_queries == 0) throw UsageError("an experiment needs at least one query");
    if (!(spec.spacing > 0.0)) throw UsageError("grid spacing must be positive");
    if (!spec.run_am && !spec.run_as) throw UsageError("select at least one of AM and AS");
}

namespace {

void build_methods(ExperimentModels& models, const ExperimentSpec& spec) {
    const GradientField& field = models.field;
    if (spec.run_am) {
        const Point x0 = spec.seed_point.value_or(
            Point::Zero(static_cast<Eigen::Index>(field.dimension())));
        if (static_cast<std::size_t>(x0.size()) != field.dimension()) {
            throw UsageError("seed point has " + std::to_string(x0.size()) +
                             " coordinates, the field has dimension " +
                             std::to_string(field.dimension()));
        }
        models.manifold = build_active_manifold(field, x0);
        const auto pairs = manifold_to_pairs(*models.manifold);
        models.am_surrogate = fit_polynomial(pairs, spec.surrogate_degree);
        models.traversal = spec.traversal.value_or(default_traversal_config(field, *models.manifold));
        validate(*models.traversal, field);
    }
    if (spec.run_as) models.as_model = build_as_model(field, spec.surrogate_degree);
}

}  // namespace

ExperimentModels prepare_models(const ExperimentSpec& spec) {
    validate(spec);
    ScalarFunction fn = builtin_function(spec.function_id);
    ExperimentModels models{build_gradient_field(fn, spec.spacing), std::move(fn), {}, {}, {}, {}};
    build_methods(models, spec);
    return models;
}

ExperimentModels prepare_models(GradientField field, const ExperimentSpec& spec) {
    ExperimentSpec checked = spec;
    checked.spacing = field.spacing();
    validate(checked);
    if (spec.exact_traversal_gradients) {
        throw UsageError("exact traversal gradients need an analytic function");
    }
    ExperimentModels models{std::move(field), std::nullopt, {}, {}, {}, {}};
    build_methods(models, spec);
    return models;
}

const MethodSummary& ErrorReport::summary(Method method) const {
    for (const auto& s : methods)
        if (s.method == method) return s;
    throw UsageError(std::string("method ") + to_string(method) + " was not run");
}

const MethodSummary& MonteCarloReport::mean(Method method) const {
    for (const auto& s : fold_mean)
        if (s.method == method) return s;
    throw UsageError(std::string("method ") + to_string(method) + " was not run");
}

std::vector<Point> draw_queries(std::size_t count, std::size_t dimension, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Point p(static_cast<Eigen::Index>(dimension));
        for (std::size_t k = 0; k < dimension; ++k) {
            const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            p[static_cast<Eigen::Index>(k)] = 2.0 * unit - 1.0;
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::uint64_t fold_seed(std::uint64_t seed, std::size_t fold) {
    return seed + static_cast<std::uint64_t>(fold) * 0x9E3779B97F4A7C15ULL;
}

namespace {

double truth_value(const ExperimentModels& models, const Point& p) {
    if (models.function) return models.function->value(p);
    return models.field.value(models.field.nearest_index(p));
}

QueryRecord am_query(const ExperimentModels& models, const ExperimentSpec& spec, std::size_t index,
                     const Point& p, double truth) {
    QueryRecord rec;
    rec.index = index;
    rec.method = Method::am;
    rec.query = p;
    rec.truth = truth;
    const ScalarFunction* exact =
        spec.exact_traversal_gradients && models.function ? &*models.function : nullptr;
    try {
        ProjectionResult res =
            traverse_to_manifold(models.field, *models.manifold, p, *models.traversal, exact);
        rec.iterations = res.iterations;
        rec.drift = res.drift;
        rec.status = to_string(res.status);
        if (res.ok()) {
            estimate_at(*models.am_surrogate, res);
            rec.param = res.s_star;
            rec.estimate = res.estimate;
            rec.extrapolated = res.extrapolated;
            rec.abs_error = std::abs(truth - res.estimate);
            rec.success = true;
        }
    } catch (const Error& e) {
        rec.status = std::string("error: ") + e.what();
    }
    if (!rec.success) {
        rec.param = std::numeric_limits<double>::quiet_NaN();
        rec.estimate = std::numeric_limits<double>::quiet_NaN();
        rec.abs_error = std::numeric_limits<double>::quiet_NaN();
    }
    return rec;
}

QueryRecord as_query(const ExperimentModels& models, std::size_t index, const Point& p,
                     double truth) {
    QueryRecord rec;
    rec.index = index;
    rec.method = Method::as;
    rec.query = p;
    rec.truth = truth;
    rec.param = p.dot(models.as_model->active_direction);
    const SurrogateValue v = evaluate(models.as_model->surrogate, rec.param);
    rec.estimate = v.value;
    rec.extrapolated = v.extrapolated;
    rec.abs_error = std::abs(truth - v.value);
    rec.status = "ok";
    rec.success = std::isfinite(v.value);
    if (!rec.success) rec.status = "error: non-finite estimate";
    return rec;
}

MethodSummary summarize(Method method, const std::vector<QueryRecord>& records) {
    MethodSummary s;
    s.method = method;
    double sum = 0.0;
    for (const auto& r : records) {
        if (r.method != method) continue;
        if (r.success) {
            ++s.successes;
            sum += r.abs_error;
        } else {
            ++s.failures;
        }
        if (r.extrapolated) ++s.extrapolations;
    }
    s.mean_abs_error = s.successes ? sum / static_cast<double>(s.successes)
                                   : std::numeric_limits<double>::quiet_NaN();
    return s;
}

}  // namespace

ErrorReport run_queries(const ExperimentModels& models, const ExperimentSpec& spec,
                        std::uint64_t seed) {
    validate(spec);
    const std::vector<Point> queries = draw_queries(spec.n_queries, models.field.dimension(), seed);
    ErrorReport report;
    report.seed = seed;
    report.records.reserve(queries.size() * 2);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const double truth = truth_value(models, queries[i]);
        if (spec.run_am && models.manifold) {
            report.records.push_back(am_query(models, spec, i, queries[i], truth));
        }
        if (spec.run_as && models.as_model) {
            report.records.push_back(as_query(models, i, queries[i], truth));
        }
    }
    if (spec.run_am && models.manifold) report.methods.push_back(summarize(Method::am, report.records));
    if (spec.run_as && models.as_model) report.methods.push_back(summarize(Method::as, report.records));
    return report;
}

ErrorReport run_experiment(const ExperimentSpec& spec) {
    return run_queries(prepare_models(spec), spec, spec.rng_seed);
}

MonteCarloReport monte_carlo(const ExperimentModels& models, const ExperimentSpec& spec,
                             std::size_t folds) {
    if (folds == 0) throw UsageError("Monte Carlo needs at least one fold");
    MonteCarloReport out;
    for (std::size_t k = 0; k < folds; ++k) {
        out.folds.push_back(run_queries(models, spec, fold_seed(spec.rng_seed, k)));
    }
    for (const auto& first : out.folds.front().methods) {
        MethodSummary mean;
        mean.method = first.method;
        double sum = 0.0;
        for (const auto& fold : out.folds) {
            const auto& s = fold.summary(first.method);
            sum += s.mean_abs_error;
            mean.successes += s.successes;
            mean.failures += s.failures;
            mean.extrapolations += s.extrapolations;
        }
        mean.mean_abs_error = sum / static_cast<double>(folds);
        out.fold_mean.push_back(mean);
    }
    return out;
}

MonteCarloReport monte_carlo(const ExperimentSpec& spec, std::size_t folds) {
    return monte_carlo(prepare_models(spec), spec, folds);
}

void write_report_csv(const MonteCarloReport& report, const ExperimentSpec& spec,
                      const std::string& source, std::size_t dimension, std::ostream& out) {
    out << "# amred compare source=" << source << " dim=" << dimension
        << " spacing=" << format_double(spec.spacing) << " degree=" << spec.surrogate_degree
        << " queries=" << spec.n_queries << " seed=" << spec.rng_seed
        << " folds=" << report.folds.size() << " rng=mt19937_64\n";
    auto summary_line = [&out](const MethodSummary& s) {
        out << " method=" << to_string(s.method)
            << " mean_abs_error=" << format_double(s.mean_abs_error) << " successes=" << s.successes
            << " failures=" << s.failures << " extrapolated=" << s.extrapolations << '\n';
    };
    for (std::size_t k = 0; k < report.folds.size(); ++k) {
        for (const auto& s : report.folds[k].methods) {
            out << "# fold=" << k << " seed=" << report.folds[k].seed;
            summary_line(s);
        }
    }
    for (const auto& s : report.fold_mean) {
        out << "# fold_mean";
        summary_line(s);
    }

    out << "fold,method,index";
    for (std::size_t k = 1; k <= dimension; ++k) out << ",x" << k;
    out << ",s_star,estimate,true_value,abs_error,iterations,drift,status\n";
    for (std::size_t k = 0; k < report.folds.size(); ++k) {
        for (const auto& r : report.folds[k].records) {
            out << k << ',' << to_string(r.method) << ',' << r.index;
            for (Eigen::Index i = 0; i < r.query.size(); ++i) out << ',' << format_double(r.query[i]);
            out << ',' << format_double(r.param) << ',' << format_double(r.estimate) << ','
                << format_double(r.truth) << ',' << format_double(r.abs_error) << ','
                << r.iterations << ',' << format_double(r.drift) << ',';
            std::string status = r.status;
            for (char& c : status)
                if (c == ',' || c == '\n') c = ';';
            out << status;
            if (r.extrapolated) out << ";extrapolated";
            out << '\n';
        }
    }
}

void write_report_csv(const MonteCarloReport& report, const ExperimentSpec& spec,
                      const std::string& source, std::size_t dimension, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    write_report_csv(report, spec, source, dimension, out);
    if (!out) throw UsageError("failed writing '" + path + "'");
}

GradientField ingest_gradient_csv(const std::string& path) { return read_gradient_field_csv(path); }

void emit_plot_data(const ActiveManifold& manifold, const PolynomialSurrogate& surrogate,
                    const std::string& path) {
    if (path.empty()) throw UsageError("plot data needs an output path");
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    out << "s,z,fhat\n";
    for (std::size_t i = 0; i < manifold.size(); ++i) {
        out << format_double(manifold.param(i)) << ',' << format_double(manifold.value(i)) << ','
            << format_double(evaluate(surrogate, manifold.param(i)).value) << '\n';
    }
    if (!out) throw UsageError("failed writing '" + path + "'");
}

}  // namespace amred
