// amred: build Active Manifolds, fit surrogates and compare against Active
// Subspaces from the command line.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "amred/active_subspace.hpp"
#include "amred/error.hpp"
#include "amred/experiment.hpp"
#include "amred/geometry.hpp"
#include "amred/manifold.hpp"
#include "amred/surrogate.hpp"
#include "amred/text.hpp"

namespace {

using namespace amred;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

Point parse_point(const std::string& text) {
    const auto fields = split(text, ',');
    Point p(static_cast<Eigen::Index>(fields.size()));
    for (std::size_t i = 0; i < fields.size(); ++i) p[static_cast<Eigen::Index>(i)] = parse_double(fields[i], "--seed-point");
    return p;
}

struct FieldSource {
    std::string fn;
    std::string grad;
    double spacing = 0.05;
};

void add_field_source(CLI::App* cmd, FieldSource& src) {
    auto* fn = cmd->add_option("--fn", src.fn, "builtin function: f1, f2, f3 or linear");
    auto* grad = cmd->add_option("--grad", src.grad, "gradient-field CSV to ingest");
    fn->excludes(grad);
    cmd->add_option("--spacing", src.spacing, "grid spacing for --fn")->capture_default_str();
}

GradientField load_field(const FieldSource& src) {
    if (!src.grad.empty()) return ingest_gradient_csv(src.grad);
    if (src.fn.empty()) throw UsageError("one of --fn or --grad is required");
    return build_gradient_field(builtin_function(src.fn), src.spacing);
}

void print_summary(const MonteCarloReport& report) {
    for (std::size_t k = 0; k < report.folds.size(); ++k) {
        for (const auto& s : report.folds[k].methods) {
            std::cout << "fold " << k << ' ' << to_string(s.method)
                      << " mean_abs_error=" << format_double(s.mean_abs_error)
                      << " successes=" << s.successes << " failures=" << s.failures << '\n';
        }
    }
    for (const auto& s : report.fold_mean) {
        std::cout << "mean " << to_string(s.method)
                  << " mean_abs_error=" << format_double(s.mean_abs_error) << '\n';
    }
}

struct CompareOptions {
    std::size_t degree = 5;
    std::size_t queries = 100;
    std::uint64_t seed = 42;
    std::size_t folds = 1;
    std::string out;
    std::string seed_point;
    std::string methods = "am,as";
    bool exact = false;
    std::optional<double> hit_tolerance;
    std::optional<double> step;
    std::optional<std::size_t> max_iters;
    std::optional<double> drift_tolerance;
};

void add_compare_options(CLI::App* cmd, CompareOptions& o) {
    cmd->add_option("--degree", o.degree, "surrogate polynomial degree")->capture_default_str();
    cmd->add_option("--queries", o.queries, "random queries per fold")->capture_default_str();
    cmd->add_option("--seed", o.seed, "query RNG seed")->capture_default_str();
    cmd->add_option("--folds", o.folds, "Monte Carlo folds")->capture_default_str();
    cmd->add_option("--out", o.out, "report CSV path");
    cmd->add_option("--seed-point", o.seed_point, "manifold seed point, comma separated");
    cmd->add_option("--methods", o.methods, "am, as or am,as")->capture_default_str();
    cmd->add_flag("--exact-gradients", o.exact, "steer traversals with analytic gradients");
    cmd->add_option("--hit-tol", o.hit_tolerance, "landing distance (default: spacing)");
    cmd->add_option("--step", o.step, "level-set step (default: spacing/4)");
    cmd->add_option("--max-iters", o.max_iters, "traversal step budget");
    cmd->add_option("--drift-tol", o.drift_tolerance, "allowed level-set drift");
}

ExperimentSpec make_spec(const CompareOptions& o, const FieldSource& src) {
    ExperimentSpec spec;
    spec.function_id = src.fn;
    spec.spacing = src.spacing;
    spec.surrogate_degree = o.degree;
    spec.n_queries = o.queries;
    spec.rng_seed = o.seed;
    spec.exact_traversal_gradients = o.exact;
    if (!o.seed_point.empty()) spec.seed_point = parse_point(o.seed_point);
    spec.run_am = o.methods.find("am") != std::string::npos;
    spec.run_as = o.methods.find("as") != std::string::npos;
    return spec;
}

void apply_traversal_overrides(const CompareOptions& o, ExperimentModels& models,
                               const ExperimentSpec& spec) {
    if (!models.traversal) return;
    TraversalConfig& cfg = *models.traversal;
    if (o.hit_tolerance) cfg.hit_tolerance = *o.hit_tolerance;
    if (o.step) cfg.step = *o.step;
    if (o.max_iters) cfg.max_iters = *o.max_iters;
    if (o.drift_tolerance) cfg.drift_tolerance = *o.drift_tolerance;
    validate(cfg, models.field);
    (void)spec;
}

int run_compare(const CompareOptions& o, const FieldSource& src) {
    const ExperimentSpec spec = make_spec(o, src);
    ExperimentModels models = src.grad.empty() ? prepare_models(spec)
                                               : prepare_models(ingest_gradient_csv(src.grad), spec);
    apply_traversal_overrides(o, models, spec);
    const MonteCarloReport report = monte_carlo(models, spec, o.folds);
    print_summary(report);
    if (!o.out.empty()) {
        const std::string source = src.grad.empty() ? "fn:" + src.fn : "grad:" + src.grad;
        ExperimentSpec written = spec;
        written.spacing = models.field.spacing();
        write_report_csv(report, written, source, models.field.dimension(), o.out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active Manifold dimension reduction"};
    app.require_subcommand(1);

    FieldSource build_src;
    std::string build_out;
    std::string build_field_out;
    std::string build_seed;
    std::optional<double> build_step;
    std::optional<std::size_t> build_max_steps;
    auto* build = app.add_subcommand("build", "trace an Active Manifold and write it as CSV");
    add_field_source(build, build_src);
    build->add_option("--seed-point", build_seed, "seed point x0, comma separated (default: centre)");
    build->add_option("--step", build_step, "ascent/descent step (default: spacing)");
    build->add_option("--max-steps", build_max_steps, "step budget per direction");
    build->add_option("--out", build_out, "manifold CSV path")->required();
    build->add_option("--field-out", build_field_out, "also write the gradient field CSV");

    std::string fit_manifold;
    std::size_t fit_degree = 5;
    std::string fit_out;
    std::string fit_plot;
    auto* fit = app.add_subcommand("fit", "fit a polynomial surrogate to a manifold CSV");
    fit->add_option("--manifold", fit_manifold, "manifold CSV")->required();
    fit->add_option("--degree", fit_degree, "polynomial degree")->capture_default_str();
    fit->add_option("--out", fit_out, "surrogate JSON-lines path")->required();
    fit->add_option("--plot", fit_plot, "also write s,z,fhat plot data");

    FieldSource cmp_src;
    CompareOptions cmp_opts;
    auto* compare = app.add_subcommand("compare", "AM versus AS error on random queries");
    add_field_source(compare, cmp_src);
    add_compare_options(compare, cmp_opts);

    FieldSource ing_src;
    CompareOptions ing_opts;
    std::string ing_manifold_out;
    auto* ingest = app.add_subcommand(
        "ingest", "validate a gradient-field CSV and run the comparison on it");
    ingest->add_option("--grad", ing_src.grad, "gradient-field CSV")->required();
    ingest->add_option("--manifold-out", ing_manifold_out, "write the manifold CSV");
    add_compare_options(ingest, ing_opts);

    FieldSource field_src;
    std::string field_out;
    auto* field = app.add_subcommand("field", "sample a builtin function into a gradient CSV");
    field->add_option("--fn", field_src.fn, "builtin function")->required();
    field->add_option("--spacing", field_src.spacing, "grid spacing")->capture_default_str();
    field->add_option("--out", field_out, "gradient CSV path")->required();

    FieldSource sub_src;
    std::size_t sub_degree = 5;
    std::string sub_out;
    auto* subspace = app.add_subcommand("subspace", "build the Active Subspace model");
    add_field_source(subspace, sub_src);
    subspace->add_option("--degree", sub_degree, "polynomial degree")->capture_default_str();
    subspace->add_option("--out", sub_out, "model JSON-lines path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*build) {
            const GradientField f = load_field(build_src);
            const Point x0 = build_seed.empty()
                                 ? Point::Zero(static_cast<Eigen::Index>(f.dimension()))
                                 : parse_point(build_seed);
            if (static_cast<std::size_t>(x0.size()) != f.dimension()) {
                throw UsageError("--seed-point dimension does not match the field");
            }
            const auto built = build_active_manifold_detailed(
                f, x0, build_step.value_or(f.spacing()),
                build_max_steps.value_or(default_max_steps(f)));
            write_manifold_csv(built.manifold, build_out);
            if (!build_field_out.empty()) write_gradient_field_csv(f, build_field_out);
            std::cout << "manifold points=" << built.manifold.size()
                      << " z_min=" << format_double(built.manifold.min_value())
                      << " z_max=" << format_double(built.manifold.max_value())
                      << " descent_stop=" << to_string(built.descent_stop)
                      << " ascent_stop=" << to_string(built.ascent_stop) << '\n';
        } else if (*fit) {
            const ActiveManifold m = read_manifold_csv(fit_manifold);
            const auto pairs = manifold_to_pairs(m);
            const PolynomialSurrogate model = fit_polynomial(pairs, fit_degree);
            write_surrogate_jsonl(model, fit_out);
            if (!fit_plot.empty()) emit_plot_data(m, model, fit_plot);
            std::cout << "degree=" << model.degree
                      << " residual_rms=" << format_double(model.residual_rms) << '\n';
        } else if (*compare) {
            if (cmp_src.fn.empty() && cmp_src.grad.empty()) {
                throw UsageError("compare needs --fn or --grad");
            }
            return run_compare(cmp_opts, cmp_src);
        } else if (*ingest) {
            const GradientField f = ingest_gradient_csv(ing_src.grad);
            std::cout << "ingested dim=" << f.dimension() << " spacing=" << format_double(f.spacing())
                      << " samples=" << f.size() << " zero_gradient=" << f.zero_gradient_count()
                      << '\n';
            if (!ing_manifold_out.empty()) {
                const Point x0 = ing_opts.seed_point.empty()
                                     ? Point::Zero(static_cast<Eigen::Index>(f.dimension()))
                                     : parse_point(ing_opts.seed_point);
                write_manifold_csv(build_active_manifold(f, x0), ing_manifold_out);
            }
            return run_compare(ing_opts, ing_src);
        } else if (*field) {
            write_gradient_field_csv(
                build_gradient_field(builtin_function(field_src.fn), field_src.spacing), field_out);
        } else if (*subspace) {
            const GradientField f = load_field(sub_src);
            const ActiveSubspaceModel model = build_as_model(f, sub_degree);
            std::ofstream out(sub_out);
            if (!out) throw UsageError("cannot open '" + sub_out + "' for writing");
            out << to_json_line(model) << '\n';
            std::cout << "eigenvalues=";
            for (Eigen::Index i = 0; i < model.eigenvalues.size(); ++i) {
                std::cout << (i ? "," : "") << format_double(model.eigenvalues[i]);
            }
            std::cout << '\n';
        }
    } catch (const UsageError& e) {
        std::cerr << "amred: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "amred: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
