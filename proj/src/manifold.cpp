#include "amred/manifold.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "amred/error.hpp"
#include "amred/text.hpp"

namespace amred {

const char* to_string(TraceStop stop) {
    switch (stop) {
        case TraceStop::zero_gradient: return "zero_gradient";
        case TraceStop::short_step: return "short_step";
        case TraceStop::max_steps: return "max_steps";
        case TraceStop::loop: return "loop";
        case TraceStop::value_reversal: return "value_reversal";
    }
    return "unknown";
}

std::size_t default_max_steps(const GradientField& field) {
    return 10 * field.points_per_axis() * field.dimension();
}

TraceResult trace_path(const GradientField& field, const Point& x0, TraceDirection direction,
                       double step, std::size_t max_steps) {
    if (!(step > 0.0)) throw UsageError("trace step must be positive");
    if (static_cast<std::size_t>(x0.size()) != field.dimension()) {
        throw DimensionMismatch("seed point dimension does not match the field");
    }
    const double sign = direction == TraceDirection::ascent ? 1.0 : -1.0;
    const double min_move = step / 10.0;

    TraceResult out;
    Point p = clamp_to_domain(x0);
    std::size_t here = field.nearest_index(p);
    if (field.is_zero_gradient(here)) {
        throw StalledAtStart("stalled at start: the seed point's nearest grid sample has a zero "
                             "gradient");
    }
    out.points.push_back(p);

    for (std::size_t k = 0; k < max_steps; ++k) {
        if (field.is_zero_gradient(here)) {
            out.stop = TraceStop::zero_gradient;
            return out;
        }
        const Eigen::Map<const Vector> g(field.unit_gradient(here).data(), x0.size());
        Point next = clamp_to_domain(p + sign * step * g);
        if ((next - p).norm() < min_move) {
            out.stop = TraceStop::short_step;
            return out;
        }
        // Oscillation across a ridge of the snapped field.
        const std::size_t n = out.points.size();
        for (std::size_t back = 2; back <= std::min<std::size_t>(3, n); ++back) {
            if ((next - out.points[n - back]).norm() < min_move) {
                out.stop = TraceStop::loop;
                return out;
            }
        }
        const std::size_t there = field.nearest_index(next);
        if (sign * (field.value(there) - field.value(here)) < 0.0) {
            out.stop = TraceStop::value_reversal;
            return out;
        }
        out.points.push_back(next);
        p = std::move(next);
        here = there;
    }
    out.stop = TraceStop::max_steps;
    return out;
}

ActiveManifold::ActiveManifold(std::vector<Point> points, std::vector<double> params,
                               std::vector<double> values, std::optional<Point> seed_point)
    : points_(std::move(points)),
      params_(std::move(params)),
      values_(std::move(values)),
      seed_(std::move(seed_point)) {
    if (points_.size() < 2) {
        throw DegenerateManifold("degenerate manifold: fewer than 2 distinct points");
    }
    if (params_.size() != points_.size() || values_.size() != points_.size()) {
        throw UsageError("manifold points, parameters and values differ in length");
    }
    if (params_.front() != 0.0 || params_.back() != 1.0) {
        throw UsageError("manifold parameters must start at 0 and end at 1");
    }
    const auto n = points_.front().size();
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (points_[i].size() != n) throw DimensionMismatch("manifold points differ in dimension");
        if (!in_domain(points_[i])) throw UsageError("manifold point outside [-1,1]^n");
        if (i == 0) continue;
        if (!(params_[i] > params_[i - 1])) {
            throw UsageError("manifold parameters must be strictly increasing");
        }
        if (values_[i] < values_[i - 1]) {
            throw UsageError("manifold values must be non-decreasing");
        }
        if (points_[i] == points_[i - 1]) {
            throw UsageError("consecutive manifold points coincide");
        }
    }
}

ManifoldBuild build_active_manifold_detailed(const GradientField& field, const Point& x0,
                                             double step, std::size_t max_steps) {
    const TraceResult down = trace_path(field, x0, TraceDirection::descent, step, max_steps);
    const TraceResult up = trace_path(field, x0, TraceDirection::ascent, step, max_steps);

    std::vector<Point> points;
    points.reserve(down.points.size() + up.points.size() - 1);
    points.insert(points.end(), down.points.rbegin(), down.points.rend());
    points.insert(points.end(), up.points.begin() + 1, up.points.end());
    if (points.size() < 2) {
        throw DegenerateManifold("degenerate manifold: both traces stopped at the seed point");
    }

    const std::size_t count = points.size();
    std::vector<double> params(count);
    std::vector<double> values(count);
    for (std::size_t k = 0; k < count; ++k) {
        params[k] = static_cast<double>(k) / static_cast<double>(count - 1);
        values[k] = field.value(field.nearest_index(points[k]));
    }
    params.back() = 1.0;
    return {ActiveManifold(std::move(points), std::move(params), std::move(values),
                           clamp_to_domain(x0)),
            down.stop, up.stop};
}

ActiveManifold build_active_manifold(const GradientField& field, const Point& x0, double step,
                                     std::size_t max_steps) {
    return build_active_manifold_detailed(field, x0, step, max_steps).manifold;
}

ActiveManifold build_active_manifold(const GradientField& field, const Point& x0) {
    return build_active_manifold(field, x0, field.spacing(), default_max_steps(field));
}

std::vector<std::pair<double, double>> manifold_to_pairs(const ActiveManifold& m) {
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) pairs.emplace_back(m.param(i), m.value(i));
    return pairs;
}

void write_manifold_csv(const ActiveManifold& m, std::ostream& out) {
    out << "dim=" << m.dimension() << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << format_double(m.param(i)) << ',' << format_double(m.value(i));
        for (Eigen::Index k = 0; k < m.point(i).size(); ++k) out << ',' << format_double(m.point(i)[k]);
        out << '\n';
    }
}

void write_manifold_csv(const ActiveManifold& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    write_manifold_csv(m, out);
    if (!out) throw UsageError("failed writing '" + path + "'");
}

ActiveManifold read_manifold_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("manifold CSV: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("dim=", 0) != 0) {
        throw FormatError("manifold CSV: header must be 'dim=<n>', got '" + line + "'");
    }
    const double dim_value = parse_double(std::string_view(line).substr(4), "manifold CSV header");
    if (dim_value < 1 || dim_value != static_cast<double>(static_cast<std::size_t>(dim_value))) {
        throw FormatError("manifold CSV: dim must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(dim_value);

    std::vector<Point> points;
    std::vector<double> params;
    std::vector<double> values;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        const std::string where = "manifold CSV row " + std::to_string(row);
        const auto fields = split(line, ',');
        if (fields.size() != n + 2) {
            throw FormatError(where + ": expected " + std::to_string(n + 2) + " fields, got " +
                              std::to_string(fields.size()));
        }
        params.push_back(parse_double(fields[0], where));
        values.push_back(parse_double(fields[1], where));
        Point p(static_cast<Eigen::Index>(n));
        for (std::size_t k = 0; k < n; ++k) p[k] = parse_double(fields[k + 2], where);
        points.push_back(std::move(p));
    }
    try {
        return ActiveManifold(std::move(points), std::move(params), std::move(values));
    } catch (const Error& e) {
        throw FormatError(std::string("manifold CSV: ") + e.what());
    }
}

ActiveManifold read_manifold_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open manifold file '" + path + "'");
    return read_manifold_csv(in);
}

}  // namespace amred
