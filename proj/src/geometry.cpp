#include "amred/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "amred/error.hpp"
#include "amred/text.hpp"

namespace amred {
namespace {

std::string describe(const Point& p) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (i) s += ", ";
        s += format_double(p[i]);
    }
    return s + ")";
}

void check_spacing(double spacing) {
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw UsageError("grid spacing must be positive, got " + format_double(spacing));
    }
    if (spacing > 2.0) {
        throw UsageError("grid spacing must not exceed 2, got " + format_double(spacing));
    }
}

std::size_t checked_grid_size(std::size_t dimension, std::size_t per_axis, std::size_t max_points) {
    if (dimension == 0) throw UsageError("dimension must be at least 1");
    std::size_t total = 1;
    for (std::size_t k = 0; k < dimension; ++k) {
        if (total > max_points / per_axis) {
            throw GridTooLarge("grid too large: " + std::to_string(per_axis) + "^" +
                               std::to_string(dimension) + " points exceeds the cap of " +
                               std::to_string(max_points));
        }
        total *= per_axis;
    }
    return total;
}

double lattice_coordinate(std::size_t k, double spacing) {
    return std::min(-1.0 + static_cast<double>(k) * spacing, 1.0);
}

}  // namespace

Point clamp_to_domain(const Point& p) { return p.cwiseMax(-1.0).cwiseMin(1.0); }

bool in_domain(const Point& p, double tolerance) {
    return (p.array() >= -1.0 - tolerance).all() && (p.array() <= 1.0 + tolerance).all();
}

GradientEvaluation eval_gradient(const ScalarFunction& fn, const Point& p, double h) {
    if (static_cast<std::size_t>(p.size()) != fn.dimension) {
        throw DimensionMismatch("point has " + std::to_string(p.size()) +
                                " coordinates, function '" + fn.name + "' takes " +
                                std::to_string(fn.dimension));
    }
    GradientEvaluation out;
    out.value = fn.value(p);
    if (fn.has_analytic_gradient()) {
        out.gradient = fn.gradient(p);
    } else {
        out.gradient.resize(p.size());
        Point probe = p;
        for (Eigen::Index i = 0; i < p.size(); ++i) {
            probe[i] = p[i] + h;
            const double up = fn.value(probe);
            probe[i] = p[i] - h;
            const double down = fn.value(probe);
            probe[i] = p[i];
            out.gradient[i] = (up - down) / (2.0 * h);
        }
    }
    if (!std::isfinite(out.value) || !out.gradient.allFinite()) {
        throw EvaluationFailure("evaluation failure: '" + fn.name + "' is not finite at " +
                                describe(p));
    }
    return out;
}

std::size_t points_per_axis(double spacing) {
    check_spacing(spacing);
    // The slack absorbs representation error when spacing divides 2 exactly.
    return static_cast<std::size_t>(std::floor(2.0 / spacing + 1e-9)) + 1;
}

std::vector<Point> build_grid(std::size_t dimension, double spacing, std::size_t max_points) {
    const std::size_t m = points_per_axis(spacing);
    const std::size_t total = checked_grid_size(dimension, m, max_points);
    std::vector<Point> points;
    points.reserve(total);
    std::vector<std::size_t> coords(dimension, 0);
    for (std::size_t i = 0; i < total; ++i) {
        Point p(static_cast<Eigen::Index>(dimension));
        for (std::size_t k = 0; k < dimension; ++k) p[k] = lattice_coordinate(coords[k], spacing);
        points.push_back(std::move(p));
        for (std::size_t k = dimension; k-- > 0;) {
            if (++coords[k] < m) break;
            coords[k] = 0;
        }
    }
    return points;
}

GradientField::GradientField(std::size_t dimension, double spacing, std::vector<double> values,
                             std::vector<double> raw_gradients)
    : dimension_(dimension),
      spacing_(spacing),
      per_axis_(amred::points_per_axis(spacing)),
      values_(std::move(values)),
      raw_(std::move(raw_gradients)) {
    const std::size_t expected =
        checked_grid_size(dimension, per_axis_, std::numeric_limits<std::size_t>::max());
    if (values_.size() != expected || raw_.size() != expected * dimension) {
        throw DimensionMismatch("gradient field needs " + std::to_string(expected) +
                                " samples, got " + std::to_string(values_.size()));
    }
    unit_.assign(raw_.size(), 0.0);
    zero_.assign(values_.size(), 0);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double* g = raw_.data() + i * dimension_;
        double sq = 0.0;
        for (std::size_t k = 0; k < dimension_; ++k) sq += g[k] * g[k];
        const double norm = std::sqrt(sq);
        max_gradient_norm_ = std::max(max_gradient_norm_, norm);
        if (norm <= kZeroGradientNorm) {
            zero_[i] = 1;
            continue;
        }
        for (std::size_t k = 0; k < dimension_; ++k) unit_[i * dimension_ + k] = g[k] / norm;
    }
}

Point GradientField::location(std::size_t index) const {
    Point p(static_cast<Eigen::Index>(dimension_));
    for (std::size_t k = dimension_; k-- > 0;) {
        p[k] = lattice_coordinate(index % per_axis_, spacing_);
        index /= per_axis_;
    }
    return p;
}

std::span<const double> GradientField::raw_gradient(std::size_t index) const {
    return {raw_.data() + index * dimension_, dimension_};
}

std::span<const double> GradientField::unit_gradient(std::size_t index) const {
    return {unit_.data() + index * dimension_, dimension_};
}

GradientSample GradientField::sample(std::size_t index) const {
    GradientSample s;
    s.location = location(index);
    s.value = values_[index];
    s.raw_gradient = Eigen::Map<const Vector>(raw_.data() + index * dimension_,
                                              static_cast<Eigen::Index>(dimension_));
    s.gradient = Eigen::Map<const Vector>(unit_.data() + index * dimension_,
                                          static_cast<Eigen::Index>(dimension_));
    s.zero_gradient = zero_[index] != 0;
    s.normalized = !s.zero_gradient;
    return s;
}

std::vector<std::size_t> GradientField::lattice_coords(std::size_t index) const {
    std::vector<std::size_t> coords(dimension_);
    for (std::size_t k = dimension_; k-- > 0;) {
        coords[k] = index % per_axis_;
        index /= per_axis_;
    }
    return coords;
}

std::size_t GradientField::index_of(std::span<const std::size_t> coords) const {
    std::size_t index = 0;
    for (std::size_t k = 0; k < dimension_; ++k) index = index * per_axis_ + coords[k];
    return index;
}

std::size_t GradientField::nearest_index(const Point& p) const {
    if (static_cast<std::size_t>(p.size()) != dimension_) {
        throw DimensionMismatch("point dimension " + std::to_string(p.size()) +
                                " does not match field dimension " + std::to_string(dimension_));
    }
    const auto last = static_cast<double>(per_axis_ - 1);
    std::size_t index = 0;
    for (std::size_t k = 0; k < dimension_; ++k) {
        const double x = std::clamp(p[static_cast<Eigen::Index>(k)], -1.0, 1.0);
        const double t = (x + 1.0) / spacing_;
        double lower = std::floor(t);
        if (t - lower > 0.5) lower += 1.0;
        const double snapped = std::clamp(lower, 0.0, last);
        index = index * per_axis_ + static_cast<std::size_t>(snapped);
    }
    return index;
}

std::size_t GradientField::zero_gradient_count() const {
    return static_cast<std::size_t>(std::count(zero_.begin(), zero_.end(), 1));
}

GradientField build_gradient_field(const ScalarFunction& fn, double spacing,
                                   std::size_t max_points) {
    const std::size_t n = fn.dimension;
    const std::size_t m = points_per_axis(spacing);
    const std::size_t total = checked_grid_size(n, m, max_points);

    std::vector<double> values(total);
    std::vector<double> raw(total * n);
    std::vector<std::size_t> coords(n, 0);
    Point p(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < total; ++i) {
        for (std::size_t k = 0; k < n; ++k) p[k] = lattice_coordinate(coords[k], spacing);
        GradientEvaluation ev;
        try {
            ev = eval_gradient(fn, p);
        } catch (const EvaluationFailure& e) {
            throw EvaluationFailure(std::string(e.what()) + " (grid index " + std::to_string(i) +
                                    ")");
        }
        values[i] = ev.value;
        std::copy(ev.gradient.data(), ev.gradient.data() + n, raw.begin() + i * n);
        for (std::size_t k = n; k-- > 0;) {
            if (++coords[k] < m) break;
            coords[k] = 0;
        }
    }
    return GradientField(n, spacing, std::move(values), std::move(raw));
}

GradientSample nearest_grid_point(const GradientField& field, const Point& p) {
    return field.sample(field.nearest_index(p));
}

void write_gradient_field_csv(const GradientField& field, std::ostream& out) {
    const std::size_t n = field.dimension();
    out << "dim=" << n << ",spacing=" << format_double(field.spacing()) << '\n';
    std::string line;
    for (std::size_t i = 0; i < field.size(); ++i) {
        line.clear();
        const Point loc = field.location(i);
        for (std::size_t k = 0; k < n; ++k) {
            line += format_double(loc[k]);
            line += ',';
        }
        for (double g : field.raw_gradient(i)) {
            line += format_double(g);
            line += ',';
        }
        line += format_double(field.value(i));
        out << line << '\n';
    }
}

void write_gradient_field_csv(const GradientField& field, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    write_gradient_field_csv(field, out);
    if (!out) throw UsageError("failed writing '" + path + "'");
}

GradientField read_gradient_field_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("gradient CSV: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = split(line, ',');
    if (header.size() != 2 || header[0].rfind("dim=", 0) != 0 ||
        header[1].rfind("spacing=", 0) != 0) {
        throw FormatError("gradient CSV: header must be 'dim=<n>,spacing=<eps>', got '" + line +
                          "'");
    }
    const double dim_value = parse_double(header[0].substr(4), "gradient CSV header dim");
    if (dim_value < 1 || dim_value != std::floor(dim_value)) {
        throw FormatError("gradient CSV: dim must be a positive integer");
    }
    const auto n = static_cast<std::size_t>(dim_value);
    const double spacing = parse_double(header[1].substr(8), "gradient CSV header spacing");
    std::size_t m = 0;
    std::size_t expected = 0;
    try {
        m = points_per_axis(spacing);
        expected = checked_grid_size(n, m, kDefaultMaxGridPoints);
    } catch (const UsageError& e) {
        throw FormatError(std::string("gradient CSV: ") + e.what());
    }

    std::vector<double> values;
    std::vector<double> raw;
    values.reserve(expected);
    raw.reserve(expected * n);
    std::vector<std::size_t> coords(n, 0);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = "gradient CSV row " + std::to_string(row + 1);
        const auto fields = split(line, ',');
        if (fields.size() != 2 * n + 1) {
            throw FormatError(where + ": expected " + std::to_string(2 * n + 1) + " fields for dim=" +
                              std::to_string(n) + ", got " + std::to_string(fields.size()));
        }
        if (row >= expected) {
            throw FormatError("gradient CSV: more than the expected " + std::to_string(expected) +
                              " rows");
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double x = parse_double(fields[k], where);
            const double want = lattice_coordinate(coords[k], spacing);
            if (std::abs(x - want) > 1e-9) {
                throw FormatError(where + ": coordinate " + fields[k] +
                                  " is not the expected lattice location " + format_double(want));
            }
        }
        for (std::size_t k = 0; k < n; ++k) raw.push_back(parse_double(fields[n + k], where));
        values.push_back(parse_double(fields[2 * n], where));
        ++row;
        for (std::size_t k = n; k-- > 0;) {
            if (++coords[k] < m) break;
            coords[k] = 0;
        }
    }
    if (row != expected) {
        throw FormatError("gradient CSV: expected " + std::to_string(expected) + " rows, got " +
                          std::to_string(row));
    }
    return GradientField(n, spacing, std::move(values), std::move(raw));
}

GradientField read_gradient_field_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open gradient file '" + path + "'");
    return read_gradient_field_csv(in);
}

}  // namespace amred
