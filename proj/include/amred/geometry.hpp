#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace amred {

using Vector = Eigen::VectorXd;
/// A location in the study domain [-1, 1]^n.
using Point = Eigen::VectorXd;

inline constexpr double kDomainTolerance = 1e-12;
/// Gradients with a Euclidean norm at or below this are flagged, never normalized.
inline constexpr double kZeroGradientNorm = 1e-14;
inline constexpr double kFiniteDifferenceStep = 1e-5;
inline constexpr std::size_t kDefaultMaxGridPoints = std::size_t{1} << 24;

/// Component-wise clamp onto the hypercube [-1, 1]^n.
Point clamp_to_domain(const Point& p);

bool in_domain(const Point& p, double tolerance = kDomainTolerance);

/// A scalar model f : [-1,1]^n -> R.  When `gradient` is empty, derivatives
/// come from central finite differences.
struct ScalarFunction {
    std::string name;
    std::size_t dimension = 0;
    std::function<double(const Point&)> value;
    std::function<Vector(const Point&)> gradient;

    bool has_analytic_gradient() const { return static_cast<bool>(gradient); }
};

/// Builtin test functions:
///   f1(x, y)    = exp(y - x^2)
///   f2(x, y)    = x^3 + y^3 + 0.2 x + 0.6 y
///   f3(x1..x5)  = sum x_i^3 + 0.2 (x1 + x2 + x3 + x4) + 0.6 x5
///   linear(x,y) = 3x + 4y
/// Throws UsageError for an unknown id.
ScalarFunction builtin_function(const std::string& id);
std::vector<std::string> builtin_function_ids();

struct GradientEvaluation {
    double value = 0.0;
    Vector gradient;
};

/// Value and gradient at `p`; analytic when available, otherwise central
/// differences with step `h`.  Throws EvaluationFailure on non-finite output.
GradientEvaluation eval_gradient(const ScalarFunction& fn, const Point& p,
                                 double h = kFiniteDifferenceStep);

/// Number of lattice points per axis for spacing `eps` on [-1, 1].
std::size_t points_per_axis(double spacing);

/// All lattice points -1 + k*spacing (k = 0..floor(2/spacing)) of [-1,1]^n in
/// row-major order, last axis fastest.
std::vector<Point> build_grid(std::size_t dimension, double spacing,
                              std::size_t max_points = kDefaultMaxGridPoints);

struct GradientSample {
    Point location;
    /// Unit gradient when `normalized`, zero vector when `zero_gradient`.
    Vector gradient;
    Vector raw_gradient;
    double value = 0.0;
    bool normalized = false;
    bool zero_gradient = false;
};

/// Dense lattice of function values and gradients over [-1,1]^n.  Immutable
/// after construction.  Raw gradients are kept alongside the unit ones.
class GradientField {
public:
    /// `values` has one entry per lattice point and `raw_gradients` holds
    /// dimension entries per point, both in lattice order.
    GradientField(std::size_t dimension, double spacing, std::vector<double> values,
                  std::vector<double> raw_gradients);

    std::size_t dimension() const { return dimension_; }
    double spacing() const { return spacing_; }
    std::size_t points_per_axis() const { return per_axis_; }
    std::size_t size() const { return values_.size(); }

    Point location(std::size_t index) const;
    double value(std::size_t index) const { return values_[index]; }
    std::span<const double> raw_gradient(std::size_t index) const;
    std::span<const double> unit_gradient(std::size_t index) const;
    bool is_zero_gradient(std::size_t index) const { return zero_[index] != 0; }
    GradientSample sample(std::size_t index) const;

    std::vector<std::size_t> lattice_coords(std::size_t index) const;
    std::size_t index_of(std::span<const std::size_t> coords) const;

    /// Lattice index nearest to `p` (clamped first), by per-axis rounding with
    /// ties going to the smaller index.
    std::size_t nearest_index(const Point& p) const;

    double max_gradient_norm() const { return max_gradient_norm_; }
    std::size_t zero_gradient_count() const;

private:
    std::size_t dimension_;
    double spacing_;
    std::size_t per_axis_;
    std::vector<double> values_;
    std::vector<double> raw_;
    std::vector<double> unit_;
    std::vector<unsigned char> zero_;
    double max_gradient_norm_ = 0.0;
};

GradientField build_gradient_field(const ScalarFunction& fn, double spacing,
                                   std::size_t max_points = kDefaultMaxGridPoints);

GradientSample nearest_grid_point(const GradientField& field, const Point& p);

/// Gradient-field CSV: header `dim=<n>,spacing=<eps>` then one row
/// `x1,...,xn,g1,...,gn,f` per lattice point in lattice order.  Gradients are
/// the raw (unnormalized) ones.
void write_gradient_field_csv(const GradientField& field, std::ostream& out);
void write_gradient_field_csv(const GradientField& field, const std::string& path);
/// Throws FormatError on a malformed header or row, a dimension mismatch, a
/// wrong row count or a location that is not the expected lattice point.
GradientField read_gradient_field_csv(std::istream& in);
GradientField read_gradient_field_csv(const std::string& path);

}  // namespace amred
