#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amred/geometry.hpp"

namespace amred {

enum class TraceDirection { ascent, descent };

enum class TraceStop {
    zero_gradient,   ///< nearest sample has no usable gradient
    short_step,      ///< the clamped step moved less than a tenth of the step length
    max_steps,
    loop,            ///< the next point revisits one of the last three
    value_reversal,  ///< the next sample value runs against the trace direction
};

const char* to_string(TraceStop stop);

struct TraceResult {
    /// Visited points, starting with the seed.
    std::vector<Point> points;
    TraceStop stop = TraceStop::max_steps;
};

/// Default step budget for one trace: ten traversals of the lattice per axis.
std::size_t default_max_steps(const GradientField& field);

/// Discrete steepest ascent (or descent) over the snapped unit gradient field:
///   p_{k+1} = clamp(p_k +/- step * g(nearest(p_k))).
/// Throws StalledAtStart when the seed's nearest sample is zero-gradient.
TraceResult trace_path(const GradientField& field, const Point& x0, TraceDirection direction,
                       double step, std::size_t max_steps);

/// A polyline running from the descent terminus (first) to the ascent
/// terminus (last), with parameters S and sample values Z.
///
/// Construction enforces: |points| = |S| = |Z| >= 2, S strictly increasing
/// from exactly 0 to exactly 1, Z non-decreasing, consecutive points distinct
/// and all points inside [-1,1]^n.
class ActiveManifold {
public:
    ActiveManifold(std::vector<Point> points, std::vector<double> params,
                   std::vector<double> values, std::optional<Point> seed_point = std::nullopt);

    std::size_t size() const { return points_.size(); }
    std::size_t dimension() const { return static_cast<std::size_t>(points_.front().size()); }
    const std::vector<Point>& points() const { return points_; }
    const std::vector<double>& params() const { return params_; }
    const std::vector<double>& values() const { return values_; }
    const std::optional<Point>& seed_point() const { return seed_; }

    const Point& point(std::size_t i) const { return points_[i]; }
    double param(std::size_t i) const { return params_[i]; }
    double value(std::size_t i) const { return values_[i]; }

    double min_value() const { return values_.front(); }
    double max_value() const { return values_.back(); }

private:
    std::vector<Point> points_;
    std::vector<double> params_;
    std::vector<double> values_;
    std::optional<Point> seed_;
};

struct ManifoldBuild {
    ActiveManifold manifold;
    TraceStop descent_stop;
    TraceStop ascent_stop;
};

/// Joins the reversed descent trace and the ascent trace from `x0`; S[k] is
/// k / (size - 1) and Z[k] is the field value at the sample nearest to
/// point k.  Throws DegenerateManifold when fewer than two points result.
ManifoldBuild build_active_manifold_detailed(const GradientField& field, const Point& x0,
                                             double step, std::size_t max_steps);

ActiveManifold build_active_manifold(const GradientField& field, const Point& x0, double step,
                                     std::size_t max_steps);

/// Step and budget default to the field spacing and default_max_steps().
ActiveManifold build_active_manifold(const GradientField& field, const Point& x0);

std::vector<std::pair<double, double>> manifold_to_pairs(const ActiveManifold& m);

/// Manifold CSV: header `dim=<n>` then rows `s,z,x1,...,xn` in ascending s.
void write_manifold_csv(const ActiveManifold& m, std::ostream& out);
void write_manifold_csv(const ActiveManifold& m, const std::string& path);
ActiveManifold read_manifold_csv(std::istream& in);
ActiveManifold read_manifold_csv(const std::string& path);

}  // namespace amred
