#pragma once

#include <cstddef>

#include "amred/geometry.hpp"
#include "amred/manifold.hpp"
#include "amred/surrogate.hpp"

namespace amred {

struct TraversalConfig {
    /// Landing happens once the walker is closer than this to a manifold vertex.
    double hit_tolerance = 0.0;
    /// Length of each step along the level set.
    double step = 0.0;
    std::size_t max_iters = 0;
    /// Largest tolerated |f(p_k) - f(p_0)| measured on field samples.
    double drift_tolerance = 0.0;
};

/// hit_tolerance = spacing, step = spacing / 4,
/// max_iters = 10 * (points per axis) * n, drift_tolerance = 0.1 * (max Z - min Z).
TraversalConfig default_traversal_config(const GradientField& field, const ActiveManifold& manifold);

/// Throws UsageError unless every field is positive and step <= field spacing.
void validate(const TraversalConfig& cfg, const GradientField& field);

enum class TraversalStatus {
    ok,
    no_intersection,  ///< max_iters exhausted without reaching the manifold
    tangent_stall,    ///< the direction toward the manifold is parallel to the gradient
    drift_exceeded,
    boundary_exit,    ///< the level set leaves the hypercube before meeting the manifold
    zero_gradient,    ///< no gradient direction at the current point
};

const char* to_string(TraversalStatus status);

struct ProjectionResult {
    Point query;
    TraversalStatus status = TraversalStatus::no_intersection;
    /// Manifold parameter of the landing point, in [0, 1].
    double s_star = 0.0;
    Point landing_point;
    /// Last walker position on the level set.
    Point final_point;
    /// Filled in by estimate_at().
    double estimate = 0.0;
    bool extrapolated = false;
    std::size_t iterations = 0;
    double drift = 0.0;
    /// Landing segment [segment, segment + 1] and the parameter within it.
    std::size_t segment = 0;
    double segment_t = 0.0;
    bool segment_clamped = false;
    /// max over steps of |<v_hat, e0>|.
    double max_orthogonality_residual = 0.0;

    bool ok() const { return status == TraversalStatus::ok; }
};

struct NearestVertex {
    std::size_t index = 0;
    double distance = 0.0;
};

/// Linear scan over the vertices; ties go to the smaller index.
NearestVertex nearest_manifold_point(const ActiveManifold& manifold, const Point& p);

/// u - <u, e0> e0 for a unit e0.  Throws UndefinedDirection for a zero e0 and
/// UsageError for one that is not unit length within 1e-10.
Vector orthogonal_project(const Vector& u, const Vector& unit_gradient);

struct SegmentParameter {
    /// Crossing parameter clamped to [0, 1].
    double t = 0.0;
    double raw_t = 0.0;
    bool clamped = false;
};

/// Parameter t of M(t) = m_i + t (m_next - m_i) where the segment crosses the
/// hyperplane through p orthogonal to e0:
///   t = <p - m_i, e0> / <m_next - m_i, e0>.
/// Throws SegmentTangent when |<m_next - m_i, e0>| < 1e-12.
SegmentParameter segment_parameter(const Point& m_i, const Point& m_next, const Point& p,
                                   const Vector& unit_gradient);

/// Walks from p along directions orthogonal to the local gradient, steering
/// toward the nearest manifold vertex, until it lands within hit_tolerance.
/// The gradient comes from the nearest field sample, or from
/// `exact_gradient` when supplied.  Failures are reported through `status`.
ProjectionResult traverse_to_manifold(const GradientField& field, const ActiveManifold& manifold,
                                      const Point& p, const TraversalConfig& cfg,
                                      const ScalarFunction* exact_gradient = nullptr);

/// Evaluates the surrogate at the landing parameter and stores it in `result`.
double estimate_at(const PolynomialSurrogate& model, ProjectionResult& result);

}  // namespace amred
