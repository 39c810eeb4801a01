#include "amred/levelset.hpp"

#include <algorithm>
#include <cmath>

#include "amred/error.hpp"

namespace amred {

TraversalConfig default_traversal_config(const GradientField& field,
                                         const ActiveManifold& manifold) {
    TraversalConfig cfg;
    cfg.hit_tolerance = field.spacing();
    cfg.step = field.spacing() / 4.0;
    cfg.max_iters = 10 * field.points_per_axis() * field.dimension();
    cfg.drift_tolerance = 0.1 * (manifold.max_value() - manifold.min_value());
    if (!(cfg.drift_tolerance > 0.0)) cfg.drift_tolerance = 1e-12;
    return cfg;
}

void validate(const TraversalConfig& cfg, const GradientField& field) {
    if (!(cfg.hit_tolerance > 0.0)) throw UsageError("traversal hit tolerance must be positive");
    if (!(cfg.step > 0.0)) throw UsageError("traversal step must be positive");
    if (cfg.step > field.spacing()) {
        throw UsageError("traversal step must not exceed the grid spacing");
    }
    if (cfg.max_iters == 0) throw UsageError("traversal max_iters must be positive");
    if (!(cfg.drift_tolerance > 0.0)) throw UsageError("drift tolerance must be positive");
}

const char* to_string(TraversalStatus status) {
    switch (status) {
        case TraversalStatus::ok: return "ok";
        case TraversalStatus::no_intersection: return "no_intersection";
        case TraversalStatus::tangent_stall: return "tangent_stall";
        case TraversalStatus::drift_exceeded: return "drift_exceeded";
        case TraversalStatus::boundary_exit: return "boundary_exit";
        case TraversalStatus::zero_gradient: return "zero_gradient";
    }
    return "unknown";
}

NearestVertex nearest_manifold_point(const ActiveManifold& manifold, const Point& p) {
    NearestVertex best{0, (manifold.point(0) - p).squaredNorm()};
    for (std::size_t i = 1; i < manifold.size(); ++i) {
        const double d = (manifold.point(i) - p).squaredNorm();
        if (d < best.distance) best = {i, d};
    }
    best.distance = std::sqrt(best.distance);
    return best;
}

Vector orthogonal_project(const Vector& u, const Vector& unit_gradient) {
    const double norm = unit_gradient.norm();
    if (norm <= kZeroGradientNorm) {
        throw UndefinedDirection("undefined gradient direction: zero gradient");
    }
    if (std::abs(norm - 1.0) > 1e-10) {
        throw UsageError("orthogonal_project expects a unit gradient");
    }
    return u - u.dot(unit_gradient) * unit_gradient;
}

SegmentParameter segment_parameter(const Point& m_i, const Point& m_next, const Point& p,
                                   const Vector& unit_gradient) {
    const double denominator = (m_next - m_i).dot(unit_gradient);
    if (std::abs(denominator) < 1e-12) {
        throw SegmentTangent("segment tangent to level set");
    }
    SegmentParameter out;
    out.raw_t = (p - m_i).dot(unit_gradient) / denominator;
    out.t = std::clamp(out.raw_t, 0.0, 1.0);
    out.clamped = out.t != out.raw_t;
    return out;
}

namespace {

// Unit gradient used to steer at p; zero vector when undefined.
Vector steering_gradient(const GradientField& field, std::size_t sample, const Point& p,
                         const ScalarFunction* exact) {
    if (exact != nullptr) {
        const Vector g = eval_gradient(*exact, p).gradient;
        const double norm = g.norm();
        return norm <= kZeroGradientNorm ? Vector::Zero(g.size()) : Vector(g / norm);
    }
    return Eigen::Map<const Vector>(field.unit_gradient(sample).data(),
                                    static_cast<Eigen::Index>(field.dimension()));
}

// Distance from p to the segment [a, b].
double segment_distance(const Point& a, const Point& b, const Point& p) {
    const Vector d = b - a;
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    return (a + t * d - p).norm();
}

void land(const ActiveManifold& manifold, std::size_t vertex, const Point& p, const Vector& e0,
          double reach, ProjectionResult& out) {
    // Pair the vertex with whichever neighbour is closer to p.
    std::size_t other = vertex;
    double other_distance = 0.0;
    for (const std::size_t candidate : {vertex - 1, vertex + 1}) {
        if (candidate >= manifold.size()) continue;  // wraps for vertex == 0
        const double d = (manifold.point(candidate) - p).norm();
        if (other == vertex || d < other_distance) {
            other = candidate;
            other_distance = d;
        }
    }
    std::size_t lo = std::min(vertex, other);

    double t = vertex == lo ? 0.0 : 1.0;
    bool clamped = false;
    if (e0.norm() > kZeroGradientNorm) {
        // March along the polyline while the crossing lies beyond the current
        // segment, staying within `reach` of p.
        double heading = 0.0;
        std::size_t seg = lo;
        while (true) {
            SegmentParameter sp;
            try {
                sp = segment_parameter(manifold.point(seg), manifold.point(seg + 1), p, e0);
            } catch (const SegmentTangent&) {
                // The segment runs along the level set; keep the current landing.
                break;
            }
            const double dir = sp.raw_t > 1.0 ? 1.0 : (sp.raw_t < 0.0 ? -1.0 : 0.0);
            if (dir == -heading && dir != 0.0) break;
            lo = seg;
            t = sp.t;
            clamped = sp.clamped;
            if (dir == 0.0) break;
            heading = dir;
            if (dir > 0.0 ? seg + 2 >= manifold.size() : seg == 0) break;
            const std::size_t next = dir > 0.0 ? seg + 1 : seg - 1;
            if (segment_distance(manifold.point(next), manifold.point(next + 1), p) > reach) break;
            seg = next;
        }
    }
    const std::size_t hi = lo + 1 < manifold.size() ? lo + 1 : lo;
    out.segment = lo;
    out.segment_t = t;
    out.segment_clamped = clamped;
    out.s_star = manifold.param(lo) + t * (manifold.param(hi) - manifold.param(lo));
    out.landing_point = manifold.point(lo) + t * (manifold.point(hi) - manifold.point(lo));
    out.status = TraversalStatus::ok;
}

}  // namespace

ProjectionResult traverse_to_manifold(const GradientField& field, const ActiveManifold& manifold,
                                      const Point& p, const TraversalConfig& cfg,
                                      const ScalarFunction* exact_gradient) {
    validate(cfg, field);
    if (static_cast<std::size_t>(p.size()) != field.dimension() ||
        manifold.dimension() != field.dimension()) {
        throw DimensionMismatch("query, field and manifold dimensions must agree");
    }

    ProjectionResult out;
    out.query = p;
    Point walker = clamp_to_domain(p);
    const double start_value = field.value(field.nearest_index(walker));

    for (std::size_t k = 0;; ++k) {
        const std::size_t sample = field.nearest_index(walker);
        out.drift = std::max(out.drift, std::abs(field.value(sample) - start_value));
        out.final_point = walker;
        if (out.drift > cfg.drift_tolerance) {
            out.status = TraversalStatus::drift_exceeded;
            return out;
        }

        const Vector e0 = steering_gradient(field, sample, walker, exact_gradient);
        const NearestVertex nearest = nearest_manifold_point(manifold, walker);
        if (nearest.distance < cfg.hit_tolerance) {
            land(manifold, nearest.index, walker, e0, 2.0 * cfg.hit_tolerance, out);
            return out;
        }
        if (k == cfg.max_iters) {
            out.status = TraversalStatus::no_intersection;
            return out;
        }
        if (e0.norm() <= kZeroGradientNorm) {
            out.status = TraversalStatus::zero_gradient;
            return out;
        }

        const Vector u = manifold.point(nearest.index) - walker;
        const Vector v = orthogonal_project(u, e0);
        const double v_norm = v.norm();
        if (v_norm <= 1e-12 * std::max(1.0, u.norm())) {
            out.status = TraversalStatus::tangent_stall;
            return out;
        }
        const Vector direction = v / v_norm;
        out.max_orthogonality_residual =
            std::max(out.max_orthogonality_residual, std::abs(direction.dot(e0)));

        Point next = clamp_to_domain(walker + cfg.step * direction);
        if ((next - walker).norm() < cfg.step / 10.0) {
            out.status = TraversalStatus::boundary_exit;
            return out;
        }
        walker = std::move(next);
        ++out.iterations;
    }
}

double estimate_at(const PolynomialSurrogate& model, ProjectionResult& result) {
    const SurrogateValue v = evaluate(model, result.s_star);
    result.estimate = v.value;
    result.extrapolated = v.extrapolated;
    return v.value;
}

}  // namespace amred
