#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "amred/error.hpp"
#include "amred/levelset.hpp"
#include "amred/surrogate.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace {

using namespace amred;

Point pt(std::initializer_list<double> xs) {
    Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

ActiveManifold line_1d() {
    std::vector<Point> pts;
    for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) pts.push_back(pt({x}));
    return ActiveManifold(pts, {0, 0.25, 0.5, 0.75, 1}, {-1, -0.5, 0, 0.5, 1});
}

// f(x, y) = x on the 0.05 grid; its manifold is the x axis.
struct XField {
    ScalarFunction fn = testing_support::affine_function(pt({1.0, 0.0}));
    GradientField field = build_gradient_field(fn, 0.05);
    ActiveManifold manifold = build_active_manifold(field, pt({0.0, 0.0}));
    TraversalConfig cfg = default_traversal_config(field, manifold);
};

const XField& x_field() {
    static const XField f;
    return f;
}

TEST(NearestVertexTest, Examples) {
    const auto m = line_1d();
    auto r = nearest_manifold_point(m, pt({0.5}));
    EXPECT_EQ(r.index, 3u);
    EXPECT_EQ(r.distance, 0.0);
    EXPECT_EQ(nearest_manifold_point(m, pt({0.6})).index, 3u);
    EXPECT_EQ(nearest_manifold_point(m, pt({0.25})).index, 2u);
    EXPECT_EQ(nearest_manifold_point(m, pt({-0.75})).index, 0u);
}

TEST(OrthogonalProject, Examples) {
    EXPECT_EQ(orthogonal_project(pt({1, 0}), pt({0, 1})), pt({1, 0}));
    EXPECT_EQ(orthogonal_project(pt({1, 1}), pt({0, 1})), pt({1, 0}));
    const Vector e = pt({0.6, 0.8});
    EXPECT_LE(orthogonal_project(e, e).norm(), 1e-15);
}

TEST(OrthogonalProject, Errors) {
    EXPECT_THROW(orthogonal_project(pt({1, 0}), pt({0, 0})), UndefinedDirection);
    EXPECT_THROW(orthogonal_project(pt({1, 0}), pt({0, 2})), UsageError);
}

TEST(OrthogonalProject, OrthogonalityProperty) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (int i = 0; i < 200; ++i) {
        const int n = 2 + i % 6;
        Vector u(n), e(n);
        for (int k = 0; k < n; ++k) {
            u[k] = g(rng);
            e[k] = g(rng);
        }
        e.normalize();
        const Vector v = orthogonal_project(u, e);
        EXPECT_LE(std::abs(v.dot(e)), 1e-12 * std::max(1.0, u.norm()));
        EXPECT_LE(v.norm(), u.norm() + 1e-12);
    }
}

TEST(SegmentParameterTest, Examples) {
    const auto r = segment_parameter(pt({0, 0}), pt({1, 0}), pt({0.5, 0.3}), pt({1, 0}));
    EXPECT_DOUBLE_EQ(r.t, 0.5);
    EXPECT_FALSE(r.clamped);
    const Point m_t = pt({0.5, 0.0});
    EXPECT_EQ((m_t - pt({0.5, 0.3})).dot(pt({1, 0})), 0.0);
    EXPECT_EQ(segment_parameter(pt({0.2, 0.4}), pt({1, 0}), pt({0.2, 0.4}), pt({0.6, 0.8})).t, 0.0);
    EXPECT_THROW(segment_parameter(pt({0, 0}), pt({0, 1}), pt({0.3, 0.3}), pt({1, 0})), SegmentTangent);
}

TEST(SegmentParameterTest, ClampsOutsideTheSegment) {
    const auto r = segment_parameter(pt({0, 0}), pt({1, 0}), pt({1.5, 0.3}), pt({1, 0}));
    EXPECT_EQ(r.t, 1.0);
    EXPECT_DOUBLE_EQ(r.raw_t, 1.5);
    EXPECT_TRUE(r.clamped);
}

TEST(SegmentParameterTest, HyperplaneResidualProperty) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        const int n = 2 + i % 4;
        Vector a(n), b(n), p(n), e(n);
        for (int k = 0; k < n; ++k) {
            a[k] = u(rng);
            b[k] = u(rng);
            p[k] = u(rng);
            e[k] = u(rng);
        }
        e.normalize();
        if (std::abs((b - a).dot(e)) < 1e-3) continue;
        const auto r = segment_parameter(a, b, p, e);
        const Vector m_t = a + r.raw_t * (b - a);
        EXPECT_LE(std::abs((m_t - p).dot(e)), 1e-10);
        ++checked;
    }
    EXPECT_GT(checked, 400);
}

TEST(Traverse, LinearLevelLinesGoStraightDown) {
    const auto& x = x_field();
    const Point p = pt({0.3, 0.7});
    const auto r = traverse_to_manifold(x.field, x.manifold, p, x.cfg);
    ASSERT_EQ(r.status, TraversalStatus::ok);

    std::vector<Point> polyline;
    for (std::size_t i = 0; i < x.manifold.size(); ++i) polyline.push_back(x.manifold.point(i));
    const auto crossings = oracle::level_crossings(polyline, x.fn.value, x.fn.value(p));
    ASSERT_FALSE(crossings.empty());
    EXPECT_LE((r.landing_point - crossings.front()).norm(), 2 * x.cfg.step);
    EXPECT_NEAR(r.landing_point[0], 0.3, 1e-12);
    EXPECT_NEAR(r.landing_point[1], 0.0, 1e-12);
    EXPECT_NEAR(r.s_star, 0.65, 1e-12);
    EXPECT_LE(r.drift, 1e-10);
    EXPECT_NEAR(r.final_point[0], 0.3, 1e-15);
    EXPECT_LT(r.final_point[1], x.cfg.hit_tolerance);
}

// Near the (-1,-1) corner the manifold of 3x + 4y slides along the bottom
// edge, so the nearest vertex can sit a few segments away from the crossing.
TEST(Traverse, LandsOnTheLevelLineNearTheCorner) {
    const auto fn = builtin_function("linear");
    const auto field = build_gradient_field(fn, 0.05);
    const auto m = build_active_manifold(field, pt({0, 0}));
    const auto cfg = default_traversal_config(field, m);
    std::vector<Point> polyline;
    for (std::size_t i = 0; i < m.size(); ++i) polyline.push_back(m.point(i));
    for (const Point& p : {pt({-0.906, -0.871}), pt({-0.95, -0.7}), pt({0.9, 0.85})}) {
        const auto r = traverse_to_manifold(field, m, p, cfg);
        ASSERT_TRUE(r.ok());
        EXPECT_FALSE(r.segment_clamped);
        EXPECT_NEAR(fn.value(r.landing_point), fn.value(p), 1e-12);
        const auto crossings = oracle::level_crossings(polyline, fn.value, fn.value(p));
        ASSERT_EQ(crossings.size(), 1u);
        EXPECT_LE((r.landing_point - crossings[0]).norm(), 1e-12);
    }
}

TEST(Traverse, ImmediateHit) {
    const auto& x = x_field();
    const auto r = traverse_to_manifold(x.field, x.manifold, pt({0.31, 0.01}), x.cfg);
    ASSERT_TRUE(r.ok());
    EXPECT_LE(r.iterations, 1u);
    EXPECT_NEAR(r.s_star, 0.655, 1e-12);
}

TEST(Traverse, F1StaysOnItsLevelSet) {
    const auto fn = builtin_function("f1");
    const auto field = build_gradient_field(fn, 0.05);
    const auto m = build_active_manifold(field, pt({0, 0}));
    const auto cfg = default_traversal_config(field, m);
    const Point p = pt({0.5, 0.25});
    const auto r = traverse_to_manifold(field, m, p, cfg);
    ASSERT_TRUE(r.ok());
    EXPECT_LE(std::abs(fn.value(r.landing_point) - fn.value(p)), cfg.drift_tolerance);
    EXPECT_LE(r.drift, cfg.drift_tolerance);
}

TEST(Traverse, OrthogonalStepsProperty) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const char* id : {"f1", "f2"}) {
        const auto fn = builtin_function(id);
        const auto field = build_gradient_field(fn, 0.05);
        const auto m = build_active_manifold(field, pt({0, 0}));
        const auto cfg = default_traversal_config(field, m);
        for (int i = 0; i < 100; ++i) {
            const Point p = pt({u(rng), u(rng)});
            const auto r = traverse_to_manifold(field, m, p, cfg);
            EXPECT_LE(r.max_orthogonality_residual, 1e-8) << id << " query " << i;
            const auto exact = traverse_to_manifold(field, m, p, cfg, &fn);
            EXPECT_LE(exact.max_orthogonality_residual, 1e-8) << id << " query " << i;
            if (r.ok()) {
                EXPECT_LE(r.drift, cfg.drift_tolerance);
                EXPECT_GE(r.s_star, 0.0);
                EXPECT_LE(r.s_star, 1.0);
            }
        }
    }
}

TEST(Traverse, Deterministic) {
    const auto field = build_gradient_field(builtin_function("f2"), 0.05);
    const auto m = build_active_manifold(field, pt({0, 0}));
    const auto cfg = default_traversal_config(field, m);
    const auto a = traverse_to_manifold(field, m, pt({-0.4, 0.77}), cfg);
    const auto b = traverse_to_manifold(field, m, pt({-0.4, 0.77}), cfg);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.s_star, b.s_star);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.final_point, b.final_point);
}

TEST(Traverse, StepBudgetExhausted) {
    const auto& x = x_field();
    TraversalConfig cfg = x.cfg;
    cfg.max_iters = 3;
    const auto r = traverse_to_manifold(x.field, x.manifold, pt({0.3, 0.9}), cfg);
    EXPECT_EQ(r.status, TraversalStatus::no_intersection);
    EXPECT_EQ(r.iterations, 3u);
}

TEST(Traverse, DriftBeyondTolerance) {
    const auto field = build_gradient_field(builtin_function("f1"), 0.05);
    const auto m = build_active_manifold(field, pt({0, 0}));
    TraversalConfig cfg = default_traversal_config(field, m);
    cfg.drift_tolerance = 1e-9;
    const auto r = traverse_to_manifold(field, m, pt({0.8, -0.6}), cfg);
    EXPECT_EQ(r.status, TraversalStatus::drift_exceeded);
    EXPECT_GT(r.drift, 1e-9);
}

TEST(Traverse, TangentStall) {
    const auto& x = x_field();
    // A vertical "manifold" at x = 0.9 runs along the level lines of f = x.
    std::vector<Point> pts{pt({0.9, -0.5}), pt({0.9, 0.0}), pt({0.9, 0.5})};
    const ActiveManifold vertical(pts, {0.0, 0.5, 1.0}, {0.9, 0.9, 0.9});
    const auto r = traverse_to_manifold(x.field, vertical, pt({0.0, 0.0}), x.cfg);
    EXPECT_EQ(r.status, TraversalStatus::tangent_stall);
}

TEST(Traverse, ZeroGradientRegion) {
    ScalarFunction ramp{"ramp", 2,
                        [](const Point& p) { return p[0] > 0 ? p[0] * p[0] : 0.0; }, {}};
    const auto field = build_gradient_field(ramp, 0.05);
    const auto m = build_active_manifold(field, pt({0.5, 0.0}));
    const auto r = traverse_to_manifold(field, m, pt({-0.5, 0.5}), default_traversal_config(field, m));
    EXPECT_EQ(r.status, TraversalStatus::zero_gradient);
}

TEST(Traverse, ConfigValidation) {
    const auto& x = x_field();
    TraversalConfig cfg = x.cfg;
    EXPECT_NO_THROW(validate(cfg, x.field));
    cfg.step = 0.1;
    EXPECT_THROW(validate(cfg, x.field), UsageError);
    cfg = x.cfg;
    cfg.hit_tolerance = 0.0;
    EXPECT_THROW(traverse_to_manifold(x.field, x.manifold, pt({0, 0.5}), cfg), UsageError);
    cfg = x.cfg;
    cfg.max_iters = 0;
    EXPECT_THROW(validate(cfg, x.field), UsageError);
    cfg = x.cfg;
    cfg.drift_tolerance = -1.0;
    EXPECT_THROW(validate(cfg, x.field), UsageError);
    EXPECT_THROW(traverse_to_manifold(x.field, x.manifold, pt({0, 0.5, 0}), x.cfg), DimensionMismatch);
}

TEST(Traverse, DefaultConfig) {
    const auto& x = x_field();
    EXPECT_EQ(x.cfg.hit_tolerance, 0.05);
    EXPECT_EQ(x.cfg.step, 0.0125);
    EXPECT_EQ(x.cfg.max_iters, 10u * 41u * 2u);
    EXPECT_NEAR(x.cfg.drift_tolerance, 0.2, 1e-12);
}

TEST(EstimateAt, ConstantTermAtZero) {
    PolynomialSurrogate model{2, {1.5, 2.0, -3.0}, 0.0, 1.0, 0.0};
    ProjectionResult r;
    r.s_star = 0.0;
    EXPECT_EQ(estimate_at(model, r), 1.5);
    EXPECT_EQ(r.estimate, 1.5);
    EXPECT_FALSE(r.extrapolated);
}

TEST(EstimateAt, LinearFunction) {
    const auto& x = x_field();
    const auto pairs = manifold_to_pairs(x.manifold);
    const auto model = fit_polynomial(pairs, 1);
    auto r = traverse_to_manifold(x.field, x.manifold, pt({0.3, 0.7}), x.cfg);
    ASSERT_TRUE(r.ok());
    EXPECT_NEAR(estimate_at(model, r), 0.3, 2 * x.cfg.step);
}

TEST(EstimateAt, F2VertexMatchesRecordedValue) {
    const auto field = build_gradient_field(builtin_function("f2"), 0.05);
    const auto m = build_active_manifold(field, pt({0, 0}));
    const auto model = fit_polynomial(manifold_to_pairs(m), 5);
    const auto cfg = default_traversal_config(field, m);
    double worst_fit = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        worst_fit = std::max(worst_fit, std::abs(evaluate(model, m.param(i)).value - m.value(i)));
    }
    for (std::size_t k : {std::size_t{3}, m.size() / 2, m.size() - 4}) {
        auto r = traverse_to_manifold(field, m, m.point(k), cfg);
        ASSERT_TRUE(r.ok());
        EXPECT_EQ(r.iterations, 0u);
        EXPECT_NEAR(r.s_star, m.param(k), 1e-12);
        EXPECT_LE(std::abs(estimate_at(model, r) - m.value(k)), model.residual_rms + worst_fit);
    }
}

}  // namespace
