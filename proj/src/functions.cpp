#include <cmath>

#include "amred/error.hpp"
#include "amred/geometry.hpp"

namespace amred {
namespace {

// f3 stands in for a 5-input black-box model: the two-input f2 extended
// with a dominant linear term on the last coordinate.
constexpr double kF3Cubic[5] = {1.0, 1.0, 1.0, 1.0, 1.0};
constexpr double kF3Linear[5] = {0.2, 0.2, 0.2, 0.2, 0.6};

ScalarFunction make_f1() {
    ScalarFunction fn;
    fn.name = "f1";
    fn.dimension = 2;
    fn.value = [](const Point& p) { return std::exp(p[1] - p[0] * p[0]); };
    fn.gradient = [](const Point& p) {
        const double v = std::exp(p[1] - p[0] * p[0]);
        Vector g(2);
        g << -2.0 * p[0] * v, v;
        return g;
    };
    return fn;
}

ScalarFunction make_f2() {
    ScalarFunction fn;
    fn.name = "f2";
    fn.dimension = 2;
    fn.value = [](const Point& p) {
        return p[0] * p[0] * p[0] + p[1] * p[1] * p[1] + 0.2 * p[0] + 0.6 * p[1];
    };
    fn.gradient = [](const Point& p) {
        Vector g(2);
        g << 3.0 * p[0] * p[0] + 0.2, 3.0 * p[1] * p[1] + 0.6;
        return g;
    };
    return fn;
}

ScalarFunction make_f3() {
    ScalarFunction fn;
    fn.name = "f3";
    fn.dimension = 5;
    fn.value = [](const Point& p) {
        double sum = 0.0;
        for (int i = 0; i < 5; ++i) sum += kF3Cubic[i] * p[i] * p[i] * p[i] + kF3Linear[i] * p[i];
        return sum;
    };
    fn.gradient = [](const Point& p) {
        Vector g(5);
        for (int i = 0; i < 5; ++i) g[i] = 3.0 * kF3Cubic[i] * p[i] * p[i] + kF3Linear[i];
        return g;
    };
    return fn;
}

ScalarFunction make_linear() {
    ScalarFunction fn;
    fn.name = "linear";
    fn.dimension = 2;
    fn.value = [](const Point& p) { return 3.0 * p[0] + 4.0 * p[1]; };
    fn.gradient = [](const Point&) {
        Vector g(2);
        g << 3.0, 4.0;
        return g;
    };
    return fn;
}

}  // namespace

std::vector<std::string> builtin_function_ids() { return {"f1", "f2", "f3", "linear"}; }

ScalarFunction builtin_function(const std::string& id) {
    if (id == "f1") return make_f1();
    if (id == "f2") return make_f2();
    if (id == "f3") return make_f3();
    if (id == "linear") return make_linear();
    throw UsageError("unknown function id '" + id + "' (expected f1, f2, f3 or linear)");
}

}  // namespace amred
