#include "amred/active_subspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "amred/error.hpp"

namespace amred {

Eigen::MatrixXd compute_c_matrix(std::span<const Vector> gradients) {
    if (gradients.empty()) throw UsageError("C matrix needs at least one gradient");
    const Eigen::Index n = gradients.front().size();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (const Vector& g : gradients) {
        if (g.size() != n) throw DimensionMismatch("gradients differ in dimension");
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i; j < n; ++j) c(i, j) += g[i] * g[j];
    }
    c /= static_cast<double>(gradients.size());
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < i; ++j) c(i, j) = c(j, i);
    return c;
}

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double sq = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j) sq += a(i, j) * a(i, j);
    return std::sqrt(sq);
}

}  // namespace

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& input) {
    if (input.rows() != input.cols() || input.rows() == 0) {
        throw DimensionMismatch("symmetric_eigen needs a non-empty square matrix");
    }
    const Eigen::Index n = input.rows();
    const double scale = std::max(1.0, input.cwiseAbs().maxCoeff());
    if ((input - input.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw NotSymmetric("matrix is not symmetric");
    }

    Eigen::MatrixXd a = 0.5 * (input + input.transpose());
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double threshold = 1e-12 * a.norm();

    int sweeps = 0;
    while (sweeps < kMaxJacobiSweeps && off_diagonal_norm(a) > threshold) {
        ++sweeps;
        for (Eigen::Index p = 0; p < n - 1; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double x = a(k, p);
                    const double y = a(k, q);
                    a(k, p) = c * x - s * y;
                    a(k, q) = s * x + c * y;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double x = a(p, k);
                    const double y = a(q, k);
                    a(p, k) = c * x - s * y;
                    a(q, k) = s * x + c * y;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double x = v(k, p);
                    const double y = v(k, q);
                    v(k, p) = c * x - s * y;
                    v(k, q) = s * x + c * y;
                }
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

    SymmetricEigen out;
    out.sweeps = sweeps;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        const Eigen::Index src = order[static_cast<std::size_t>(col)];
        out.values[col] = a(src, src);
        Vector w = v.col(src);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (std::abs(w[k]) > 1e-12) {
                if (w[k] < 0.0) w = -w;
                break;
            }
        }
        out.vectors.col(col) = w;
    }
    return out;
}

ActiveSubspaceModel build_as_model(std::span<const Point> locations,
                                   std::span<const Vector> raw_gradients,
                                   std::span<const double> values, std::size_t degree) {
    if (locations.size() != raw_gradients.size() || locations.size() != values.size()) {
        throw DimensionMismatch("locations, gradients and values differ in length");
    }
    if (locations.size() < degree + 1) {
        throw UsageError("active subspace fit needs at least degree + 1 samples");
    }
    ActiveSubspaceModel model;
    model.c_matrix = compute_c_matrix(raw_gradients);
    const SymmetricEigen eig = symmetric_eigen(model.c_matrix);
    model.eigenvalues = eig.values;
    model.eigenvectors = eig.vectors;
    model.active_direction = eig.vectors.col(0);

    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(locations.size());
    for (std::size_t i = 0; i < locations.size(); ++i) {
        pairs.emplace_back(locations[i].dot(model.active_direction), values[i]);
    }
    model.surrogate = fit_polynomial(pairs, degree);
    return model;
}

ActiveSubspaceModel build_as_model(const GradientField& field, std::size_t degree) {
    std::vector<Point> locations;
    std::vector<Vector> gradients;
    std::vector<double> values;
    locations.reserve(field.size());
    gradients.reserve(field.size());
    values.reserve(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        locations.push_back(field.location(i));
        const auto g = field.raw_gradient(i);
        gradients.emplace_back(
            Eigen::Map<const Vector>(g.data(), static_cast<Eigen::Index>(g.size())));
        values.push_back(field.value(i));
    }
    return build_as_model(locations, gradients, values, degree);
}

SurrogateValue as_estimate(const ActiveSubspaceModel& model, const Point& p) {
    if (p.size() != model.active_direction.size()) {
        throw DimensionMismatch("query dimension does not match the active subspace model");
    }
    return evaluate(model.surrogate, p.dot(model.active_direction));
}

std::string to_json_line(const ActiveSubspaceModel& model) {
    nlohmann::json vectors = nlohmann::json::array();
    for (Eigen::Index c = 0; c < model.eigenvectors.cols(); ++c) {
        const Vector col = model.eigenvectors.col(c);
        vectors.push_back(std::vector<double>(col.data(), col.data() + col.size()));
    }
    const nlohmann::json j = {
        {"eigenvalues",
         std::vector<double>(model.eigenvalues.data(),
                             model.eigenvalues.data() + model.eigenvalues.size())},
        {"eigenvectors", vectors},
        {"surrogate", nlohmann::json::parse(to_json_line(model.surrogate))}};
    return j.dump();
}

}  // namespace amred
