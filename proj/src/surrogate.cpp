#include "amred/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "amred/error.hpp"

namespace amred {

PolynomialSurrogate fit_polynomial(std::span<const std::pair<double, double>> pairs,
                                   std::size_t degree) {
    if (degree > kMaxSurrogateDegree) {
        throw DegreeTooLarge("degree too large: " + std::to_string(degree) + " exceeds " +
                             std::to_string(kMaxSurrogateDegree));
    }
    const std::size_t cols = degree + 1;
    if (pairs.size() < cols) {
        throw UsageError("a degree " + std::to_string(degree) + " fit needs at least " +
                         std::to_string(cols) + " pairs, got " + std::to_string(pairs.size()));
    }

    std::vector<double> abscissae;
    abscissae.reserve(pairs.size());
    for (const auto& [s, z] : pairs) {
        if (!std::isfinite(s) || !std::isfinite(z)) throw UsageError("non-finite training pair");
        abscissae.push_back(s);
    }
    std::sort(abscissae.begin(), abscissae.end());
    const auto distinct = static_cast<std::size_t>(
        std::unique(abscissae.begin(), abscissae.end()) - abscissae.begin());
    if (distinct < cols) {
        throw DegenerateAbscissae("degenerate abscissae: " + std::to_string(distinct) +
                                  " distinct values cannot determine a degree " +
                                  std::to_string(degree) + " polynomial");
    }

    const auto rows = static_cast<Eigen::Index>(pairs.size());
    Eigen::MatrixXd vandermonde(rows, static_cast<Eigen::Index>(cols));
    Eigen::VectorXd rhs(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto [s, z] = pairs[static_cast<std::size_t>(i)];
        double power = 1.0;
        for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(cols); ++j) {
            vandermonde(i, j) = power;
            power *= s;
        }
        rhs[i] = z;
    }
    const Eigen::VectorXd coef = vandermonde.householderQr().solve(rhs);

    PolynomialSurrogate model;
    model.degree = degree;
    model.coefficients.assign(coef.data(), coef.data() + coef.size());
    model.domain_lo = abscissae.front();
    model.domain_hi = abscissae[distinct - 1];
    double sq = 0.0;
    for (const auto& [s, z] : pairs) {
        const double r = evaluate(model, s).value - z;
        sq += r * r;
    }
    model.residual_rms = std::sqrt(sq / static_cast<double>(pairs.size()));
    return model;
}

SurrogateValue evaluate(const PolynomialSurrogate& model, double s) {
    double acc = 0.0;
    for (auto it = model.coefficients.rbegin(); it != model.coefficients.rend(); ++it) {
        acc = acc * s + *it;
    }
    return {acc, s < model.domain_lo || s > model.domain_hi};
}

namespace {

nlohmann::json to_json(const PolynomialSurrogate& model) {
    return {{"degree", model.degree},
            {"coefficients", model.coefficients},
            {"fit_domain", {model.domain_lo, model.domain_hi}},
            {"residual_rms", model.residual_rms}};
}

}  // namespace

std::string to_json_line(const PolynomialSurrogate& model) { return to_json(model).dump(); }

PolynomialSurrogate surrogate_from_json_line(const std::string& line) {
    try {
        const auto j = nlohmann::json::parse(line);
        PolynomialSurrogate model;
        model.degree = j.at("degree").get<std::size_t>();
        model.coefficients = j.at("coefficients").get<std::vector<double>>();
        const auto domain = j.at("fit_domain").get<std::vector<double>>();
        if (domain.size() != 2) throw FormatError("surrogate JSON: fit_domain needs two values");
        model.domain_lo = domain[0];
        model.domain_hi = domain[1];
        model.residual_rms = j.at("residual_rms").get<double>();
        if (model.coefficients.size() != model.degree + 1) {
            throw FormatError("surrogate JSON: coefficient count does not match degree");
        }
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("surrogate JSON: ") + e.what());
    }
}

void write_surrogate_jsonl(const PolynomialSurrogate& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    out << to_json_line(model) << '\n';
    if (!out) throw UsageError("failed writing '" + path + "'");
}

}  // namespace amred
