#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace amred {

inline constexpr std::size_t kMaxSurrogateDegree = 12;

/// One-dimensional least-squares polynomial, coefficients constant term first.
struct PolynomialSurrogate {
    std::size_t degree = 0;
    std::vector<double> coefficients;
    double domain_lo = 0.0;
    double domain_hi = 0.0;
    double residual_rms = 0.0;
};

struct SurrogateValue {
    double value = 0.0;
    /// Set when the abscissa lies outside the fitted domain.
    bool extrapolated = false;
};

/// Least squares over (s, z) pairs through a Householder QR of the Vandermonde
/// matrix.  Throws DegreeTooLarge above kMaxSurrogateDegree, UsageError when
/// there are fewer than degree + 1 pairs and DegenerateAbscissae when fewer
/// than degree + 1 distinct abscissae exist.
PolynomialSurrogate fit_polynomial(std::span<const std::pair<double, double>> pairs,
                                   std::size_t degree);

SurrogateValue evaluate(const PolynomialSurrogate& model, double s);

/// One JSON object per line:
/// {"degree":d,"coefficients":[...],"fit_domain":[lo,hi],"residual_rms":r}
std::string to_json_line(const PolynomialSurrogate& model);
PolynomialSurrogate surrogate_from_json_line(const std::string& line);
void write_surrogate_jsonl(const PolynomialSurrogate& model, const std::string& path);

}  // namespace amred
