#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "amred/geometry.hpp"
#include "amred/surrogate.hpp"

namespace amred {

/// (1/N) sum g g^T over raw gradients.  The lower triangle is copied from the
/// upper one so the result is exactly symmetric.  Throws DimensionMismatch.
Eigen::MatrixXd compute_c_matrix(std::span<const Vector> gradients);

struct SymmetricEigen {
    /// Descending.
    Eigen::VectorXd values;
    /// Orthonormal columns matching `values`; the first component above
    /// 1e-12 in magnitude of each column is positive.
    Eigen::MatrixXd vectors;
    int sweeps = 0;
};

inline constexpr int kMaxJacobiSweeps = 50;

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops to
/// 1e-12 * ||A||_F or kMaxJacobiSweeps sweeps have run.  Throws NotSymmetric
/// when |a_ij - a_ji| exceeds 1e-10 * max(1, max |a|).
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& a);

struct ActiveSubspaceModel {
    Eigen::MatrixXd c_matrix;
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    Vector active_direction;
    PolynomialSurrogate surrogate;
};

/// C from raw gradients, w1 from its dominant eigenvector, then a polynomial
/// fit of f against the projections <x_i, w1>.
ActiveSubspaceModel build_as_model(std::span<const Point> locations,
                                   std::span<const Vector> raw_gradients,
                                   std::span<const double> values, std::size_t degree);

/// Uses every lattice sample of the field.
ActiveSubspaceModel build_as_model(const GradientField& field, std::size_t degree);

/// Surrogate evaluated at <p, w1>.
SurrogateValue as_estimate(const ActiveSubspaceModel& model, const Point& p);

/// {"eigenvalues":[...],"eigenvectors":[[column 1],...],"surrogate":{...}}
std::string to_json_line(const ActiveSubspaceModel& model);

}  // namespace amred
