#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "silt/grid_function.hpp"

namespace silt {

/// Discretized integral operator (Kf)(s) = int k(s,u) f(u) du on a Grid.
///
/// matrix(i, j) = k(node_i, node_j) * weight. Column prefix sums are kept so
/// that K applied to an interval indicator costs O(n) rather than O(n^2).
class KernelOperator {
public:
    using KernelFn = std::function<double(double s, double u)>;

    static KernelOperator from_kernel(const Grid& grid, const KernelFn& kernel);
    static KernelOperator from_matrix(const Grid& grid, Eigen::MatrixXd matrix);
    /// Reads `s,u,value` triples; each (s, u) snaps to the nearest node pair.
    static KernelOperator from_csv(const Grid& grid, const std::string& path);
    static KernelOperator zero(const Grid& grid);

    const Grid& grid() const { return grid_; }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    /// Cell values of K applied to c * 1I_{(lo, hi]}.
    Eigen::VectorXd apply_interval(double lo, double hi, double c = 1.0) const;

    /// The adjoint K*, i.e. the transposed kernel.
    KernelOperator adjoint() const;

private:
    KernelOperator(const Grid& grid, Eigen::MatrixXd matrix);

    Grid grid_;
    Eigen::MatrixXd matrix_;
    Eigen::MatrixXd prefix_;  // prefix_.col(j) = sum of matrix_ columns [0, j)
};

/// K f evaluated on the grid; f must have no auxiliary block.
GridFunction apply_operator(const KernelOperator& op, const GridFunction& f);

struct PowerIterationOptions {
    int max_iterations = 200;
    double tolerance = 1e-8;
};

/// Largest singular value by power iteration on K*K from the normalized
/// constant vector.
double operator_norm(const KernelOperator& op, const PowerIterationOptions& options = {});

}  // namespace silt
