#include "silt/kernel_operator.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "silt/errors.hpp"

namespace silt {

KernelOperator::KernelOperator(const Grid& grid, Eigen::MatrixXd matrix)
    : grid_(grid), matrix_(std::move(matrix))
{
    const auto n = static_cast<Eigen::Index>(grid_.size());
    prefix_.resize(n, n + 1);
    prefix_.col(0).setZero();
    for (Eigen::Index j = 0; j < n; ++j) {
        prefix_.col(j + 1) = prefix_.col(j) + matrix_.col(j);
    }
}

KernelOperator KernelOperator::from_kernel(const Grid& grid, const KernelFn& kernel)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    const double w = grid.weight();
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double u = grid.node(static_cast<std::size_t>(j));
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, j) = kernel(grid.node(static_cast<std::size_t>(i)), u) * w;
        }
    }
    return KernelOperator(grid, std::move(m));
}

KernelOperator KernelOperator::from_matrix(const Grid& grid, Eigen::MatrixXd matrix)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (matrix.rows() != n || matrix.cols() != n) {
        throw ValidationError("kernel matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    }
    return KernelOperator(grid, std::move(matrix));
}

KernelOperator KernelOperator::zero(const Grid& grid)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    return KernelOperator(grid, Eigen::MatrixXd::Zero(n, n));
}

KernelOperator KernelOperator::from_csv(const Grid& grid, const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open kernel file '" + path + "'");
    }
    const auto n = static_cast<Eigen::Index>(grid.size());
    const double w = grid.weight();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line.rfind("s,u,value", 0) != 0) {
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": expected header 's,u,value'");
            }
            continue;
        }
        std::istringstream row(line);
        double s = 0.0;
        double u = 0.0;
        double value = 0.0;
        char c1 = 0;
        char c2 = 0;
        if (!(row >> s >> c1 >> u >> c2 >> value) || c1 != ',' || c2 != ',') {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
        }
        if (s < 0.0 || s > grid.length() || u < 0.0 || u > grid.length()) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": node outside the grid");
        }
        m(static_cast<Eigen::Index>(grid.cell_of(s)), static_cast<Eigen::Index>(grid.cell_of(u))) =
            value * w;
    }
    return KernelOperator(grid, std::move(m));
}

Eigen::VectorXd KernelOperator::apply_interval(double lo, double hi, double c) const
{
    const auto n = static_cast<Eigen::Index>(grid_.size());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    lo = std::max(lo, 0.0);
    hi = std::min(hi, grid_.length());
    if (!(hi > lo)) {
        return out;
    }
    const double w = grid_.weight();
    const auto i0 = static_cast<Eigen::Index>(grid_.cell_of(lo));
    const auto i1 = static_cast<Eigen::Index>(grid_.cell_of(hi));
    if (i0 == i1) {
        out = matrix_.col(i0) * (c * (hi - lo) / w);
        return out;
    }
    const double left_frac = (grid_.cell_left(static_cast<std::size_t>(i0)) + w - lo) / w;
    const double right_frac = (hi - grid_.cell_left(static_cast<std::size_t>(i1))) / w;
    out = matrix_.col(i0) * left_frac + (prefix_.col(i1) - prefix_.col(i0 + 1)) +
          matrix_.col(i1) * right_frac;
    out *= c;
    return out;
}

KernelOperator KernelOperator::adjoint() const
{
    return KernelOperator(grid_, matrix_.transpose());
}

GridFunction apply_operator(const KernelOperator& op, const GridFunction& f)
{
    if (!(f.grid() == op.grid())) {
        throw ValidationError("operator and function live on different grids");
    }
    if (f.aux_dim() != 0) {
        throw ValidationError("integral operators act on the L2 part only; argument has an auxiliary block");
    }
    const auto avg = f.cell_averages();
    const Eigen::Map<const Eigen::VectorXd> x(avg.data(), static_cast<Eigen::Index>(avg.size()));
    const Eigen::VectorXd y = op.matrix() * x;
    return GridFunction::from_values(op.grid(), std::vector<double>(y.data(), y.data() + y.size()));
}

double operator_norm(const KernelOperator& op, const PowerIterationOptions& options)
{
    const Eigen::MatrixXd& k = op.matrix();
    if (k.cwiseAbs().maxCoeff() == 0.0) {
        return 0.0;
    }
    const auto n = k.cols();
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    if ((k * x).norm() == 0.0) {
        // Constant start vector lies in the kernel; fall back to a fixed
        // non-constant vector so the result stays deterministic.
        for (Eigen::Index i = 0; i < n; ++i) {
            x(i) = 1.0 + std::sin(1.0 + 3.0 * static_cast<double>(i));
        }
        x.normalize();
    }
    double lambda = 0.0;
    for (int it = 0; it < options.max_iterations; ++it) {
        Eigen::VectorXd y = k.transpose() * (k * x);
        const double next = y.norm();
        if (next == 0.0) {
            return 0.0;
        }
        x = y / next;
        const bool done = std::abs(next - lambda) <= options.tolerance * next;
        lambda = next;
        if (done) {
            break;
        }
    }
    return std::sqrt(lambda);
}

}  // namespace silt
