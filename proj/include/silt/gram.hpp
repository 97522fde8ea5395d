#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "silt/process_models.hpp"

namespace silt {

/// Strictly increasing times t_1 < ... < t_k with every gap >= min_gap.
class TimeTuple {
public:
    static constexpr double default_min_gap = 1e-9;

    /// Throws ValidationError for k < 2, unordered times or gaps below min_gap.
    explicit TimeTuple(std::vector<double> times, double min_gap = default_min_gap);

    const std::vector<double>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    double operator[](std::size_t i) const { return times_[i]; }
    double min_gap() const { return min_gap_; }
    std::vector<double> gaps() const;

private:
    std::vector<double> times_;
    double min_gap_;
};

/// Increments dg_i = g(t_{i+1}) - g(t_i), their Gram matrix A, the
/// determinant Gamma = det A and the orthonormal system obtained by
/// Gram-Schmidt in increasing index order.
class GramDecomposition {
public:
    static constexpr double max_condition = 1e12;

    const std::vector<GridFunction>& increments() const { return increments_; }
    const Eigen::MatrixXd& gram() const { return gram_; }
    double gamma() const { return gamma_; }
    const std::vector<GridFunction>& ortho() const { return ortho_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    double condition_number() const { return eigenvalues_.maxCoeff() / eigenvalues_.minCoeff(); }
    std::size_t dimension() const { return increments_.size(); }

    /// u = ((dg_1, h), ..., (dg_{k-1}, h)).
    Eigen::VectorXd coeffs(const GridFunction& h) const;

    /// ((h, e_1), ..., (h, e_{k-1})) for the orthonormal system e_i.
    Eigen::VectorXd ortho_coeffs(const GridFunction& h) const;

    /// A^{-1}(u, u) through the pivoted LDL^T factorization.
    double quadratic_form(const Eigen::VectorXd& u) const;

    /// (A + eps I)^{-1}(u, u) and det(A + eps I).
    std::pair<double, double> shifted_form(const Eigen::VectorXd& u, double eps) const;

    friend GramDecomposition decompose(const ProcessModel& model, const TimeTuple& tt);

private:
    std::vector<GridFunction> increments_;
    Eigen::MatrixXd gram_;
    Eigen::LDLT<Eigen::MatrixXd> ldlt_;
    double gamma_ = 0.0;
    Eigen::VectorXd eigenvalues_;
    std::vector<GridFunction> ortho_;
};

/// Throws DegenerateGramError when cond(A) exceeds max_condition, naming
/// the smallest gap of the tuple.
GramDecomposition decompose(const ProcessModel& model, const TimeTuple& tt);

/// Orthonormalizes `vectors` in the given order (two passes of modified
/// Gram-Schmidt). Throws DegenerateGramError on a numerically dependent
/// vector.
std::vector<GridFunction> gram_schmidt(const std::vector<GridFunction>& vectors);

/// Both sides of the quadratic-form/projection identity for one h.
struct ProjectionPair {
    double quadratic_form;  // A^{-1}(u, u)
    double ortho_sum;       // sum_i (h, e_i)^2
    Eigen::VectorXd ortho_coeffs;
};

ProjectionPair projection_pair(const GramDecomposition& dec, const GridFunction& h);

/// ||P h||^2 onto span{dg_i}. Computes the quadratic form and the
/// orthonormal-basis sum and throws ConsistencyError if they differ by more
/// than 1e-8 (1 + ||h||^2).
double projection_norm_sq(const GramDecomposition& dec, const GridFunction& h);

/// sum_{i in subset} (h, e_i)^2 with 0-based indices into the increments.
double subset_projection_norm_sq(const GramDecomposition& dec, const std::vector<std::size_t>& subset,
                                 const GridFunction& h);

/// (h, dg)^2 / ||dg||^2 for dg = g(t) - g(s).
double single_interval_projection(const ProcessModel& model, double s, double t, const GridFunction& h);

}  // namespace silt
