#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "silt/fw_transform.hpp"
#include "silt/quadrature.hpp"

namespace silt {

/// sum over subsets M of {0..m-1} of (-1)^{|M|} prod_{i in M} a_i, by
/// explicit enumeration of all 2^m subsets.
double inclusion_exclusion_sum(std::span<const double> factors);

/// Gamma^{-1} sum_M (-1)^{|M|} exp(-1/2 [||P_M h1||^2 + ||P_M h2||^2]) where P_M
/// projects onto the Gram-Schmidt vectors e_i, i in M. Bounded along the
/// diagonals for processes that are strongly locally nondeterministic.
/// Evaluated in the equivalent factorized form prod_i (1 - exp(-a_i / 2)),
/// a_i = (h1, e_i)^2 + (h2, e_i)^2.
double regularized_integrand(const GramDecomposition& dec, const GridFunction& h1, const GridFunction& h2);
/// The same sum taken literally over all 2^{k-1} subsets. Loses relative
/// accuracy to cancellation when every 1 - exp(-a_i / 2) is small.
double regularized_integrand_by_subsets(const GramDecomposition& dec, const GridFunction& h1,
                                        const GridFunction& h2);
double regularized_integrand(const ProcessModel& model, const TimeTuple& tt, const GridFunction& h1,
                             const GridFunction& h2);

/// Wiener-only factorized form prod_i (1 - exp(-1/2 [p1_i + p2_i])) / gap_i with
/// p_i = (int_{t_i}^{t_{i+1}} h)^2 / gap_i. Independent of the Gram machinery.
double product_form_wiener(const TimeTuple& tt, const GridFunction& h1, const GridFunction& h2);

struct QuadratureSpec {
    std::size_t k = 2;
    int levels = 6;       ///< level l integrates with Gauss order l + 1
    double grading = 2.0;
    double min_gap = 1e-3;
    double tol = 1e-4;    ///< convergence: |e_L - e_{L-1}| <= tol (1 + |e_L|)
    int t1_panels = 4;

    /// min_gap = max(1e-6, 2 cell widths).
    static QuadratureSpec for_grid(std::size_t k, const Grid& grid);
};

struct RegularizedValue {
    double value = 0.0;
    std::vector<double> level_estimates;
    /// (e_{l-1} - e_{l-2}) / (e_l - e_{l-1}) for l >= 3 (1-based levels).
    std::vector<double> refinement_ratios;
    bool converged = false;
};

/// Integral of regularized_integrand over the simplex. k in {2, 3, 4}.
/// Non-convergence is reported through the flag, not thrown.
RegularizedValue regularized_integral(const ProcessModel& model, const GridFunction& h1, const GridFunction& h2,
                                      const QuadratureSpec& spec);

struct ProbePoint {
    double delta;
    double value;
};

/// Integral of the unregularized limit transform (paper normalization) over
/// {all gaps >= delta}. deltas must be strictly decreasing and positive.
std::vector<ProbePoint> divergence_probe(const ProcessModel& model, std::size_t k, const GridFunction& h1,
                                         const GridFunction& h2, const std::vector<double>& deltas,
                                         int order = 8);

/// Same truncation, regularized integrand.
std::vector<ProbePoint> regularized_probe(const ProcessModel& model, std::size_t k, const GridFunction& h1,
                                          const GridFunction& h2, const std::vector<double>& deltas,
                                          int order = 8);

/// Values of the regularized integrand as gap `index` (0-based) takes each
/// value in `gaps`; later times shift so the other gaps stay fixed.
std::vector<double> integrand_gap_scan(const ProcessModel& model, const TimeTuple& base, std::size_t index,
                                       const std::vector<double>& gaps, const GridFunction& h1,
                                       const GridFunction& h2);

struct SchurResult {
    double lhs;
    double rhs;
    bool pass;
};

/// lhs = int_a^T (int_a^t h)^2 / (t - a)^2 dt, rhs = 8 ||h 1I_{[a,T]}||^2.
/// h must be nonnegative.
SchurResult schur_bound_check(const GridFunction& h, double a);

/// Discretization of k(s1, s2) = 1I{s2 > s1} / (s2 - a) on L2([a, a + length])
/// with n cells (in shifted coordinates). Its norm is at most 4.
KernelOperator schur_kernel(double length, std::size_t n);

struct IteratedBound {
    double integral;
    double coarse_integral;  ///< same integral two Gauss orders lower
    double bound;            ///< (8 ||h||^2)^{k-1}
    bool pass;
};

/// int over {gaps >= min_gap} of prod_i (int_{t_i}^{t_{i+1}} h)^2 / gap_i^2
/// against (8 ||h||^2)^{k-1}. k in {2, 3}, h >= 0.
IteratedBound iterated_bound_check(const GridFunction& h, std::size_t k, double min_gap = 1e-6, int order = 8);

}  // namespace silt
