#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace silt {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre of the given order on geometric bands
/// [hi/q, hi], [hi/q^2, hi/q], ..., [lo, hi/q^J], graded toward zero.
/// Requires 0 < lo; returns an empty rule when hi <= lo.
Rule1D graded_rule(double lo, double hi, double grading, int order);

/// Gauss-Legendre of the given order on `panels` equal panels of [lo, hi].
Rule1D uniform_rule(double lo, double hi, int panels, int order);

/// Cubature over {0 <= t_1 < ... < t_k <= T} in gap coordinates
/// (gamma_1, ..., gamma_{k-1}, t_1), gamma_i = t_{i+1} - t_i.
///
/// Each gap uses graded_rule down to `floor`. With extrapolate_floor the
/// band [0, floor] of every gap contributes one node at gamma = floor (the
/// integrand is assumed bounded there); otherwise the domain is truncated to
/// gaps >= floor. t_1 runs over [0, T - sum gamma] on uniform panels.
struct GapCubature {
    std::size_t k = 2;
    double T = 1.0;
    double floor = 1e-3;
    double grading = 2.0;
    int order = 4;
    int t1_panels = 4;
    bool extrapolate_floor = true;
};

using SimplexIntegrand = std::function<double(const std::vector<double>& times)>;

/// Outer-gap nodes run in parallel; partial sums are combined by pairwise
/// summation in node order.
double integrate_simplex(const GapCubature& cubature, const SimplexIntegrand& f);

}  // namespace silt
