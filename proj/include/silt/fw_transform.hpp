#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "silt/gram.hpp"

namespace silt {

/// `paper` drops the Gaussian constant from the closed form; `analytic`
/// keeps the (2 pi)^{-(k-1)} that the Gaussian integral produces, which is
/// what Monte Carlo estimates converge to.
enum class Normalization { paper, analytic };

std::string to_string(Normalization n);
Normalization parse_normalization(const std::string& s);

/// 1 for paper, (2 pi)^{-(k-1)} for analytic.
double normalization_factor(Normalization n, std::size_t k);

struct TransformPoint {
    ModelPtr model;
    TimeTuple tt;
    GridFunction h1;
    GridFunction h2;
    Normalization normalization = Normalization::paper;
};

/// Transform of prod_i f_eps(dx(t_i)) with the Gaussian mollifier f_eps:
/// det(A + eps I)^{-1} exp(-1/2 [(A+eps I)^{-1}(u1,u1) + (A+eps I)^{-1}(u2,u2)]).
double fw_eps(const TransformPoint& point, double eps);

/// eps -> 0 limit: exp(-1/2 (||P h1||^2 + ||P h2||^2)) / Gamma.
double fw_limit(const TransformPoint& point);

/// Same, reusing a decomposition.
double fw_limit(const GramDecomposition& dec, const GridFunction& h1, const GridFunction& h2,
                Normalization normalization);

/// Planar Wiener closed form: per-interval projections (int h)^2 / gap over
/// the product of gaps. Needs no Gram matrix.
double fw_wiener(const TimeTuple& tt, const GridFunction& h1, const GridFunction& h2,
                 Normalization normalization);

/// {1e-1, 1e-2, ..., 1e-6}.
std::vector<double> default_eps_ladder();

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

struct McOptions {
    /// false drops the mollifier product and estimates E[stochastic exponent].
    bool include_density = true;
};

/// Direct sampling of E[prod_i f_eps(dx(t_i)) E(h1, h2)].
///
/// White noise is realized on the finite-dimensional span of the increments
/// and h1, h2: iid standard normals on an orthonormal basis of that span, so
/// E (f, xi)^2 = ||f||^2 holds exactly for every f in it. Sample s draws from
/// its own counter-keyed stream (seed, s) and the average is a pairwise sum
/// over sample index, so the estimate does not depend on the worker count.
/// Always uses the analytic normalization.
McEstimate mc_fw_estimate(const TransformPoint& point, double eps, std::size_t n_samples, std::uint64_t seed,
                          const McOptions& options = {});

}  // namespace silt
