#include "silt/regularization.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "silt/errors.hpp"
#include "silt/numerics.hpp"

namespace silt {

double inclusion_exclusion_sum(std::span<const double> factors)
{
    const std::size_t m = factors.size();
    if (m > 30) {
        throw ValidationError("too many factors for subset enumeration");
    }
    double sum = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        double term = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (1u << i)) {
                term *= factors[i];
            }
        }
        sum += (std::popcount(mask) % 2 == 0) ? term : -term;
    }
    return sum;
}

double regularized_integrand(const GramDecomposition& dec, const GridFunction& h1, const GridFunction& h2)
{
    // ||P_M h||^2 is additive over M in the orthonormal basis, so the signed
    // subset sum collapses to prod_i (1 - exp(-a_i / 2)). expm1 keeps each
    // factor accurate when a_i is small, where the alternating sum cancels.
    const Eigen::VectorXd c1 = dec.ortho_coeffs(h1);
    const Eigen::VectorXd c2 = dec.ortho_coeffs(h2);
    double value = 1.0 / dec.gamma();
    for (Eigen::Index i = 0; i < c1.size(); ++i) {
        value *= -std::expm1(-0.5 * (c1(i) * c1(i) + c2(i) * c2(i)));
    }
    return value;
}

double regularized_integrand_by_subsets(const GramDecomposition& dec, const GridFunction& h1,
                                        const GridFunction& h2)
{
    const std::size_t m = dec.dimension();
    std::vector<double> terms;
    terms.reserve(std::size_t{1} << m);
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < m; ++i) {
            if (mask & (1u << i)) {
                subset.push_back(i);
            }
        }
        const double e = std::exp(-0.5 * (subset_projection_norm_sq(dec, subset, h1) +
                                          subset_projection_norm_sq(dec, subset, h2)));
        terms.push_back(subset.size() % 2 == 0 ? e : -e);
    }
    return pairwise_sum(terms) / dec.gamma();
}

double regularized_integrand(const ProcessModel& model, const TimeTuple& tt, const GridFunction& h1,
                             const GridFunction& h2)
{
    return regularized_integrand(decompose(model, tt), h1, h2);
}

double product_form_wiener(const TimeTuple& tt, const GridFunction& h1, const GridFunction& h2)
{
    double value = 1.0;
    for (std::size_t i = 0; i + 1 < tt.size(); ++i) {
        const double gap = tt[i + 1] - tt[i];
        const double a = h1.integral(tt[i], tt[i + 1]);
        const double b = h2.integral(tt[i], tt[i + 1]);
        value *= -std::expm1(-0.5 * (a * a + b * b) / gap) / gap;
    }
    return value;
}

QuadratureSpec QuadratureSpec::for_grid(std::size_t k, const Grid& grid)
{
    QuadratureSpec spec;
    spec.k = k;
    spec.min_gap = std::max(1e-6, 2.0 * grid.weight());
    return spec;
}

RegularizedValue regularized_integral(const ProcessModel& model, const GridFunction& h1, const GridFunction& h2,
                                      const QuadratureSpec& spec)
{
    if (spec.k < 2 || spec.k > 4) {
        throw ValidationError("regularized_integral supports k in {2, 3, 4}, got " + std::to_string(spec.k));
    }
    if (spec.levels < 2) {
        throw ValidationError("need at least 2 refinement levels");
    }
    if (!(spec.min_gap > 0.0)) {
        throw ValidationError("min_gap must be positive");
    }
    GapCubature cub;
    cub.k = spec.k;
    cub.T = model.grid().length();
    cub.floor = spec.min_gap;
    cub.grading = spec.grading;
    cub.t1_panels = spec.t1_panels;
    cub.extrapolate_floor = true;

    const double tuple_gap = 0.5 * spec.min_gap;
    const auto integrand = [&](const std::vector<double>& times) {
        return regularized_integrand(model, TimeTuple(times, tuple_gap), h1, h2);
    };

    RegularizedValue out;
    for (int level = 1; level <= spec.levels; ++level) {
        cub.order = level + 1;
        out.level_estimates.push_back(integrate_simplex(cub, integrand));
    }
    const auto& e = out.level_estimates;
    for (std::size_t l = 2; l < e.size(); ++l) {
        const double num = e[l - 1] - e[l - 2];
        const double den = e[l] - e[l - 1];
        out.refinement_ratios.push_back(den != 0.0 ? num / den : std::numeric_limits<double>::infinity());
    }
    out.value = e.back();
    const double last_gap = std::abs(e.back() - e[e.size() - 2]);
    out.converged = last_gap <= spec.tol * (1.0 + std::abs(out.value));
    return out;
}

namespace {

std::vector<ProbePoint> truncated_probe(const ProcessModel& model, std::size_t k,
                                        const std::vector<double>& deltas, int order,
                                        const SimplexIntegrand& integrand)
{
    if (k < 2) {
        throw ValidationError("probe needs k >= 2");
    }
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > TimeTuple::default_min_gap) || (i > 0 && !(deltas[i] < deltas[i - 1]))) {
            throw ValidationError("probe deltas must be positive and strictly decreasing");
        }
    }
    std::vector<ProbePoint> out;
    for (const double delta : deltas) {
        GapCubature cub;
        cub.k = k;
        cub.T = model.grid().length();
        cub.floor = delta;
        cub.order = order;
        cub.extrapolate_floor = false;
        out.push_back({delta, integrate_simplex(cub, integrand)});
    }
    return out;
}

}  // namespace

std::vector<ProbePoint> divergence_probe(const ProcessModel& model, std::size_t k, const GridFunction& h1,
                                         const GridFunction& h2, const std::vector<double>& deltas, int order)
{
    return truncated_probe(model, k, deltas, order, [&](const std::vector<double>& times) {
        const GramDecomposition dec = decompose(model, TimeTuple(times));
        return fw_limit(dec, h1, h2, Normalization::paper);
    });
}

std::vector<ProbePoint> regularized_probe(const ProcessModel& model, std::size_t k, const GridFunction& h1,
                                          const GridFunction& h2, const std::vector<double>& deltas, int order)
{
    return truncated_probe(model, k, deltas, order, [&](const std::vector<double>& times) {
        return regularized_integrand(model, TimeTuple(times), h1, h2);
    });
}

std::vector<double> integrand_gap_scan(const ProcessModel& model, const TimeTuple& base, std::size_t index,
                                       const std::vector<double>& gaps, const GridFunction& h1,
                                       const GridFunction& h2)
{
    if (index + 1 >= base.size()) {
        throw ValidationError("gap index out of range");
    }
    std::vector<double> out;
    for (const double gap : gaps) {
        std::vector<double> times = base.times();
        const double shift = gap - (times[index + 1] - times[index]);
        for (std::size_t j = index + 1; j < times.size(); ++j) {
            times[j] += shift;
        }
        out.push_back(regularized_integrand(model, TimeTuple(times, base.min_gap()), h1, h2));
    }
    return out;
}

namespace {

void require_nonnegative(const GridFunction& h)
{
    for (const auto& seg : h.segments()) {
        if (seg.value < 0.0) {
            std::ostringstream os;
            os << "h must be nonnegative; value " << seg.value << " on (" << seg.lo << ", " << seg.hi << "]";
            throw ValidationError(os.str());
        }
    }
}

}  // namespace

SchurResult schur_bound_check(const GridFunction& h, double a)
{
    const double T = h.grid().length();
    if (!(a >= 0.0 && a < T)) {
        throw ValidationError("Schur check needs 0 <= a < T");
    }
    require_nonnegative(h);

    std::vector<double> lhs_terms;
    std::vector<double> rhs_terms;
    double F = 0.0;  // int_a^{lo} h on the current segment
    for (const auto& seg : h.segments()) {
        const double lo = std::max(seg.lo, a);
        const double hi = seg.hi;
        if (!(hi > lo)) {
            continue;
        }
        const double v = seg.value;
        rhs_terms.push_back(v * v * (hi - lo));
        if (lo == a) {
            // F(t) = v (t - a) on the first piece: the integrand is v^2.
            lhs_terms.push_back(v * v * (hi - lo));
        } else {
            const Rule1D rule = graded_rule(lo - a, hi - a, 2.0, 8);
            double piece = 0.0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double tau = rule.nodes[q];
                const double Ft = F + v * (tau - (lo - a));
                piece += rule.weights[q] * Ft * Ft / (tau * tau);
            }
            lhs_terms.push_back(piece);
        }
        F += v * (hi - lo);
    }
    SchurResult r;
    r.lhs = pairwise_sum(lhs_terms);
    r.rhs = 8.0 * pairwise_sum(rhs_terms);
    r.pass = r.lhs <= r.rhs * (1.0 + 1e-6);
    return r;
}

KernelOperator schur_kernel(double length, std::size_t n)
{
    const Grid grid = make_grid(length, n);
    const auto dim = static_cast<Eigen::Index>(n);
    const double w = grid.weight();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        const double s2 = grid.node(static_cast<std::size_t>(j));
        for (Eigen::Index i = 0; i < j; ++i) {
            m(i, j) = w / s2;
        }
        // Half of the diagonal cell lies above s1.
        m(j, j) = 0.5 * w / s2;
    }
    return KernelOperator::from_matrix(grid, std::move(m));
}

IteratedBound iterated_bound_check(const GridFunction& h, std::size_t k, double min_gap, int order)
{
    if (k != 2 && k != 3) {
        throw ValidationError("iterated bound check supports k in {2, 3}");
    }
    if (order < 3) {
        throw ValidationError("iterated bound check needs Gauss order >= 3");
    }
    require_nonnegative(h);
    const auto integrand = [&](const std::vector<double>& times) {
        double value = 1.0;
        for (std::size_t i = 0; i + 1 < times.size(); ++i) {
            const double gap = times[i + 1] - times[i];
            const double mass = h.integral(times[i], times[i + 1]);
            value *= mass * mass / (gap * gap);
        }
        return value;
    };
    GapCubature cub;
    cub.k = k;
    cub.T = h.grid().length();
    cub.floor = min_gap;
    cub.extrapolate_floor = false;

    IteratedBound r;
    cub.order = order;
    r.integral = integrate_simplex(cub, integrand);
    cub.order = order - 2;
    r.coarse_integral = integrate_simplex(cub, integrand);
    r.bound = std::pow(8.0 * h.norm_sq(), static_cast<double>(k - 1));
    r.pass = r.integral <= r.bound * (1.0 + 1e-6);
    return r;
}

}  // namespace silt
