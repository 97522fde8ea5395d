#include "silt/fw_transform.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "silt/errors.hpp"
#include "silt/numerics.hpp"

namespace silt {

std::string to_string(Normalization n) { return n == Normalization::paper ? "paper" : "analytic"; }

Normalization parse_normalization(const std::string& s)
{
    if (s == "paper") {
        return Normalization::paper;
    }
    if (s == "analytic") {
        return Normalization::analytic;
    }
    throw ValidationError("unknown normalization '" + s + "' (expected paper | analytic)");
}

double normalization_factor(Normalization n, std::size_t k)
{
    if (n == Normalization::paper) {
        return 1.0;
    }
    return std::pow(2.0 * std::numbers::pi, -static_cast<double>(k - 1));
}

double fw_eps(const TransformPoint& point, double eps)
{
    if (!(eps > 0.0)) {
        throw ValidationError("eps must be positive");
    }
    const GramDecomposition dec = decompose(*point.model, point.tt);
    const auto [q1, det] = dec.shifted_form(dec.coeffs(point.h1), eps);
    const auto q2 = dec.shifted_form(dec.coeffs(point.h2), eps).first;
    return normalization_factor(point.normalization, point.tt.size()) * std::exp(-0.5 * (q1 + q2)) / det;
}

double fw_limit(const GramDecomposition& dec, const GridFunction& h1, const GridFunction& h2,
                Normalization normalization)
{
    const double p1 = projection_norm_sq(dec, h1);
    const double p2 = projection_norm_sq(dec, h2);
    return normalization_factor(normalization, dec.dimension() + 1) * std::exp(-0.5 * (p1 + p2)) / dec.gamma();
}

double fw_limit(const TransformPoint& point)
{
    return fw_limit(decompose(*point.model, point.tt), point.h1, point.h2, point.normalization);
}

double fw_wiener(const TimeTuple& tt, const GridFunction& h1, const GridFunction& h2,
                 Normalization normalization)
{
    double exponent = 0.0;
    double gaps = 1.0;
    for (std::size_t i = 0; i + 1 < tt.size(); ++i) {
        const double gap = tt[i + 1] - tt[i];
        const double a = h1.integral(tt[i], tt[i + 1]);
        const double b = h2.integral(tt[i], tt[i + 1]);
        exponent += (a * a + b * b) / gap;
        gaps *= gap;
    }
    return normalization_factor(normalization, tt.size()) * std::exp(-0.5 * exponent) / gaps;
}

std::vector<double> default_eps_ladder() { return {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}; }

namespace {

// Orthonormal basis of span(vectors), dropping numerically dependent ones.
std::vector<GridFunction> span_basis(const std::vector<GridFunction>& vectors)
{
    std::vector<GridFunction> basis;
    for (const auto& v0 : vectors) {
        const double original = v0.norm();
        if (original == 0.0) {
            continue;
        }
        GridFunction v = v0;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& e : basis) {
                v -= inner(e, v) * e;
            }
        }
        const double norm = v.norm();
        if (norm > 1e-10 * original) {
            v *= 1.0 / norm;
            basis.push_back(std::move(v));
        }
    }
    return basis;
}

}  // namespace

McEstimate mc_fw_estimate(const TransformPoint& point, double eps, std::size_t n_samples, std::uint64_t seed,
                          const McOptions& options)
{
    if (!(eps > 0.0)) {
        throw ValidationError("eps must be positive");
    }
    if (n_samples < 1000) {
        throw ValidationError("Monte Carlo needs at least 1000 samples");
    }
    const ProcessModel& model = *point.model;
    const std::size_t m = point.tt.size() - 1;

    std::vector<GridFunction> vectors;
    for (std::size_t i = 0; i < m; ++i) {
        vectors.push_back(model.increment(point.tt[i], point.tt[i + 1]));
    }
    vectors.push_back(point.h1);
    vectors.push_back(point.h2);
    const auto basis = span_basis(vectors);
    const std::size_t d = basis.size();

    // Coordinates of every vector in the orthonormal basis.
    std::vector<std::vector<double>> coords(m + 2, std::vector<double>(d));
    for (std::size_t r = 0; r < m + 2; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
            coords[r][j] = inner(vectors[r], basis[j]);
        }
    }
    const double drift = 0.5 * (point.h1.norm_sq() + point.h2.norm_sq());
    const double density_scale = 1.0 / (2.0 * std::numbers::pi * eps);

    std::vector<double> values(n_samples);
    constexpr std::size_t chunk = 4096;
    const std::size_t chunks = (n_samples + chunk - 1) / chunk;
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<double> z1(d);
        std::vector<double> z2(d);
        const std::size_t end = std::min(n_samples, (c + 1) * chunk);
        for (std::size_t s = c * chunk; s < end; ++s) {
            CounterRng rng(seed, s);
            std::normal_distribution<double> normal;
            for (std::size_t j = 0; j < d; ++j) {
                z1[j] = normal(rng);
            }
            for (std::size_t j = 0; j < d; ++j) {
                z2[j] = normal(rng);
            }
            auto project = [&](std::size_t r, const std::vector<double>& z) {
                double acc = 0.0;
                for (std::size_t j = 0; j < d; ++j) {
                    acc += coords[r][j] * z[j];
                }
                return acc;
            };
            double log_value = project(m, z1) + project(m + 1, z2) - drift;
            double scale = 1.0;
            if (options.include_density) {
                for (std::size_t i = 0; i < m; ++i) {
                    const double x1 = project(i, z1);
                    const double x2 = project(i, z2);
                    log_value -= (x1 * x1 + x2 * x2) / (2.0 * eps);
                    scale *= density_scale;
                }
            }
            values[s] = scale * std::exp(log_value);
        }
    });

    McEstimate est;
    est.samples = n_samples;
    const double n = static_cast<double>(n_samples);
    est.mean = pairwise_sum(values) / n;
    std::vector<double> sq(n_samples);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const double dv = values[s] - est.mean;
        sq[s] = dv * dv;
    }
    const double var = pairwise_sum(sq) / (n - 1.0);
    est.std_error = std::sqrt(var / n);
    return est;
}

}  // namespace silt
