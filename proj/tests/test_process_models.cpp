#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "silt/errors.hpp"
#include "silt/function_io.hpp"
#include "silt/gram.hpp"
#include "silt/process_models.hpp"
#include "support.hpp"

using namespace silt;

namespace {
const double half_pi = std::numbers::pi / 2;
}

TEST_CASE("wiener covariances")
{
    const auto m = wiener_model(make_grid(1.0, 512));
    CHECK(covariance(*m, 0.3, 0.7) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(covariance(*m, 0.2, 0.9) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(inner(m->increment(0.1, 0.3), m->increment(0.3, 0.8)) == 0.0);
    CHECK(m->increment(0.123, 0.4567).norm_sq() == doctest::Approx(0.4567 - 0.123).epsilon(1e-14));
    CHECK_THROWS_AS(m->factor(1.2), ValidationError);
    CHECK_THROWS_AS(m->increment(0.5, 0.4), ValidationError);
}

TEST_CASE("perturbed model with zero kernel is wiener")
{
    const Grid g = make_grid(1.0, 256);
    const auto w = wiener_model(g);
    const auto p = perturbed_model(g, KernelOperator::zero(g));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double s = u(rng), t = u(rng);
        CHECK(covariance(*p, s, t) == covariance(*w, s, t));
    }
}

TEST_CASE("perturbed model rejects large kernels")
{
    const Grid g = make_grid(1.0, 64);
    const auto big = KernelOperator::from_kernel(g, [](double, double) { return 1.5; });
    CHECK_THROWS_AS(perturbed_model(g, big), ValidationError);
    const auto near_one = KernelOperator::from_kernel(g, [](double, double) { return 0.97; });
    const auto m = perturbed_model(g, near_one);
    CHECK(m->warnings().size() == 1);
}

TEST_CASE("Sturm-Liouville kernel and its action on indicators")
{
    CHECK(sturm_liouville_indicator_image(0.7, 0.3) == doctest::Approx(-std::cos(0.7) * std::sin(0.3)));
    CHECK(sturm_liouville_indicator_image(0.7, 0.3) == doctest::Approx(-0.22601).epsilon(1e-4));
    CHECK(sturm_liouville_kernel(0.3, 0.8) == doctest::Approx(std::sin(0.8) * std::sin(0.3)));
    // at the diagonal the two branches are sin^2 and -cos^2, which agree in size at pi/4
    CHECK(std::abs(sturm_liouville_kernel(0.25 * std::numbers::pi, 0.25 * std::numbers::pi + 1e-15)) ==
          doctest::Approx(0.5));

    // the kernel integrated over [0, t] reproduces the closed form
    for (double t : {0.2, 0.7, 1.3}) {
        for (double u : {0.1, 0.5, 0.9, 1.5}) {
            const double integral = oracle::adaptive_simpson(
                [&](double x) { return sturm_liouville_kernel(u, x); }, 0.0, t, 1e-12);
            CHECK(integral == doctest::Approx(sturm_liouville_indicator_image(t, u)).epsilon(1e-8));
        }
    }

    CHECK_THROWS_AS(sturm_liouville_operator(make_grid(1.0, 10)), ValidationError);
}

TEST_CASE("perturbed factor matches the closed form pointwise")
{
    const Grid g = make_grid(half_pi, 512);
    const auto m = make_model("perturbed:sl", g);
    for (double t : {0.3, 0.9, 1.4}) {
        const auto f = m->factor(t).cell_averages();
        double worst = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double u = g.node(i);
            if (std::abs(u - t) < 2 * g.weight()) {
                continue;
            }
            worst = std::max(worst, std::abs(f[i] - oracle::sl_factor(t, u)));
        }
        CHECK(worst <= 5.0 * g.weight());
    }
}

TEST_CASE("Green function solves u'' + u = f with Dirichlet ends")
{
    const std::size_t n = 400;
    const double w = half_pi / n;
    std::vector<std::function<double(double)>> fs = {
        [](double) { return 1.0; }, [](double s) { return s; }, [](double s) { return std::cos(3 * s); },
        [](double s) { return std::exp(-s); }, [](double s) { return s * s - 1.0; }};
    for (const auto& f : fs) {
        std::vector<double> v(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = i * w;
            const auto integrand = [&](double s) { return sturm_liouville_green(t, s) * f(s); };
            v[i] = oracle::adaptive_simpson(integrand, 0.0, t, 1e-13) +
                   oracle::adaptive_simpson(integrand, t, half_pi, 1e-13);
        }
        CHECK(std::abs(v[0]) <= 1e-10);
        CHECK(std::abs(v[n]) <= 1e-10);
        double worst = 0.0;
        for (std::size_t i = 1; i < n; ++i) {
            const double d2 = (v[i + 1] - 2 * v[i] + v[i - 1]) / (w * w);
            worst = std::max(worst, std::abs(d2 + v[i] - f(i * w)));
        }
        CHECK(worst <= 10.0 * (1.0 / n + w * w));
    }
}

TEST_CASE("perturbed covariance against the continuum inner product")
{
    const auto m = make_model("perturbed:sl", make_grid(half_pi, 512));
    for (double t : {0.01, 0.05, 0.2, 0.8}) {
        const double direct = oracle::piecewise_integral(
            [&](double u) { return oracle::sl_factor(t, u) * oracle::sl_factor(t, u); }, {t});
        CHECK(covariance(*m, t, t) == doctest::Approx(direct).epsilon(2e-3));
    }
    // small-t behaviour: var = t + O(t^2)
    const double t = 1e-3;
    CHECK(std::abs(covariance(*m, t, t) - t) <= 10 * t * t);
}

TEST_CASE("counterexample covariances")
{
    const auto m = counterexample_model(make_grid(1.0, 128));
    CHECK(m->aux_dim() == 1);
    CHECK(m->factor(0.5).norm_sq() == doctest::Approx(1.0));
    CHECK(covariance(*m, 0.25, 1.0) == doctest::Approx(0.75));

    // normalized increment correlation: 1/2 (1 - sqrt(a/b))^{1/2} (1 - sqrt(c/d))^{1/2}
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
        const auto t = oracle::random_times(rng, 4, 0.05, 1.0, 1e-3);
        const auto d1 = m->increment(t[0], t[1]);
        const auto d2 = m->increment(t[2], t[3]);
        const double corr = inner(d1, d2) / (d1.norm() * d2.norm());
        const double formula =
            0.5 * std::sqrt(1.0 - std::sqrt(t[0] / t[1])) * std::sqrt(1.0 - std::sqrt(t[2] / t[3]));
        CHECK(std::abs(corr - formula) <= 1e-10);
    }
}

TEST_CASE("increment Gram determinants are positive for every model")
{
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::size_t> kd(2, 5);
    for (int i = 0; i < 100; ++i) {
        const auto m = test_support::model_by_index(i);
        const auto t = oracle::random_times(rng, kd(rng), 0.0, m->grid().length(), 1e-3);
        CHECK(decompose(*m, TimeTuple(t)).gamma() > 0.0);
    }
}

TEST_CASE("model spec parsing")
{
    CHECK(default_length("perturbed:sl") == doctest::Approx(half_pi));
    CHECK(default_length("wiener") == 1.0);
    const Grid g = make_grid(1.0, 16);
    CHECK(make_model("counterexample", g)->aux_dim() == 1);
    CHECK_THROWS_WITH_AS(make_model("brownian", g), doctest::Contains("brownian"), ValidationError);
    CHECK_THROWS_AS(make_model("perturbed:file=/nonexistent.csv", g), ValidationError);
}
