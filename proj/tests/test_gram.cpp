#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "silt/errors.hpp"
#include "silt/function_io.hpp"
#include "silt/gram.hpp"
#include "support.hpp"

using namespace silt;

TEST_CASE("time tuples validate ordering and gaps")
{
    CHECK_THROWS_AS(TimeTuple({0.5}), ValidationError);
    CHECK_THROWS_AS(TimeTuple({0.5, 0.4}), ValidationError);
    CHECK_THROWS_AS(TimeTuple({0.5, 0.5 + 1e-12}), ValidationError);
    CHECK_NOTHROW(TimeTuple({0.5, 0.5 + 1e-12}, 1e-13));
    const TimeTuple tt({0.1, 0.4, 0.9});
    CHECK(tt.gaps()[1] == doctest::Approx(0.5));
}

TEST_CASE("wiener Gram matrix is the diagonal of gaps")
{
    const auto m = wiener_model(make_grid(1.0, 512));
    const auto dec = decompose(*m, TimeTuple({0.2, 0.5, 0.9}));
    CHECK(dec.gamma() == doctest::Approx(0.12).epsilon(1e-14));
    CHECK(dec.gram()(0, 1) == 0.0);
    CHECK(dec.condition_number() == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("perturbed Gram matrix against the continuum oracle")
{
    const auto m = make_model("perturbed:sl", make_grid(std::numbers::pi / 2, 1024));
    const std::vector<double> t{0.1, 0.35, 0.8, 1.4};
    const auto dec = decompose(*m, TimeTuple(t));
    const Eigen::MatrixXd ref = oracle::sl_increment_gram(t);
    CHECK((dec.gram() - ref).norm() <= 1e-5 * ref.norm());
    CHECK(dec.gamma() == doctest::Approx(ref.determinant()).epsilon(1e-5));

    // second-order convergence in n
    const auto coarse = make_model("perturbed:sl", make_grid(std::numbers::pi / 2, 256));
    const double e_fine = (dec.gram() - ref).norm();
    const double e_coarse = (decompose(*coarse, TimeTuple(t)).gram() - ref).norm();
    CHECK(e_coarse / e_fine >= 8.0);
}

TEST_CASE("projection examples")
{
    const Grid g = make_grid(1.0, 512);
    const auto m = wiener_model(g);
    const auto dec = decompose(*m, TimeTuple({0.5, 0.75}));
    CHECK(projection_norm_sq(dec, indicator(g, 0.25)) == doctest::Approx(0.0));
    const auto inc = dec.increments()[0];
    CHECK(projection_norm_sq(dec, inc) == doctest::Approx(inc.norm_sq()));

    const auto one = parse_function("const1", g);
    CHECK(projection_norm_sq(decompose(*m, TimeTuple({0.2, 0.5})), one) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(single_interval_projection(*m, 0.2, 0.5, one) == doctest::Approx(0.3).epsilon(1e-13));
    const auto unit = (1.0 / inc.norm()) * inc;
    CHECK(single_interval_projection(*m, 0.5, 0.75, unit) == doctest::Approx(1.0));
    CHECK(single_interval_projection(*m, 0.5, 0.75, indicator(g, 0.3)) == 0.0);
}

TEST_CASE("quadratic form equals the orthonormal sum")
{
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<std::size_t> kd(2, 5);
    for (int i = 0; i < 200; ++i) {
        const auto m = test_support::model_by_index(i);
        const auto t = oracle::random_times(rng, kd(rng), 0.0, m->grid().length(), 1e-3);
        const auto dec = decompose(*m, TimeTuple(t));
        const auto h = test_support::random_function(m->grid(), m->aux_dim(), rng);
        const auto p = projection_pair(dec, h);
        CHECK(std::abs(p.quadratic_form - p.ortho_sum) <= 1e-8 * (1.0 + h.norm_sq()));
    }
}

TEST_CASE("projection bounds and span membership")
{
    std::mt19937_64 rng(22);
    std::normal_distribution<double> z;
    for (int i = 0; i < 60; ++i) {
        const auto m = test_support::model_by_index(i);
        const auto t = oracle::random_times(rng, 4, 0.0, m->grid().length(), 1e-2);
        const auto dec = decompose(*m, TimeTuple(t));
        const auto h = test_support::random_function(m->grid(), m->aux_dim(), rng);
        const double p = projection_norm_sq(dec, h);
        CHECK(p >= 0.0);
        CHECK(p <= h.norm_sq() * (1.0 + 1e-12));

        auto in_span = m->zero();
        for (const auto& inc : dec.increments()) {
            in_span += z(rng) * inc;
        }
        CHECK(projection_norm_sq(dec, in_span) == doctest::Approx(in_span.norm_sq()).epsilon(1e-10));
    }
}

TEST_CASE("subset projections are monotone and reach the full projection")
{
    std::mt19937_64 rng(23);
    for (int i = 0; i < 30; ++i) {
        const auto m = test_support::model_by_index(i);
        const auto t = oracle::random_times(rng, 5, 0.0, m->grid().length(), 1e-2);
        const auto dec = decompose(*m, TimeTuple(t));
        const auto h = test_support::random_function(m->grid(), m->aux_dim(), rng);
        CHECK(subset_projection_norm_sq(dec, {}, h) == 0.0);
        CHECK(subset_projection_norm_sq(dec, {0, 1, 2, 3}, h) ==
              doctest::Approx(projection_norm_sq(dec, h)).epsilon(1e-10));
        CHECK(subset_projection_norm_sq(dec, {1}, h) <= subset_projection_norm_sq(dec, {1, 3}, h));
        CHECK(subset_projection_norm_sq(dec, {1, 3}, h) <= subset_projection_norm_sq(dec, {0, 1, 3}, h));
    }
}

TEST_CASE("Gram-Schmidt order changes the basis but not Gamma or the full projection")
{
    std::mt19937_64 rng(24);
    for (int i = 0; i < 30; ++i) {
        const auto m = test_support::model_by_index(i);
        const auto t = oracle::random_times(rng, 4, 0.0, m->grid().length(), 1e-2);
        const auto dec = decompose(*m, TimeTuple(t));
        const auto h = test_support::random_function(m->grid(), m->aux_dim(), rng);

        auto reversed = dec.increments();
        std::reverse(reversed.begin(), reversed.end());
        const auto basis = gram_schmidt(reversed);
        double full = 0.0;
        for (const auto& e : basis) {
            full += inner(h, e) * inner(h, e);
        }
        CHECK(full == doctest::Approx(projection_norm_sq(dec, h)).epsilon(1e-10));

        // Gamma from the permuted Gram matrix
        Eigen::MatrixXd a(3, 3);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                a(r, c) = inner(reversed[r], reversed[c]);
            }
        }
        CHECK(a.determinant() == doctest::Approx(dec.gamma()).epsilon(1e-10));

        for (std::size_t r = 0; r < basis.size(); ++r) {
            for (std::size_t c = 0; c < basis.size(); ++c) {
                CHECK(std::abs(inner(basis[r], basis[c]) - (r == c ? 1.0 : 0.0)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("Hadamard inequality, with equality for wiener")
{
    std::mt19937_64 rng(25);
    for (int i = 0; i < 60; ++i) {
        const auto m = test_support::model_by_index(i);
        const auto t = oracle::random_times(rng, 4, 0.0, m->grid().length(), 1e-2);
        const auto dec = decompose(*m, TimeTuple(t));
        double prod = 1.0;
        for (const auto& inc : dec.increments()) {
            prod *= inc.norm_sq();
        }
        CHECK(dec.gamma() <= prod * (1.0 + 1e-12));
        if (m->name() == "wiener") {
            CHECK(std::abs(dec.gamma() - prod) <= 1e-12 * prod);
        }
    }
}

TEST_CASE("near-diagonal tuples fail loudly")
{
    const auto m = make_model("counterexample", make_grid(1.0, 64));
    // increments with dependent aux parts and tiny L2 parts
    CHECK_THROWS_AS(decompose(*m, TimeTuple({0.5, 0.5 + 1e-13, 0.5 + 2e-13, 0.9}, 1e-15)), DegenerateGramError);
    try {
        decompose(*m, TimeTuple({0.5, 0.5 + 1e-13, 0.5 + 2e-13, 0.9}, 1e-15));
    } catch (const DegenerateGramError& e) {
        CHECK(std::string(e.what()).find("smallest gap") != std::string::npos);
    }
}
