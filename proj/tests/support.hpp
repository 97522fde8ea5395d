#pragma once

#include <random>

#include "silt/grid_function.hpp"
#include "silt/process_models.hpp"

namespace test_support {

/// A random mix of smooth and rough pieces, with random aux coordinates.
inline silt::GridFunction random_function(const silt::Grid& grid, std::size_t aux_dim, std::mt19937_64& rng,
                                          bool nonnegative = false)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double T = grid.length();
    const double a = u(rng), b = u(rng), c = u(rng);
    const double m = 1.0 + std::floor(3.0 * std::abs(u(rng)));
    auto f = silt::sample(
        grid,
        [&](double s) {
            const double v = a + b * std::sin(m * 3.14159265358979 * s / T) + c * s / T;
            return nonnegative ? std::abs(v) : v;
        },
        aux_dim);
    double lo = (0.5 + 0.5 * u(rng)) * T;
    double hi = (0.5 + 0.5 * u(rng)) * T;
    if (lo > hi) {
        std::swap(lo, hi);
    }
    f.add_atom(lo, hi, nonnegative ? std::abs(u(rng)) : u(rng));
    for (std::size_t j = 0; j < aux_dim; ++j) {
        f.set_aux(j, nonnegative ? 0.0 : u(rng));
    }
    return f;
}

inline silt::ModelPtr model_by_index(int i, std::size_t n = 512)
{
    const char* names[] = {"wiener", "perturbed:sl", "counterexample"};
    const std::string name = names[i % 3];
    return silt::make_model(name, silt::make_grid(silt::default_length(name), n));
}

}  // namespace test_support
