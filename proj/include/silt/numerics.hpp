#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace silt {

/// Pairwise (cascade) summation; the result depends only on the order of
/// `values`, so fixed indexing gives worker-count-independent totals.
double pairwise_sum(std::span<const double> values);

/// Gauss-Legendre rule with p points on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached; p in [1, 64].
const GaussRule& gauss_legendre(int p);

/// Worker count: an explicit set_worker_count() value, else SILT_THREADS
/// if set (>= 1), else hardware concurrency.
unsigned worker_count();

/// 0 clears the override.
void set_worker_count(unsigned workers);

/// Runs fn(i) for i in [0, n) on worker_count() threads. fn must be safe to
/// call concurrently for distinct i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// SplitMix64 stream keyed by (seed, stream). Satisfies
/// UniformRandomBitGenerator, so it plugs into <random> distributions.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();

private:
    std::uint64_t state_;
};

}  // namespace silt
