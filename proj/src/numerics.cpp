#include "silt/numerics.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>

#include "silt/errors.hpp"

namespace silt {

double pairwise_sum(std::span<const double> values)
{
    constexpr std::size_t block = 16;
    if (values.size() <= block) {
        double s = 0.0;
        for (const double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace {

GaussRule build_rule(int p)
{
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(p));
    rule.weights.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        // Newton on P_p from the Chebyshev-like initial guess.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (p + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= p; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dx = p1 / (p * (x * p1 - p0) / (x * x - 1.0));
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= p; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = p * (x * p1 - p0) / (x * x - 1.0);
        const auto idx = static_cast<std::size_t>(p - 1 - i);
        rule.nodes[idx] = x;
        rule.weights[idx] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int p)
{
    if (p < 1 || p > 64) {
        throw ValidationError("Gauss-Legendre order must lie in [1, 64]");
    }
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    const std::lock_guard lock(mutex);
    auto it = cache.find(p);
    if (it == cache.end()) {
        it = cache.emplace(p, build_rule(p)).first;
    }
    return it->second;
}

namespace {
std::atomic<unsigned> worker_override{0};
}  // namespace

void set_worker_count(unsigned workers) { worker_override = workers; }

unsigned worker_count()
{
    if (const unsigned w = worker_override.load(); w > 0) {
        return w;
    }
    if (const char* env = std::getenv("SILT_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                fn(i);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    pool.clear();
    if (failure) {
        std::rethrow_exception(failure);
    }
}

namespace {

std::uint64_t splitmix(std::uint64_t& x)
{
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
{
    std::uint64_t s = seed;
    const std::uint64_t a = splitmix(s);
    std::uint64_t t = stream ^ a;
    state_ = splitmix(t) ^ (a << 1);
}

CounterRng::result_type CounterRng::operator()() { return splitmix(state_); }

}  // namespace silt
