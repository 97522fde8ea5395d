#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "silt/grid_function.hpp"
#include "silt/kernel_operator.hpp"

namespace silt {

/// Gaussian process x(t) = ((g(t), xi_1), (g(t), xi_2)) given through its
/// factor map t -> g(t). Covariances are inner products of factors.
class ProcessModel {
public:
    virtual ~ProcessModel() = default;

    const std::string& name() const { return name_; }
    const Grid& grid() const { return grid_; }
    std::size_t aux_dim() const { return aux_dim_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    /// g(t); throws ValidationError for t outside [0, T].
    GridFunction factor(double t) const;

    /// g(t) - g(s) for s < t, built directly so that tiny gaps do not
    /// suffer cancellation.
    GridFunction increment(double s, double t) const;

    /// Zero element of the model's space (right grid and aux dimension).
    GridFunction zero() const { return GridFunction(grid_, aux_dim_); }

    /// Throws ValidationError unless 0 <= t <= T (with rounding slack).
    double check_time(double t) const;

protected:
    ProcessModel(std::string name, const Grid& grid, std::size_t aux_dim)
        : name_(std::move(name)), grid_(grid), aux_dim_(aux_dim)
    {
    }

    virtual GridFunction increment_impl(double s, double t) const = 0;

    std::vector<std::string> warnings_;

private:
    std::string name_;
    Grid grid_;
    std::size_t aux_dim_;
};

using ModelPtr = std::shared_ptr<const ProcessModel>;

/// g(t) = 1I_{[0,t]}.
ModelPtr wiener_model(const Grid& grid);

/// g(t) = (I + S) 1I_{[0,t]}. Rejects ||S|| >= 1 and records a warning when
/// ||S|| lies in [0.95, 1).
ModelPtr perturbed_model(const Grid& grid, const KernelOperator& S, std::string name = "perturbed");

/// g(t) = 1I_{[0,t]} (+) sqrt(t) e on L2 (+) R: x(t) = w(t) + sqrt(t) xi.
ModelPtr counterexample_model(const Grid& grid);

/// Kernel of the Sturm-Liouville compact perturbation on [0, pi/2]:
/// k(s,u) = sin u sin s for u > s, -cos u cos s for u < s.
/// With this kernel S 1I_{[0,t]}(u) = -cos t sin u 1I_{u<t} - sin t cos u 1I_{u>t}.
double sturm_liouville_kernel(double s, double u);

/// S 1I_{[0,t]} evaluated at u, in closed form.
double sturm_liouville_indicator_image(double t, double u);

/// Green function of u'' + u = f, u(0) = u(pi/2) = 0.
double sturm_liouville_green(double t, double s);

/// Requires a grid on [0, pi/2].
KernelOperator sturm_liouville_operator(const Grid& grid);

/// inner(g(s), g(t)).
double covariance(const ProcessModel& model, double s, double t);

/// Parses `wiener | perturbed:sl | perturbed:file=<kernel.csv> | counterexample`.
ModelPtr make_model(const std::string& spec, const Grid& grid);

/// Default interval length for a model spec: pi/2 for perturbed:sl, 1 otherwise.
double default_length(const std::string& spec);

}  // namespace silt
