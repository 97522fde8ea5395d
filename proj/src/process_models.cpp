#include "silt/process_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "silt/errors.hpp"

namespace silt {

double ProcessModel::check_time(double t) const
{
    const double T = grid_.length();
    const double slack = 1e-12 * T;
    if (!std::isfinite(t) || t < -slack || t > T + slack) {
        std::ostringstream os;
        os << "time " << t << " outside [0, " << T << "] for model '" << name_ << "'";
        throw ValidationError(os.str());
    }
    return std::clamp(t, 0.0, T);
}

GridFunction ProcessModel::factor(double t) const
{
    return increment_impl(0.0, check_time(t));
}

GridFunction ProcessModel::increment(double s, double t) const
{
    s = check_time(s);
    t = check_time(t);
    if (!(s < t)) {
        std::ostringstream os;
        os << "increment needs s < t, got (" << s << ", " << t << ")";
        throw ValidationError(os.str());
    }
    return increment_impl(s, t);
}

namespace {

class WienerModel final : public ProcessModel {
public:
    explicit WienerModel(const Grid& grid) : ProcessModel("wiener", grid, 0) {}

private:
    GridFunction increment_impl(double s, double t) const override
    {
        return GridFunction::interval(grid(), s, t);
    }
};

class PerturbedModel final : public ProcessModel {
public:
    PerturbedModel(const Grid& grid, KernelOperator S, std::string name, double norm)
        : ProcessModel(std::move(name), grid, 0), S_(std::move(S))
    {
        if (norm >= 1.0) {
            std::ostringstream os;
            os << "perturbation norm " << norm << " >= 1: I + S need not be invertible";
            throw ValidationError(os.str());
        }
        if (norm >= 0.95) {
            std::ostringstream os;
            os << "perturbation norm " << norm << " is close to 1";
            warnings_.push_back(os.str());
        }
    }

private:
    GridFunction increment_impl(double s, double t) const override
    {
        GridFunction g = GridFunction::interval(grid(), s, t);
        const Eigen::VectorXd image = S_.apply_interval(s, t);
        g.add_cell_values(std::span<const double>(image.data(), static_cast<std::size_t>(image.size())));
        return g;
    }

    KernelOperator S_;
};

class CounterexampleModel final : public ProcessModel {
public:
    explicit CounterexampleModel(const Grid& grid) : ProcessModel("counterexample", grid, 1) {}

private:
    GridFunction increment_impl(double s, double t) const override
    {
        GridFunction g = GridFunction::interval(grid(), s, t, 1.0, 1);
        // sqrt(t) - sqrt(s) without cancellation
        g.set_aux(0, (t - s) / (std::sqrt(t) + std::sqrt(s)));
        return g;
    }
};

}  // namespace

ModelPtr wiener_model(const Grid& grid) { return std::make_shared<WienerModel>(grid); }

ModelPtr perturbed_model(const Grid& grid, const KernelOperator& S, std::string name)
{
    if (!(S.grid() == grid)) {
        throw ValidationError("perturbation operator lives on a different grid");
    }
    const double norm = operator_norm(S);
    return std::make_shared<PerturbedModel>(grid, S, std::move(name), norm);
}

ModelPtr counterexample_model(const Grid& grid) { return std::make_shared<CounterexampleModel>(grid); }

double sturm_liouville_kernel(double s, double u)
{
    return u > s ? std::sin(u) * std::sin(s) : -std::cos(u) * std::cos(s);
}

double sturm_liouville_indicator_image(double t, double u)
{
    return u < t ? -std::cos(t) * std::sin(u) : -std::sin(t) * std::cos(u);
}

double sturm_liouville_green(double t, double s)
{
    return s < t ? -std::cos(t) * std::sin(s) : -std::sin(t) * std::cos(s);
}

KernelOperator sturm_liouville_operator(const Grid& grid)
{
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (std::abs(grid.length() - half_pi) > 1e-12) {
        std::ostringstream os;
        os << "Sturm-Liouville operator lives on [0, pi/2], grid length is " << grid.length();
        throw ValidationError(os.str());
    }
    // The kernel jumps across s = u; diagonal cells get the mean of both branches.
    Eigen::MatrixXd m = KernelOperator::from_kernel(grid, sturm_liouville_kernel).matrix();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.node(i);
        const auto d = static_cast<Eigen::Index>(i);
        m(d, d) = 0.5 * (std::sin(s) * std::sin(s) - std::cos(s) * std::cos(s)) * grid.weight();
    }
    return KernelOperator::from_matrix(grid, std::move(m));
}

double covariance(const ProcessModel& model, double s, double t)
{
    return inner(model.factor(s), model.factor(t));
}

double default_length(const std::string& spec)
{
    return spec == "perturbed:sl" ? std::numbers::pi / 2.0 : 1.0;
}

ModelPtr make_model(const std::string& spec, const Grid& grid)
{
    if (spec == "wiener") {
        return wiener_model(grid);
    }
    if (spec == "counterexample") {
        return counterexample_model(grid);
    }
    if (spec == "perturbed:sl") {
        return perturbed_model(grid, sturm_liouville_operator(grid), "perturbed:sl");
    }
    const std::string file_prefix = "perturbed:file=";
    if (spec.rfind(file_prefix, 0) == 0) {
        const std::string path = spec.substr(file_prefix.size());
        return perturbed_model(grid, KernelOperator::from_csv(grid, path), spec);
    }
    throw ValidationError("unknown model '" + spec +
                          "' (expected wiener | perturbed:sl | perturbed:file=<kernel.csv> | counterexample)");
}

}  // namespace silt
