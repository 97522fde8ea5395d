#include "silt/grid_function.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "silt/errors.hpp"

namespace silt {

namespace {

double overlap(double a_lo, double a_hi, double b_lo, double b_hi)
{
    const double lo = std::max(a_lo, b_lo);
    const double hi = std::min(a_hi, b_hi);
    return hi > lo ? hi - lo : 0.0;
}

// Slack for times that land a few ulps outside [0, T].
double slack(const Grid& grid) { return 1e-12 * grid.length(); }

}  // namespace

std::size_t Grid::cell_of(double t) const
{
    if (t <= 0.0) {
        return 0;
    }
    const auto i = static_cast<std::size_t>(std::floor(t / weight()));
    return std::min(i, n_ - 1);
}

Grid make_grid(double T, std::size_t n)
{
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw ValidationError("grid length T must be positive, got " + std::to_string(T));
    }
    if (n < 2) {
        throw ValidationError("grid needs at least 2 cells, got " + std::to_string(n));
    }
    return Grid(T, n);
}

GridFunction::GridFunction(const Grid& grid, std::size_t aux_dim) : grid_(grid), aux_(aux_dim, 0.0) {}

GridFunction GridFunction::from_values(const Grid& grid, std::vector<double> values,
                                       std::vector<double> aux)
{
    if (values.size() != grid.size()) {
        throw ValidationError("expected " + std::to_string(grid.size()) + " cell values, got " +
                              std::to_string(values.size()));
    }
    GridFunction f(grid, 0);
    f.values_ = std::move(values);
    f.aux_ = std::move(aux);
    return f;
}

GridFunction GridFunction::interval(const Grid& grid, double lo, double hi, double coeff,
                                    std::size_t aux_dim)
{
    GridFunction f(grid, aux_dim);
    f.add_atom(lo, hi, coeff);
    return f;
}

void GridFunction::set_aux(std::size_t j, double value)
{
    if (j >= aux_.size()) {
        throw ValidationError("auxiliary index " + std::to_string(j) + " out of range");
    }
    aux_[j] = value;
}

void GridFunction::add_atom(double lo, double hi, double coeff)
{
    const double T = grid_.length();
    if (lo < -slack(grid_) || hi > T + slack(grid_) || !(lo <= hi)) {
        throw ValidationError("interval (" + std::to_string(lo) + ", " + std::to_string(hi) +
                              "] is not inside [0, " + std::to_string(T) + "]");
    }
    lo = std::clamp(lo, 0.0, T);
    hi = std::clamp(hi, 0.0, T);
    if (hi == lo || coeff == 0.0) {
        return;
    }
    for (auto& atom : atoms_) {
        if (atom.lo == lo && atom.hi == hi) {
            atom.coeff += coeff;
            return;
        }
    }
    atoms_.push_back({lo, hi, coeff});
}

void GridFunction::add_cell_values(std::span<const double> values)
{
    if (values.size() != grid_.size()) {
        throw ValidationError("cell vector length mismatch");
    }
    if (values_.empty()) {
        values_.assign(values.begin(), values.end());
        return;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        values_[i] += values[i];
    }
}

std::vector<double> GridFunction::cell_averages() const
{
    std::vector<double> out = values_.empty() ? std::vector<double>(grid_.size(), 0.0) : values_;
    const double w = grid_.weight();
    for (const auto& atom : atoms_) {
        const std::size_t first = grid_.cell_of(atom.lo);
        const std::size_t last = grid_.cell_of(atom.hi);
        for (std::size_t i = first; i <= last; ++i) {
            const double left = grid_.cell_left(i);
            out[i] += atom.coeff * overlap(atom.lo, atom.hi, left, left + w) / w;
        }
    }
    return out;
}

double GridFunction::cell_integral(double a, double b) const
{
    if (values_.empty()) {
        return 0.0;
    }
    a = std::max(a, 0.0);
    b = std::min(b, grid_.length());
    if (!(b > a)) {
        return 0.0;
    }
    const double w = grid_.weight();
    const std::size_t i0 = grid_.cell_of(a);
    const std::size_t i1 = grid_.cell_of(b);
    if (i0 == i1) {
        return values_[i0] * (b - a);
    }
    double sum = values_[i0] * (grid_.cell_left(i0) + w - a);
    for (std::size_t i = i0 + 1; i < i1; ++i) {
        sum += values_[i] * w;
    }
    sum += values_[i1] * (b - grid_.cell_left(i1));
    return sum;
}

double GridFunction::integral(double a, double b) const
{
    double sum = cell_integral(a, b);
    for (const auto& atom : atoms_) {
        sum += atom.coeff * overlap(atom.lo, atom.hi, a, b);
    }
    return sum;
}

std::vector<Segment> GridFunction::segments() const
{
    std::vector<double> cuts;
    cuts.reserve(grid_.size() + 1 + 2 * atoms_.size());
    for (std::size_t i = 0; i <= grid_.size(); ++i) {
        cuts.push_back(i == grid_.size() ? grid_.length() : grid_.cell_left(i));
    }
    for (const auto& atom : atoms_) {
        cuts.push_back(atom.lo);
        cuts.push_back(atom.hi);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Segment> out;
    out.reserve(cuts.size());
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double lo = cuts[s];
        const double hi = cuts[s + 1];
        const double mid = 0.5 * (lo + hi);
        double value = values_.empty() ? 0.0 : values_[grid_.cell_of(mid)];
        for (const auto& atom : atoms_) {
            if (atom.lo < mid && mid < atom.hi) {
                value += atom.coeff;
            }
        }
        out.push_back({lo, hi, value});
    }
    return out;
}

double GridFunction::norm_sq() const { return inner(*this, *this); }

double GridFunction::norm() const { return std::sqrt(std::max(0.0, norm_sq())); }

void GridFunction::check_compatible(const GridFunction& other) const
{
    if (!(grid_ == other.grid_)) {
        throw ValidationError("grid functions live on different grids");
    }
    if (aux_.size() != other.aux_.size()) {
        throw ValidationError("auxiliary dimensions differ: " + std::to_string(aux_.size()) + " vs " +
                              std::to_string(other.aux_.size()));
    }
}

void GridFunction::axpy(double c, const GridFunction& other)
{
    check_compatible(other);
    if (!other.values_.empty()) {
        if (values_.empty()) {
            values_.assign(grid_.size(), 0.0);
        }
        for (std::size_t i = 0; i < values_.size(); ++i) {
            values_[i] += c * other.values_[i];
        }
    }
    for (const auto& atom : other.atoms_) {
        add_atom(atom.lo, atom.hi, c * atom.coeff);
    }
    for (std::size_t j = 0; j < aux_.size(); ++j) {
        aux_[j] += c * other.aux_[j];
    }
}

GridFunction& GridFunction::operator+=(const GridFunction& other)
{
    axpy(1.0, other);
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other)
{
    axpy(-1.0, other);
    return *this;
}

GridFunction& GridFunction::operator*=(double c)
{
    for (auto& v : values_) {
        v *= c;
    }
    for (auto& atom : atoms_) {
        atom.coeff *= c;
    }
    for (auto& a : aux_) {
        a *= c;
    }
    return *this;
}

double inner(const GridFunction& f, const GridFunction& g)
{
    if (!(f.grid() == g.grid())) {
        throw ValidationError("inner product of grid functions on different grids");
    }
    if (f.aux_dim() != g.aux_dim()) {
        throw ValidationError("inner product with mismatched auxiliary dimensions: " +
                              std::to_string(f.aux_dim()) + " vs " + std::to_string(g.aux_dim()));
    }
    double sum = 0.0;
    if (f.has_cell_part() && g.has_cell_part()) {
        const auto fv = f.values();
        const auto gv = g.values();
        double cells = 0.0;
        for (std::size_t i = 0; i < fv.size(); ++i) {
            cells += fv[i] * gv[i];
        }
        sum += cells * f.grid().weight();
    }
    for (const auto& a : f.atoms()) {
        sum += a.coeff * g.cell_integral(a.lo, a.hi);
        for (const auto& b : g.atoms()) {
            sum += a.coeff * b.coeff * overlap(a.lo, a.hi, b.lo, b.hi);
        }
    }
    for (const auto& b : g.atoms()) {
        sum += b.coeff * f.cell_integral(b.lo, b.hi);
    }
    const auto fa = f.aux();
    const auto ga = g.aux();
    for (std::size_t j = 0; j < fa.size(); ++j) {
        sum += fa[j] * ga[j];
    }
    return sum;
}

GridFunction indicator(const Grid& grid, double t, std::size_t aux_dim)
{
    if (t < -slack(grid) || t > grid.length() + slack(grid) || !std::isfinite(t)) {
        throw ValidationError("indicator time " + std::to_string(t) + " outside [0, " +
                              std::to_string(grid.length()) + "]");
    }
    return GridFunction::interval(grid, 0.0, std::clamp(t, 0.0, grid.length()), 1.0, aux_dim);
}

GridFunction aux_direction(const Grid& grid, std::size_t aux_dim, std::size_t j)
{
    GridFunction e(grid, aux_dim);
    e.set_aux(j, 1.0);
    return e;
}

}  // namespace silt
