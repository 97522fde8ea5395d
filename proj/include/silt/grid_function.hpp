#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "silt/grid.hpp"

namespace silt {

/// coeff * 1I_{(lo, hi]}, kept exactly instead of being rounded onto cells.
struct IntervalAtom {
    double lo;
    double hi;
    double coeff;
};

/// A constant piece of the L2 part of a GridFunction.
struct Segment {
    double lo;
    double hi;
    double value;
};

/// Element of L2([0,T]) (+) R^m.
///
/// The L2 part is a cellwise-constant function on the grid plus a short list
/// of interval atoms. Atoms let indicators 1I_{[0,t]} and increments
/// 1I_{(s,t]} be represented exactly for arbitrary s, t, so Wiener
/// covariances and increment Gram matrices carry no discretization error,
/// even for gaps far below the cell width. The auxiliary block holds
/// coefficients on m directions orthonormal to L2 and to each other.
///
/// An empty cell vector stands for the zero cell part.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(const Grid& grid, std::size_t aux_dim = 0);

    static GridFunction from_values(const Grid& grid, std::vector<double> values,
                                    std::vector<double> aux = {});
    static GridFunction interval(const Grid& grid, double lo, double hi, double coeff = 1.0,
                                 std::size_t aux_dim = 0);

    const Grid& grid() const { return grid_; }
    std::size_t aux_dim() const { return aux_.size(); }
    bool has_cell_part() const { return !values_.empty(); }

    std::span<const double> values() const { return values_; }
    const std::vector<IntervalAtom>& atoms() const { return atoms_; }
    std::span<const double> aux() const { return aux_; }

    void set_aux(std::size_t j, double value);
    void add_atom(double lo, double hi, double coeff);
    /// Adds `values` to the cell part (length must equal grid size).
    void add_cell_values(std::span<const double> values);

    /// Cell averages of the L2 part; atoms contribute their covered fraction.
    std::vector<double> cell_averages() const;

    /// Integral over [a, b] of the L2 part, exact for the representation.
    double integral(double a, double b) const;

    /// Same, restricted to the cell part (atoms ignored).
    double cell_integral(double a, double b) const;

    /// Piecewise-constant breakdown of the L2 part over [0, T], in order.
    std::vector<Segment> segments() const;

    double norm_sq() const;
    double norm() const;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double c);

    friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
    friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
    friend GridFunction operator*(double c, GridFunction a) { return a *= c; }
    friend GridFunction operator*(GridFunction a, double c) { return a *= c; }

private:
    void check_compatible(const GridFunction& other) const;
    void axpy(double c, const GridFunction& other);

    Grid grid_;
    std::vector<double> values_;
    std::vector<IntervalAtom> atoms_;
    std::vector<double> aux_;
};

/// L2 inner product plus the Euclidean product of auxiliary coordinates.
/// Throws ValidationError on mismatched grids or auxiliary dimensions.
double inner(const GridFunction& f, const GridFunction& g);

/// 1I_{[0,t]}; throws for t outside [0, T].
GridFunction indicator(const Grid& grid, double t, std::size_t aux_dim = 0);

/// The j-th auxiliary unit vector e_j (+) 0.
GridFunction aux_direction(const Grid& grid, std::size_t aux_dim, std::size_t j);

/// Samples f at the cell midpoints.
template <typename F>
GridFunction sample(const Grid& grid, F&& f, std::size_t aux_dim = 0)
{
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = f(grid.node(i));
    }
    return GridFunction::from_values(grid, std::move(values), std::vector<double>(aux_dim, 0.0));
}

}  // namespace silt
