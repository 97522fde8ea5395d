#pragma once

#include <cstddef>

namespace silt {

/// Uniform midpoint grid on [0, T] with n cells of width T/n.
class Grid {
public:
    Grid() = default;

    double length() const { return T_; }
    std::size_t size() const { return n_; }
    double weight() const { return T_ / static_cast<double>(n_); }
    double node(std::size_t i) const { return (static_cast<double>(i) + 0.5) * weight(); }
    double cell_left(std::size_t i) const { return static_cast<double>(i) * weight(); }

    /// Index of the cell containing t, clamped to [0, n-1].
    std::size_t cell_of(double t) const;

    bool operator==(const Grid& other) const = default;

    friend Grid make_grid(double T, std::size_t n);

private:
    Grid(double T, std::size_t n) : T_(T), n_(n) {}

    double T_ = 1.0;
    std::size_t n_ = 2;
};

/// Throws ValidationError unless T > 0 and n >= 2.
Grid make_grid(double T, std::size_t n);

}  // namespace silt
