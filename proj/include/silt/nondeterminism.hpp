#pragma once

#include <cstddef>
#include <vector>

#include "silt/gram.hpp"

namespace silt {

/// Gram determinant of the normalized vectors v_i / ||v_i||; 1 for an
/// empty family. Lies in [0, 1].
double normalized_gram_det(const std::vector<GridFunction>& vectors);

/// Gamma / (G(dg_i, i not in M) prod_{i in M} ||dg_i||^2), evaluated as
/// G(normalized all) / G(normalized complement). M holds 0-based increment
/// indices; an empty M gives 1.
double slnd_ratio(const ProcessModel& model, const TimeTuple& tt, const std::vector<std::size_t>& subset);

struct ScanReport {
    std::vector<double> gaps;
    std::vector<double> values;
    double tol = 0.05;
    bool limit_reached = false;  ///< |value - target| < tol at the smallest gap
};

/// Shrinks every gap i in M to each value of `gaps` (t_{i+1} := t_i + gap,
/// in index order; times outside M keep their place) and records slnd_ratio.
/// Throws ValidationError when a shrunk gap collides with the next time.
ScanReport slnd_scan(const ProcessModel& model, const TimeTuple& base, const std::vector<std::size_t>& subset,
                     const std::vector<double>& gaps, double tol = 0.05);

/// Gram determinant of g(t_1)/||g(t_1)|| and dg_i/||dg_i||, i = 1..m-1.
double berman_stat(const ProcessModel& model, const TimeTuple& tt);

/// Rescales the window t_m - t_1 of `base` to each value of `window` about
/// t_1 and records berman_stat; limit_reached when stat >= 1 - tol at the
/// smallest window.
ScanReport berman_scan(const ProcessModel& model, const TimeTuple& base, const std::vector<double>& window,
                       double tol = 0.05);

/// Var(dx_i | dx_j, j != i) / Var(dx_i) = Gamma / (Gamma_without_i ||dg_i||^2).
/// i is 0-based.
double conditional_variance_ratio(const ProcessModel& model, const TimeTuple& tt, std::size_t i);

/// |(h, dg)| / ||dg|| for dg = g(t2) - g(t1).
double projection_decay(const ProcessModel& model, double t1, double t2, const GridFunction& h);

/// projection_decay(t1, t1 + gap) for each gap; limit_reached when the value
/// at the smallest gap is below tol.
ScanReport projection_decay_scan(const ProcessModel& model, double t1, const GridFunction& h,
                                 const std::vector<double>& gaps, double tol = 0.05);

}  // namespace silt
