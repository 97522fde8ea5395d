#include "silt/nondeterminism.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "silt/errors.hpp"

namespace silt {

namespace {

Eigen::MatrixXd gram_of(const std::vector<GridFunction>& v)
{
    const auto n = static_cast<Eigen::Index>(v.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            g(i, j) = g(j, i) = inner(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
        }
    }
    return g;
}

double spd_det(const Eigen::MatrixXd& m)
{
    if (m.rows() == 0) {
        return 1.0;
    }
    const Eigen::LDLT<Eigen::MatrixXd> f(m);
    return std::max(0.0, f.vectorD().prod());
}

std::vector<GridFunction> increments_of(const ProcessModel& model, const TimeTuple& tt)
{
    std::vector<GridFunction> out;
    for (std::size_t i = 0; i + 1 < tt.size(); ++i) {
        out.push_back(model.increment(tt[i], tt[i + 1]));
    }
    return out;
}

void check_subset(const std::vector<std::size_t>& subset, std::size_t m)
{
    for (const auto i : subset) {
        if (i >= m) {
            std::ostringstream os;
            os << "subset index " << i + 1 << " out of range 1.." << m;
            throw ValidationError(os.str());
        }
    }
}

}  // namespace

double normalized_gram_det(const std::vector<GridFunction>& vectors)
{
    std::vector<GridFunction> unit;
    unit.reserve(vectors.size());
    for (const auto& v : vectors) {
        const double n = v.norm();
        if (!(n > 0.0)) {
            throw DegenerateGramError("zero vector in normalized Gram determinant");
        }
        unit.push_back((1.0 / n) * v);
    }
    Eigen::MatrixXd g = gram_of(unit);
    g.diagonal().setOnes();
    return std::min(1.0, spd_det(g));
}

double slnd_ratio(const ProcessModel& model, const TimeTuple& tt, const std::vector<std::size_t>& subset)
{
    const auto inc = increments_of(model, tt);
    check_subset(subset, inc.size());
    if (subset.empty()) {
        return 1.0;
    }
    std::vector<GridFunction> complement;
    for (std::size_t i = 0; i < inc.size(); ++i) {
        if (std::find(subset.begin(), subset.end(), i) == subset.end()) {
            complement.push_back(inc[i]);
        }
    }
    const double denom = normalized_gram_det(complement);
    if (!(denom > 0.0)) {
        throw DegenerateGramError("complement Gram determinant vanishes");
    }
    return normalized_gram_det(inc) / denom;
}

ScanReport slnd_scan(const ProcessModel& model, const TimeTuple& base, const std::vector<std::size_t>& subset,
                     const std::vector<double>& gaps, double tol)
{
    check_subset(subset, base.size() - 1);
    ScanReport report;
    report.tol = tol;
    for (const double gap : gaps) {
        std::vector<double> times = base.times();
        for (std::size_t i = 0; i + 1 < times.size(); ++i) {
            if (std::find(subset.begin(), subset.end(), i) == subset.end()) {
                continue;
            }
            times[i + 1] = times[i] + gap;
            if (i + 2 < times.size() && !(times[i + 1] < times[i + 2])) {
                std::ostringstream os;
                os << "shrunk gap " << i + 1 << " (" << gap << ") collides with t=" << times[i + 2];
                throw ValidationError(os.str());
            }
        }
        report.gaps.push_back(gap);
        report.values.push_back(slnd_ratio(model, TimeTuple(times, base.min_gap()), subset));
    }
    report.limit_reached = !report.values.empty() && std::abs(report.values.back() - 1.0) < tol;
    return report;
}

double berman_stat(const ProcessModel& model, const TimeTuple& tt)
{
    std::vector<GridFunction> vectors;
    vectors.push_back(model.factor(tt[0]));
    if (!(vectors.back().norm_sq() > 0.0)) {
        throw DegenerateGramError("Var x(t_1) = 0; Berman's statistic needs t_1 with positive variance");
    }
    for (std::size_t i = 0; i + 1 < tt.size(); ++i) {
        vectors.push_back(model.increment(tt[i], tt[i + 1]));
    }
    return normalized_gram_det(vectors);
}

ScanReport berman_scan(const ProcessModel& model, const TimeTuple& base, const std::vector<double>& window,
                       double tol)
{
    ScanReport report;
    report.tol = tol;
    const double span = base.times().back() - base[0];
    for (const double w : window) {
        std::vector<double> times = base.times();
        for (auto& t : times) {
            t = base[0] + (t - base[0]) * (w / span);
        }
        report.gaps.push_back(w);
        report.values.push_back(berman_stat(model, TimeTuple(times, base.min_gap() * std::min(1.0, w / span))));
    }
    report.limit_reached = !report.values.empty() && report.values.back() >= 1.0 - tol;
    return report;
}

double conditional_variance_ratio(const ProcessModel& model, const TimeTuple& tt, std::size_t i)
{
    const auto inc = increments_of(model, tt);
    check_subset({i}, inc.size());
    std::vector<GridFunction> others;
    for (std::size_t j = 0; j < inc.size(); ++j) {
        if (j != i) {
            others.push_back(inc[j]);
        }
    }
    const double without = spd_det(gram_of(others));
    if (!(without > 0.0)) {
        throw DegenerateGramError("remaining increments are linearly dependent");
    }
    return spd_det(gram_of(inc)) / (without * inc[i].norm_sq());
}

double projection_decay(const ProcessModel& model, double t1, double t2, const GridFunction& h)
{
    return std::sqrt(single_interval_projection(model, t1, t2, h));
}

ScanReport projection_decay_scan(const ProcessModel& model, double t1, const GridFunction& h,
                                 const std::vector<double>& gaps, double tol)
{
    ScanReport report;
    report.tol = tol;
    for (const double gap : gaps) {
        report.gaps.push_back(gap);
        report.values.push_back(projection_decay(model, t1, t1 + gap, h));
    }
    report.limit_reached = !report.values.empty() && report.values.back() < tol;
    return report;
}

}  // namespace silt
