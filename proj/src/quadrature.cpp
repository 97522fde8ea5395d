#include "silt/quadrature.hpp"

#include <algorithm>

#include "silt/errors.hpp"
#include "silt/numerics.hpp"

namespace silt {

namespace {

void append_gauss(Rule1D& rule, double lo, double hi, int order)
{
    const GaussRule& g = gauss_legendre(order);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        rule.nodes.push_back(mid + half * g.nodes[i]);
        rule.weights.push_back(half * g.weights[i]);
    }
}

}  // namespace

Rule1D graded_rule(double lo, double hi, double grading, int order)
{
    if (!(lo > 0.0)) {
        throw ValidationError("graded rule needs a positive lower limit");
    }
    if (!(grading > 1.0)) {
        throw ValidationError("grading factor must exceed 1");
    }
    Rule1D rule;
    double b = hi;
    while (b / grading > lo) {
        append_gauss(rule, b / grading, b, order);
        b /= grading;
    }
    if (b > lo) {
        append_gauss(rule, lo, b, order);
    }
    return rule;
}

Rule1D uniform_rule(double lo, double hi, int panels, int order)
{
    Rule1D rule;
    if (!(hi > lo)) {
        return rule;
    }
    const double width = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        append_gauss(rule, lo + p * width, p + 1 == panels ? hi : lo + (p + 1) * width, order);
    }
    return rule;
}

namespace {

struct Walker {
    const GapCubature& c;
    const SimplexIntegrand& f;

    Rule1D gap_rule(double room, std::size_t remaining_after) const
    {
        if (c.extrapolate_floor) {
            Rule1D rule;
            if (room <= 0.0) {
                return rule;
            }
            rule.nodes.push_back(c.floor);
            rule.weights.push_back(std::min(c.floor, room));
            if (room > c.floor) {
                const Rule1D graded = graded_rule(c.floor, room, c.grading, c.order);
                rule.nodes.insert(rule.nodes.end(), graded.nodes.begin(), graded.nodes.end());
                rule.weights.insert(rule.weights.end(), graded.weights.begin(), graded.weights.end());
            }
            return rule;
        }
        const double hi = room - static_cast<double>(remaining_after) * c.floor;
        if (!(hi > c.floor)) {
            return {};
        }
        return graded_rule(c.floor, hi, c.grading, c.order);
    }

    double innermost(std::vector<double>& gaps) const
    {
        double used = 0.0;
        for (const double g : gaps) {
            used += g;
        }
        const double length = c.T - used;
        if (!(length > 0.0)) {
            return 0.0;
        }
        const Rule1D rule = uniform_rule(0.0, length, c.t1_panels, c.order);
        std::vector<double> times(c.k);
        std::vector<double> terms(rule.nodes.size());
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            times[0] = rule.nodes[q];
            for (std::size_t i = 0; i < gaps.size(); ++i) {
                times[i + 1] = times[i] + gaps[i];
            }
            times.back() = std::min(times.back(), c.T);
            terms[q] = rule.weights[q] * f(times);
        }
        return pairwise_sum(terms);
    }

    double level(std::vector<double>& gaps, std::size_t depth, double room) const
    {
        if (depth + 1 == c.k) {
            return innermost(gaps);
        }
        const Rule1D rule = gap_rule(room, c.k - 2 - depth);
        std::vector<double> terms(rule.nodes.size());
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            gaps[depth] = rule.nodes[q];
            terms[q] = rule.weights[q] * level(gaps, depth + 1, room - rule.nodes[q]);
        }
        return pairwise_sum(terms);
    }
};

}  // namespace

double integrate_simplex(const GapCubature& c, const SimplexIntegrand& f)
{
    if (c.k < 2) {
        throw ValidationError("simplex cubature needs k >= 2");
    }
    if (!(c.floor > 0.0) || !(c.T > 0.0)) {
        throw ValidationError("simplex cubature needs positive floor and length");
    }
    const Walker walker{c, f};
    const Rule1D outer = walker.gap_rule(c.T, c.k - 2);
    std::vector<double> terms(outer.nodes.size());
    parallel_for(outer.nodes.size(), [&](std::size_t q) {
        std::vector<double> gaps(c.k - 1);
        gaps[0] = outer.nodes[q];
        terms[q] = outer.weights[q] * walker.level(gaps, 1, c.T - outer.nodes[q]);
    });
    return pairwise_sum(terms);
}

}  // namespace silt
