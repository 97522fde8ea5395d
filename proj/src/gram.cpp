#include "silt/gram.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "silt/errors.hpp"

namespace silt {

TimeTuple::TimeTuple(std::vector<double> times, double min_gap) : times_(std::move(times)), min_gap_(min_gap)
{
    if (times_.size() < 2) {
        throw ValidationError("a time tuple needs at least two times");
    }
    if (!(min_gap_ > 0.0)) {
        throw ValidationError("min_gap must be positive");
    }
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        if (!std::isfinite(times_[i]) || !(times_[i + 1] - times_[i] >= min_gap_)) {
            std::ostringstream os;
            os << "times must increase with gaps >= " << min_gap_ << "; gap " << i + 1 << " is ("
               << times_[i] << ", " << times_[i + 1] << ")";
            throw ValidationError(os.str());
        }
    }
}

std::vector<double> TimeTuple::gaps() const
{
    std::vector<double> out(times_.size() - 1);
    for (std::size_t i = 0; i + 1 < times_.size(); ++i) {
        out[i] = times_[i + 1] - times_[i];
    }
    return out;
}

std::vector<GridFunction> gram_schmidt(const std::vector<GridFunction>& vectors)
{
    std::vector<GridFunction> basis;
    basis.reserve(vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        GridFunction v = vectors[j];
        const double original = v.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& e : basis) {
                v -= inner(e, v) * e;
            }
        }
        const double norm = v.norm();
        if (!(norm > 1e-12 * original) || norm == 0.0) {
            std::ostringstream os;
            os << "vector " << j + 1 << " is numerically dependent on its predecessors";
            throw DegenerateGramError(os.str());
        }
        v *= 1.0 / norm;
        basis.push_back(std::move(v));
    }
    return basis;
}

GramDecomposition decompose(const ProcessModel& model, const TimeTuple& tt)
{
    GramDecomposition dec;
    const std::size_t m = tt.size() - 1;
    dec.increments_.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        dec.increments_.push_back(model.increment(tt[i], tt[i + 1]));
    }
    const auto dim = static_cast<Eigen::Index>(m);
    dec.gram_.resize(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double a = inner(dec.increments_[static_cast<std::size_t>(i)],
                                   dec.increments_[static_cast<std::size_t>(j)]);
            dec.gram_(i, j) = a;
            dec.gram_(j, i) = a;
        }
    }

    auto degenerate = [&](const std::string& why) {
        const auto gaps = tt.gaps();
        const auto it = std::min_element(gaps.begin(), gaps.end());
        const auto idx = static_cast<std::size_t>(it - gaps.begin());
        std::ostringstream os;
        os << "degenerate configuration (" << why << "); smallest gap is gap " << idx + 1 << " = " << *it
           << " between t=" << tt[idx] << " and t=" << tt[idx + 1];
        return DegenerateGramError(os.str());
    };

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dec.gram_, Eigen::EigenvaluesOnly);
    dec.eigenvalues_ = eig.eigenvalues();
    const double lmin = dec.eigenvalues_.minCoeff();
    const double lmax = dec.eigenvalues_.maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > GramDecomposition::max_condition) {
        std::ostringstream os;
        os << "Gram condition number " << (lmin > 0.0 ? lmax / lmin : INFINITY) << " exceeds "
           << GramDecomposition::max_condition;
        throw degenerate(os.str());
    }

    dec.ldlt_.compute(dec.gram_);
    if (dec.ldlt_.info() != Eigen::Success || !dec.ldlt_.isPositive()) {
        throw degenerate("LDL^T factorization failed");
    }
    dec.gamma_ = dec.ldlt_.vectorD().prod();

    try {
        dec.ortho_ = gram_schmidt(dec.increments_);
    } catch (const DegenerateGramError& e) {
        throw degenerate(e.what());
    }
    return dec;
}

Eigen::VectorXd GramDecomposition::coeffs(const GridFunction& h) const
{
    Eigen::VectorXd u(static_cast<Eigen::Index>(increments_.size()));
    for (std::size_t i = 0; i < increments_.size(); ++i) {
        u(static_cast<Eigen::Index>(i)) = inner(increments_[i], h);
    }
    return u;
}

Eigen::VectorXd GramDecomposition::ortho_coeffs(const GridFunction& h) const
{
    Eigen::VectorXd c(static_cast<Eigen::Index>(ortho_.size()));
    for (std::size_t i = 0; i < ortho_.size(); ++i) {
        c(static_cast<Eigen::Index>(i)) = inner(ortho_[i], h);
    }
    return c;
}

double GramDecomposition::quadratic_form(const Eigen::VectorXd& u) const
{
    return u.dot(ldlt_.solve(u));
}

std::pair<double, double> GramDecomposition::shifted_form(const Eigen::VectorXd& u, double eps) const
{
    const auto dim = gram_.rows();
    const Eigen::MatrixXd shifted = gram_ + eps * Eigen::MatrixXd::Identity(dim, dim);
    const Eigen::LDLT<Eigen::MatrixXd> f(shifted);
    return {u.dot(f.solve(u)), f.vectorD().prod()};
}

ProjectionPair projection_pair(const GramDecomposition& dec, const GridFunction& h)
{
    ProjectionPair p;
    p.quadratic_form = dec.quadratic_form(dec.coeffs(h));
    p.ortho_coeffs = dec.ortho_coeffs(h);
    p.ortho_sum = p.ortho_coeffs.squaredNorm();
    return p;
}

double projection_norm_sq(const GramDecomposition& dec, const GridFunction& h)
{
    const ProjectionPair p = projection_pair(dec, h);
    const double tol = 1e-8 * (1.0 + h.norm_sq());
    if (std::abs(p.quadratic_form - p.ortho_sum) > tol) {
        std::ostringstream os;
        os << "projection self-check failed: A^{-1}(u,u) = " << p.quadratic_form
           << " but orthonormal sum = " << p.ortho_sum << " (cond " << dec.condition_number() << ")";
        throw ConsistencyError(os.str());
    }
    return p.quadratic_form;
}

double subset_projection_norm_sq(const GramDecomposition& dec, const std::vector<std::size_t>& subset,
                                 const GridFunction& h)
{
    double sum = 0.0;
    for (const std::size_t i : subset) {
        if (i >= dec.dimension()) {
            std::ostringstream os;
            os << "subset index " << i + 1 << " out of range 1.." << dec.dimension();
            throw ValidationError(os.str());
        }
        const double c = inner(dec.ortho()[i], h);
        sum += c * c;
    }
    return sum;
}

double single_interval_projection(const ProcessModel& model, double s, double t, const GridFunction& h)
{
    const GridFunction dg = model.increment(s, t);
    const double nsq = dg.norm_sq();
    if (!(nsq > 0.0)) {
        std::ostringstream os;
        os << "increment over (" << s << ", " << t << "] has zero norm";
        throw DegenerateGramError(os.str());
    }
    const double c = inner(h, dg);
    return c * c / nsq;
}

}  // namespace silt
