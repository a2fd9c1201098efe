#include "qg/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qg/errors.hpp"

namespace qg {

Potential Potential::zero() { return Potential{}; }

Potential Potential::polynomial(std::vector<double> coefficients) {
    Potential p;
    p.kind_ = Kind::Polynomial;
    p.coeffs_ = std::move(coefficients);
    return p;
}

Potential Potential::table(std::vector<double> xs, std::vector<double> values) {
    if (xs.size() != values.size())
        throw ValidationError("potential table: x and value counts differ");
    if (xs.size() < 2)
        throw ValidationError("potential table: need at least 2 samples");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw ValidationError("potential table: x samples must strictly increase");
    Potential p;
    p.kind_ = Kind::Table;
    p.xs_ = std::move(xs);
    p.vs_ = std::move(values);
    if (p.xs_.size() >= 4) p.build_spline();
    return p;
}

void Potential::build_spline() {
    // natural cubic spline: tridiagonal solve for second derivatives
    const std::size_t n = xs_.size();
    spline_m_.assign(n, 0.0);
    std::vector<double> u(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double sig = (xs_[i] - xs_[i - 1]) / (xs_[i + 1] - xs_[i - 1]);
        const double p = sig * spline_m_[i - 1] + 2.0;
        spline_m_[i] = (sig - 1.0) / p;
        const double d = (vs_[i + 1] - vs_[i]) / (xs_[i + 1] - xs_[i]) -
                         (vs_[i] - vs_[i - 1]) / (xs_[i] - xs_[i - 1]);
        u[i] = (6.0 * d / (xs_[i + 1] - xs_[i - 1]) - sig * u[i - 1]) / p;
    }
    for (std::size_t k = n - 1; k-- > 1;)
        spline_m_[k] = spline_m_[k] * spline_m_[k + 1] + u[k];
    spline_m_[0] = spline_m_[n - 1] = 0.0;
}

double Potential::operator()(double x) const {
    switch (kind_) {
        case Kind::Zero:
            return 0.0;
        case Kind::Polynomial: {
            double acc = 0.0;
            for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
            return acc;
        }
        case Kind::Table: {
            const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
            std::size_t hi = static_cast<std::size_t>(it - xs_.begin());
            if (hi == 0) hi = 1;
            if (hi >= xs_.size()) hi = xs_.size() - 1;
            const std::size_t lo = hi - 1;
            const double h = xs_[hi] - xs_[lo];
            const double a = (xs_[hi] - x) / h;
            const double b = (x - xs_[lo]) / h;
            double y = a * vs_[lo] + b * vs_[hi];
            if (!spline_m_.empty())
                y += ((a * a * a - a) * spline_m_[lo] + (b * b * b - b) * spline_m_[hi]) *
                     (h * h) / 6.0;
            return y;
        }
    }
    return 0.0;
}

double Potential::domain_min() const {
    return kind_ == Kind::Table ? xs_.front() : -std::numeric_limits<double>::infinity();
}

double Potential::domain_max() const {
    return kind_ == Kind::Table ? xs_.back() : std::numeric_limits<double>::infinity();
}

void Potential::validate_for_length(double l) const {
    if (kind_ != Kind::Table) return;
    const double tol = 1e-12 * (1.0 + std::abs(l));
    if (xs_.front() > tol || xs_.back() < l - tol)
        throw ValidationError("potential table does not cover [0, l]");
}

}  // namespace qg
