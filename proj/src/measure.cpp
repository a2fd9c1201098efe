#include "qg/measure.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "qg/errors.hpp"

namespace qg {

std::vector<double> default_eps_ladder() {
    return {1e-2, 5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4};
}

namespace {

// 16-point Gauss-Legendre rule on [-1, 1], computed once by Newton
// iteration on P_16.
struct GaussRule {
    std::array<double, 16> x{}, w{};
    GaussRule() {
        constexpr int n = 16;
        for (int i = 0; i < n / 2; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                const double dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = -t;
            x[n - 1 - i] = t;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};
const GaussRule& gauss16() {
    static const GaussRule r;
    return r;
}

// Adaptive bisection quadrature: a segment is accepted when its one-panel
// Gauss estimate agrees with the sum over its halves.
template <typename Value, typename F, typename Norm>
Value adaptive_quad(const F& f, Norm norm, double a, double b, double tol,
                    const Value& zero) {
    const auto& g = gauss16();
    auto panel = [&](double lo, double hi) {
        Value acc = zero;
        const double h = 0.5 * (hi - lo), c = 0.5 * (lo + hi);
        for (int i = 0; i < 16; ++i) acc += (h * g.w[i]) * f(c + h * g.x[i]);
        return acc;
    };
    struct Seg {
        double a, b;
        Value whole;
        int depth;
    };
    std::vector<Seg> stack{{a, b, panel(a, b), 0}};
    Value total = zero;
    long evals = 0;
    while (!stack.empty()) {
        Seg s = std::move(stack.back());
        stack.pop_back();
        const double mid = 0.5 * (s.a + s.b);
        const Value left = panel(s.a, mid), right = panel(mid, s.b);
        evals += 2;
        if (evals > 100000)
            throw NumericalError("adaptive quadrature exceeded the subdivision budget");
        const Value sum = left + right;
        if (norm(sum - s.whole) < tol || s.depth >= 48) {
            total += sum;
        } else {
            stack.push_back({s.a, mid, left, s.depth + 1});
            stack.push_back({mid, s.b, right, s.depth + 1});
        }
    }
    return total;
}

}  // namespace

Eigen::MatrixXcd stieltjes_lhs(const ReductionContext& ctx, double a, double b,
                               double eps, double quad_tol) {
    if (!(a < b)) throw ValidationError("stieltjes_lhs: interval endpoints must satisfy a < b");
    if (eps <= 0.0) throw ValidationError("stieltjes_lhs: eps must be positive");
    const double delta = 1e-4 * (b - a);
    const int r = static_cast<int>(ctx.basis.cols());
    const Eigen::MatrixXcd zero = Eigen::MatrixXcd::Zero(r, r);
    const cplx two_pi_i(0.0, 2.0 * M_PI);

    auto f = [&](double x) -> Eigen::MatrixXcd {
        const Eigen::MatrixXcd N = ctx.weyl_inverse_N(cplx(x, eps));
        return (N - N.adjoint().eval()) / two_pi_i;
    };
    Eigen::MatrixXcd out =
        adaptive_quad<Eigen::MatrixXcd>(f, [](const Eigen::MatrixXcd& m) { return m.norm(); },
                                        a + delta, b - delta, quad_tol, zero);
    return 0.5 * (out + out.adjoint().eval());
}

Eigen::MatrixXcd stieltjes_rhs(const ReductionContext& ctx, double a, double b) {
    const int r = static_cast<int>(ctx.T.rows());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(r, r);
    if (r == 0) return out;
    const KInterval K = locate_K(ctx);
    if (K.empty) return out;

    const double mlo = ctx.m_real(K.lo), mhi = ctx.m_real(K.hi);
    const double lo_val = std::min(mlo, mhi), hi_val = std::max(mlo, mhi);

    for (int k = 0; k < ctx.Teig.eigenvalues.size(); ++k) {
        const double lambda = ctx.Teig.eigenvalues(k);
        if (lambda < lo_val - 1e-9 || lambda > hi_val + 1e-9) continue;
        const double z = preimage(ctx, K, lambda);
        // preimage on the gap boundary: the atom belongs to the reference
        // spectrum, not to the measure on J
        if (std::abs(z - ctx.gap_a) < 1e-9 * (1.0 + std::abs(ctx.gap_a)) ||
            std::abs(z - ctx.gap_b) < 1e-9 * (1.0 + std::abs(ctx.gap_b)))
            continue;
        // an atom exactly on dB makes the measure of B ill-defined
        if (std::abs(z - a) < 1e-9 * (1.0 + std::abs(a)) ||
            std::abs(z - b) < 1e-9 * (1.0 + std::abs(b)))
            throw NumericalError(
                "stieltjes_rhs: spectral atom sits on the boundary of B");
        if (z <= a || z >= b) continue;
        const double weight = ctx.n_real(z) / ctx.m_prime_real(z);
        const Eigen::VectorXcd v = ctx.Teig.eigenvectors.col(k);
        out += weight * (v * v.adjoint());
    }
    return 0.5 * (out + out.adjoint().eval());
}

MeasureReport measure_check(const ReductionContext& ctx, double a, double b,
                            const std::vector<double>& ladder) {
    if (ladder.size() < 2) throw ValidationError("measure_check: ladder needs >= 2 rungs");
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (!(ladder[i] < ladder[i - 1]))
            throw ValidationError("measure_check: eps ladder must be strictly decreasing");

    MeasureReport rep;
    rep.rhs = stieltjes_rhs(ctx, a, b);
    const double rhs_norm = rep.rhs.norm();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rep.rhs);
    rep.rhs_min_eigenvalue = es.eigenvalues().size() ? es.eigenvalues().minCoeff() : 0.0;

    std::vector<Eigen::MatrixXcd> lhs;
    for (double eps : ladder) {
        lhs.push_back(stieltjes_lhs(ctx, a, b, eps));
        rep.eps.push_back(eps);
        rep.discrepancy.push_back((lhs.back() - rep.rhs).norm());
    }
    for (std::size_t i = 2; i < rep.discrepancy.size(); ++i)
        if (rep.discrepancy[i] > rep.discrepancy[i - 1] + 1e-12 * (1.0 + rhs_norm))
            rep.monotone = false;

    const std::size_t n = ladder.size();
    const double ratio = ladder[n - 2] / ladder[n - 1];
    rep.extrapolated = (ratio * lhs[n - 1] - lhs[n - 2]) / (ratio - 1.0);
    rep.extrapolated_discrepancy = (rep.extrapolated - rep.rhs).norm();
    return rep;
}

KernelReport k_I_check(const ReductionContext& ctx, double Ia, double Ib,
                       double lambda, const std::vector<double>& ladder) {
    if (!(Ia < Ib)) throw ValidationError("k_I_check: interval endpoints must satisfy a < b");
    KernelReport rep;

    // classify lambda against m([Ia, Ib]) on a fine grid
    const int N = 512;
    const double m_a = ctx.m_real(Ia), m_b = ctx.m_real(Ib);
    double m_min = std::min(m_a, m_b), m_max = std::max(m_a, m_b);
    std::vector<double> mg(N + 1);
    for (int i = 0; i <= N; ++i) {
        mg[i] = ctx.m_real(Ia + (Ib - Ia) * i / N);
        m_min = std::min(m_min, mg[i]);
        m_max = std::max(m_max, mg[i]);
    }
    const double btol = 1e-9 * (1.0 + std::abs(lambda));

    auto root_in = [&](double lo, double hi) {
        double flo = ctx.m_real(lo) - lambda;
        while (hi - lo > 1e-13 * (1.0 + std::abs(lo))) {
            const double mid = 0.5 * (lo + hi);
            const double fm = ctx.m_real(mid) - lambda;
            if ((flo < 0.0) != (fm < 0.0))
                hi = mid;
            else {
                lo = mid;
                flo = fm;
            }
        }
        return 0.5 * (lo + hi);
    };

    if (std::abs(lambda - m_a) <= btol || std::abs(lambda - m_b) <= btol) {
        rep.placement = "boundary";
        const double z = std::abs(lambda - m_a) <= btol ? Ia : Ib;
        rep.limit = 0.5 * ctx.n_real(z) / ctx.m_prime_real(z);
    } else if (lambda > m_min + btol && lambda < m_max - btol) {
        rep.placement = "interior";
        double z = 0.0;
        bool found = false;
        for (int i = 0; i < N && !found; ++i)
            if ((mg[i] - lambda < 0.0) != (mg[i + 1] - lambda < 0.0)) {
                z = root_in(Ia + (Ib - Ia) * i / N, Ia + (Ib - Ia) * (i + 1) / N);
                found = true;
            }
        if (!found) throw NumericalError("k_I_check: no preimage found for interior lambda");
        rep.limit = ctx.n_real(z) / ctx.m_prime_real(z);
    } else {
        rep.placement = "exterior";
        rep.limit = 0.0;
    }

    for (double eps : ladder) {
        auto f = [&](double x) {
            const cplx zc(x, eps);
            return std::imag(ctx.n(zc) / (lambda - ctx.m(zc))) / M_PI;
        };
        const double val = adaptive_quad<double>(
            f, [](double v) { return std::abs(v); }, Ia, Ib, 1e-10, 0.0);
        rep.eps.push_back(eps);
        rep.values.push_back(val);
    }
    rep.final_deviation = std::abs(rep.values.back() - rep.limit);
    return rep;
}

}  // namespace qg
