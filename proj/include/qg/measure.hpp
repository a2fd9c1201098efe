#ifndef QG_MEASURE_HPP
#define QG_MEASURE_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qg/weyl.hpp"

namespace qg {

// Default epsilon ladder 1e-2 ... 1e-4, strictly decreasing.
std::vector<double> default_eps_ladder();

// (1/2pi i) Int_{a+delta}^{b-delta} (N(x+i eps) - N(x-i eps)) dx with
// N(z) = -(M_P(z) - alpha I)^{-1} from the full deck Weyl matrix and
// N(x-i eps) = N(x+i eps)^*. delta = 1e-4 (b-a). Result symmetrized to
// its Hermitian part. Adaptive bisection Gauss-Legendre quadrature;
// throws NumericalError past the subdivision budget.
Eigen::MatrixXcd stieltjes_lhs(const ReductionContext& ctx, double a, double b,
                               double eps, double quad_tol = 1e-10);

// Spectral assembly of P* n(R) m'(R)^{-1} E_R(B) P: each eigenpair
// (lambda_k, v_k) of T whose preimage z_k lies in (a,b) contributes
// n(z_k)/m'(z_k) v_k v_k^*.
Eigen::MatrixXcd stieltjes_rhs(const ReductionContext& ctx, double a, double b);

struct MeasureReport {
    std::vector<double> eps;
    std::vector<double> discrepancy;      // ||lhs(eps) - rhs|| per rung
    Eigen::MatrixXcd rhs;
    Eigen::MatrixXcd extrapolated;        // first-order Richardson, last two rungs
    double extrapolated_discrepancy = 0.0;
    double rhs_min_eigenvalue = 0.0;
    bool monotone = true;                 // non-increasing after the first rung
};

MeasureReport measure_check(const ReductionContext& ctx, double a, double b,
                            const std::vector<double>& ladder = default_eps_ladder());

struct KernelReport {
    std::vector<double> eps;
    std::vector<double> values;     // Re k_I(lambda, eps) per rung
    std::string placement;          // "interior", "boundary", "exterior"
    double limit = 0.0;             // analytic limit for the classification
    double final_deviation = 0.0;   // |value(last eps) - limit|
};

// Scalar kernel k_I(lambda, eps) = (1/pi) Int_I Im[ n(x+i eps) /
// (lambda - m(x+i eps)) ] dx, with the classified limit: n/m' at the
// preimage inside m((a,b)), half that at m(a) or m(b), zero outside.
KernelReport k_I_check(const ReductionContext& ctx, double Ia, double Ib,
                       double lambda,
                       const std::vector<double>& ladder = default_eps_ladder());

}  // namespace qg

#endif
