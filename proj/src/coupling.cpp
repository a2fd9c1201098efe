#include "qg/coupling.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qg/errors.hpp"
#include "qg/graph.hpp"

namespace qg {

using cplx = std::complex<double>;

namespace {
constexpr double kUnitaryTol = 1e-12;
constexpr double kClusterTol = 1e-10;  // eigenvalue clustering at -1

Eigen::MatrixXcd ones(int n) { return Eigen::MatrixXcd::Ones(n, n); }
Eigen::MatrixXcd eye(int n) { return Eigen::MatrixXcd::Identity(n, n); }
}  // namespace

CouplingSpec CouplingSpec::delta(double alpha) {
    CouplingSpec c;
    c.kind = Kind::Delta;
    c.alpha = alpha;
    return c;
}

CouplingSpec CouplingSpec::delta_prime(double beta) {
    if (beta == 0.0) throw ValidationError("delta_prime coupling requires beta != 0");
    CouplingSpec c;
    c.kind = Kind::DeltaPrime;
    c.beta = beta;
    return c;
}

CouplingSpec CouplingSpec::delta_prime_s(double alpha) {
    CouplingSpec c;
    c.kind = Kind::DeltaPrimeS;
    c.alpha = alpha;
    return c;
}

CouplingSpec CouplingSpec::custom_ab(Eigen::MatrixXcd A, Eigen::MatrixXcd B) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw ValidationError("custom_AB matrices must be square and equally sized");
    CouplingSpec c;
    c.kind = Kind::CustomAB;
    c.A = std::move(A);
    c.B = std::move(B);
    return c;
}

CouplingSpec CouplingSpec::custom_u(Eigen::MatrixXcd U) {
    if (U.rows() != U.cols()) throw ValidationError("custom_U matrix must be square");
    CouplingSpec c;
    c.kind = Kind::CustomU;
    c.U = std::move(U);
    return c;
}

Eigen::MatrixXcd relation_basis(const Eigen::MatrixXcd& U) {
    // {(xi, xi')} with (1-U) xi = i (1+U) xi'; parametrized by phi in C^n
    // via xi = (1+U) phi, xi' = -i (1-U) phi.
    const int n = static_cast<int>(U.rows());
    Eigen::MatrixXcd rel(2 * n, n);
    rel.topRows(n) = eye(n) + U;
    rel.bottomRows(n) = cplx(0.0, -1.0) * (eye(n) - U);
    return rel;
}

Eigen::MatrixXcd to_unitary(const CouplingSpec& spec, int deg) {
    using Kind = CouplingSpec::Kind;
    Eigen::MatrixXcd U;
    switch (spec.kind) {
        case Kind::Delta: {
            // alpha(v) is the full vertex strength here
            const cplx denom(deg, spec.alpha);
            U = (2.0 / denom) * ones(deg) - eye(deg);
            break;
        }
        case Kind::DeltaPrime: {
            const cplx denom(deg, -spec.beta);
            U = -(cplx(deg, spec.beta) / denom) * eye(deg) + (2.0 / denom) * ones(deg);
            break;
        }
        case Kind::DeltaPrimeS: {
            // Neumann-based triple traces are (-f'(v), f(v)), which turns the
            // conditions into the Kirchhoff pattern with strength -alpha.
            const cplx denom(deg, -spec.alpha);
            U = (2.0 / denom) * ones(deg) - eye(deg);
            break;
        }
        case Kind::CustomAB: {
            if (spec.A.rows() != deg)
                throw ValidationError("custom_AB matrix size does not match degree");
            const Eigen::MatrixXcd& A = spec.A;
            const Eigen::MatrixXcd& B = spec.B;
            const double scale = std::max(1.0, std::max(A.norm(), B.norm()));
            if ((A * B.adjoint() - B * A.adjoint()).norm() > 1e-10 * scale * scale)
                throw ValidationError("custom_AB violates A B* = B A*");
            Eigen::MatrixXcd sq = A * A.adjoint() + B * B.adjoint();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sq);
            if (es.eigenvalues().minCoeff() <= 1e-12 * scale * scale)
                throw ValidationError("custom_AB: A A* + B B* is not positive definite");
            // A xi + B xi' = 0 rewritten through the Cayley-type transform
            Eigen::MatrixXcd ApiB = A + cplx(0.0, 1.0) * B;
            Eigen::FullPivLU<Eigen::MatrixXcd> lu(ApiB);
            if (!lu.isInvertible())
                throw ValidationError("custom_AB: A + iB is singular");
            U = -(lu.inverse() * (A - cplx(0.0, 1.0) * B));
            break;
        }
        case Kind::CustomU: {
            if (spec.U.rows() != deg)
                throw ValidationError("custom_U matrix size does not match degree");
            U = spec.U;
            break;
        }
    }
    if ((U * U.adjoint() - eye(deg)).norm() > kUnitaryTol * deg)
        throw NumericalError("coupling unitary fails unitarity check");
    return U;
}

NormalizedCoupling to_projector_form(const Eigen::MatrixXcd& U) {
    const int n = static_cast<int>(U.rows());
    if ((U * U.adjoint() - eye(n)).norm() > 1e-10 * n)
        throw ValidationError("to_projector_form: input is not unitary");

    // U is unitary, hence normal; Schur gives a unitary diagonalization.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(U);
    const Eigen::MatrixXcd& Q = schur.matrixU();
    Eigen::VectorXcd evs = schur.matrixT().diagonal();

    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (std::abs(evs(i) + 1.0) > kClusterTol) keep.push_back(i);

    NormalizedCoupling nc;
    nc.U = U;
    const int r = static_cast<int>(keep.size());
    nc.basis.resize(n, r);
    for (int j = 0; j < r; ++j) {
        Eigen::VectorXcd col = Q.col(keep[j]);
        // deterministic sign: first component of nonneg modulus made positive real
        int piv = 0;
        while (piv < n - 1 && std::abs(col(piv)) < 1e-12) ++piv;
        const cplx ph = col(piv) / std::abs(col(piv));
        nc.basis.col(j) = col / ph;
    }
    nc.P = nc.basis * nc.basis.adjoint();

    if (r > 0) {
        Eigen::MatrixXcd Ur = nc.basis.adjoint() * U * nc.basis;  // P U P* on ran P
        Eigen::MatrixXcd one_plus = eye(r) + Ur;
        Eigen::FullPivLU<Eigen::MatrixXcd> lu(one_plus);
        if (lu.rcond() < 1e-12)
            throw NumericalError(
                "to_projector_form: 1 + PUP* numerically singular; an eigenvalue at -1 "
                "leaked past the clustering tolerance");
        nc.C = cplx(0.0, -1.0) * (eye(r) - Ur) * lu.inverse();
        nc.C = 0.5 * (nc.C + nc.C.adjoint().eval());  // symmetrize roundoff
    } else {
        nc.C.resize(0, 0);
    }
    return nc;
}

ScalarCondition check_scalar_condition(const MetricGraph& g) {
    ScalarCondition out;
    bool have = false;
    cplx theta;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const Eigen::MatrixXcd U = to_unitary(g.couplings[v], g.deg[v]);
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(U);
        const Eigen::VectorXcd evs = schur.matrixT().diagonal();
        for (int i = 0; i < evs.size(); ++i) {
            const cplx ev = evs(i);
            if (std::abs(ev + 1.0) <= kClusterTol) continue;
            if (!have) {
                theta = ev;
                have = true;
            } else if (std::abs(ev - theta) > kClusterTol) {
                out.ok = false;
                out.offending_a = theta;
                out.offending_b = ev;
                out.message = "vertex unitaries carry two distinct non-(-1) eigenvalues";
                return out;
            }
        }
    }
    if (!have) {
        out.ok = false;
        out.message = "all vertex unitaries are -1 (Dirichlet decoupling); no scalar theta";
        return out;
    }
    out.ok = true;
    out.theta = theta;
    out.alpha = (cplx(0.0, -1.0) * (1.0 - theta) / (1.0 + theta)).real();
    return out;
}

}  // namespace qg
