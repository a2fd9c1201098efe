#ifndef QG_COUPLING_HPP
#define QG_COUPLING_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>

namespace qg {

struct MetricGraph;

/// Vertex boundary condition in one of the equivalent forms.
struct CouplingSpec {
    enum class Kind { Delta, DeltaPrime, DeltaPrimeS, CustomAB, CustomU };

    Kind kind = Kind::Delta;
    double alpha = 0.0;        // Delta / DeltaPrimeS strength
    double beta = 0.0;         // DeltaPrime strength, must be nonzero
    Eigen::MatrixXcd A, B;     // CustomAB
    Eigen::MatrixXcd U;        // CustomU

    static CouplingSpec delta(double alpha);
    static CouplingSpec delta_prime(double beta);
    static CouplingSpec delta_prime_s(double alpha);
    static CouplingSpec custom_ab(Eigen::MatrixXcd A, Eigen::MatrixXcd B);
    static CouplingSpec custom_u(Eigen::MatrixXcd U);

    // DeltaPrimeS conditions live in the Neumann-based edge triple.
    bool neumann_based() const { return kind == Kind::DeltaPrimeS; }
};

/// (U, P, C) normalized form: P projects onto ker(1+U)^perp, C is the
/// Hermitian operator of the condition P G' f = C P G f on ran P.
struct NormalizedCoupling {
    Eigen::MatrixXcd U;      // deg x deg unitary
    Eigen::MatrixXcd P;      // deg x deg orthogonal projector
    Eigen::MatrixXcd basis;  // deg x r orthonormal basis of ran P
    Eigen::MatrixXcd C;      // r x r Hermitian
    int rank() const { return static_cast<int>(basis.cols()); }
};

// Unitary whose boundary relation {(xi, xi'): (1-U)xi = i(1+U)xi'}
// matches the spec. For CustomAB: U = -(A - iB)(A + iB)^{-1}, validated
// against the relation graph of (A, B).
Eigen::MatrixXcd to_unitary(const CouplingSpec& spec, int deg);

NormalizedCoupling to_projector_form(const Eigen::MatrixXcd& U);

// 2deg x deg matrix whose column space is the boundary relation
// {(xi, xi')} of the given unitary; used for round-trip checks.
Eigen::MatrixXcd relation_basis(const Eigen::MatrixXcd& U);

struct ScalarCondition {
    bool ok = false;
    std::complex<double> theta{1.0, 0.0};
    double alpha = 0.0;  // -i(1-theta)/(1+theta), real for unimodular theta
    std::string message;
    std::complex<double> offending_a{0.0}, offending_b{0.0};
};

// Theorem hypothesis: eigenvalues of all U_v, minus those at -1, must
// coincide in a single unimodular theta != -1.
ScalarCondition check_scalar_condition(const MetricGraph& g);

}  // namespace qg

#endif
