#ifndef QG_WEYL_HPP
#define QG_WEYL_HPP

#include <Eigen/Dense>
#include <memory>
#include <optional>

#include "qg/discrete.hpp"
#include "qg/graph.hpp"
#include "qg/ode.hpp"
#include "qg/spectral_result.hpp"

namespace qg {

enum class TripleKind { DirichletBased, NeumannBased };

/// 2x2 edge Weyl matrix at z.
struct EdgeWeyl {
    cplx mii, mit, mti, mtt;
};

// DirichletBased: m = (1/s) [[-c, 1], [1, -s']]; pivot s(l;z).
// NeumannBased:   m = (1/c') [[s', 1], [1, c]]; pivot c'(l;z).
// Throws NumericalError when the pivot is below 1e-13 in modulus.
EdgeWeyl edge_weyl(TripleKind kind, const Potential& V, double l, cplx z);
EdgeWeyl edge_weyl(TripleKind kind, const TransferMatrix& tm);

// Deck-space Weyl matrix M(z), assembled slot-by-slot from the two-case
// formula; reduces to m_ii I + m_it D when the symmetry conditions hold.
Eigen::MatrixXcd full_weyl(const MetricGraph& g, const DeckIndex& deck,
                           TripleKind kind, cplx z);

enum class Family { Delta, DeltaPrime, DeltaPrimeS, Th3Kappa };

/// Everything the reduction pipeline needs, frozen at construction:
/// the scalar pair (m, n) with M_P(z) - alpha_rel I = (m(z) I - T) / n(z),
/// the Hermitian discrete operator T with its eigendecomposition, and the
/// working gap J of the reference spectrum.
class ReductionContext {
  public:
    std::shared_ptr<const MetricGraph> graph;  // owned copy; safe past the input
    DeckIndex deck;
    Family family = Family::Delta;
    TripleKind triple = TripleKind::DirichletBased;

    double alpha = 0.0;        // family strength (delta/delta_prime_s alpha, 1/beta)
    double alpha_rel = 0.0;    // scalar of the normalized boundary relation
    double kappa = 0.5;        // th3 only
    bool magnetic = false;

    Eigen::MatrixXcd T;        // Hermitian; deck-projected unless magnetic
    Eigen::MatrixXcd basis;    // deck basis of ran P (empty when magnetic)
    EigenDecomposition Teig;
    bool measure_supported() const { return !magnetic; }

    GapList reference;         // sigma_D or sigma_N
    double gap_a = 0.0, gap_b = 0.0;

    cplx m(cplx z) const;          // reduction function eta
    cplx m_prime(cplx z) const;
    cplx n(cplx z) const;
    double m_real(double z) const { return m(cplx(z, 0.0)).real(); }
    double m_prime_real(double z) const { return m_prime(cplx(z, 0.0)).real(); }
    double n_real(double z) const { return n(cplx(z, 0.0)).real(); }

    // -(M_P(z) - alpha_rel I)^{-1} via the full deck Weyl matrix; the
    // independent route used by the measure checks.
    Eigen::MatrixXcd weyl_inverse_N(cplx z) const;
};

struct ContextOptions {
    int gap = 0;
    std::optional<std::pair<double, double>> interval;  // overrides gap
    std::optional<double> z_min;
    int reference_count = 8;
};

// Validates the family hypotheses (symmetry, scalar condition, constant
// kappa / beta ratio) and assembles the context. Throws PreconditionError
// with the failed hypothesis named.
ReductionContext make_context(const MetricGraph& g, const ContextOptions& opts = {});

struct KInterval {
    double lo = 0.0, hi = 0.0;
    int direction = 0;   // sign of m' on K
    bool empty = true;
    double min_abs_mprime = 0.0;
};

// K = m^{-1}([inf spec T, sup spec T]) cap J, by adaptive scan plus
// endpoint refinement. Checks connectivity and constant sign of m'.
KInterval locate_K(const ReductionContext& ctx, int initial_grid = 512);

// Unique z in K with m(z) = lambda (monotone bisection).
double preimage(const ReductionContext& ctx, const KInterval& K, double lambda);

struct ReduceReport {
    SpectralResult result;
    KInterval K;
    std::vector<double> boundary_lambdas;  // excluded by the gap-endpoint collar
};

ReduceReport reduce_spectrum(const ReductionContext& ctx);

}  // namespace qg

#endif
