#include "qg/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qg/errors.hpp"

namespace qg {

namespace {
constexpr double kPivotTol = 1e-13;
constexpr double kBoundaryCollar = 1e-9;  // lambda collar at eta(dJ)
}  // namespace

EdgeWeyl edge_weyl(TripleKind kind, const TransferMatrix& tm) {
    EdgeWeyl w;
    if (kind == TripleKind::DirichletBased) {
        if (std::abs(tm.s) < kPivotTol)
            throw NumericalError("edge_weyl: z too close to the Dirichlet spectrum");
        w.mii = -tm.c / tm.s;
        w.mit = 1.0 / tm.s;
        w.mti = w.mit;
        w.mtt = -tm.sp / tm.s;
    } else {
        if (std::abs(tm.cp) < kPivotTol)
            throw NumericalError("edge_weyl: z too close to the Neumann spectrum");
        w.mii = tm.sp / tm.cp;
        w.mit = 1.0 / tm.cp;
        w.mti = w.mit;
        w.mtt = tm.c / tm.cp;
    }
    return w;
}

EdgeWeyl edge_weyl(TripleKind kind, const Potential& V, double l, cplx z) {
    return edge_weyl(kind, transfer(V, l, z));
}

Eigen::MatrixXcd full_weyl(const MetricGraph& g, const DeckIndex& deck,
                           TripleKind kind, cplx z) {
    const EdgeWeyl w = edge_weyl(kind, g.potential, g.length, z);
    const int n = deck.size();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const bool at_iota = deck.slots[i].end == End::Iota;
        M(i, i) = at_iota ? w.mii : w.mtt;
        M(i, deck.partner(i)) += at_iota ? w.mit : w.mti;
    }
    return M;
}

cplx ReductionContext::m(cplx z) const {
    const TransferMatrix tm = transfer(graph->potential, graph->length, z);
    switch (family) {
        case Family::Delta:
            return tm.c + alpha * tm.s;
        case Family::DeltaPrime:
            return -(tm.sp + alpha * tm.cp);  // alpha = beta
        case Family::DeltaPrimeS:
            return tm.c + alpha * tm.cp;
        case Family::Th3Kappa:
            return kappa * tm.c + (1.0 - kappa) * tm.sp + alpha * tm.s;
    }
    return {};
}

cplx ReductionContext::m_prime(cplx z) const {
    const TransferMatrix tm = transfer(graph->potential, graph->length, z, true);
    switch (family) {
        case Family::Delta:
            return tm.dc_dz + alpha * tm.ds_dz;
        case Family::DeltaPrime:
            return -(tm.dsp_dz + alpha * tm.dcp_dz);
        case Family::DeltaPrimeS:
            return tm.dc_dz + alpha * tm.dcp_dz;
        case Family::Th3Kappa:
            return kappa * tm.dc_dz + (1.0 - kappa) * tm.dsp_dz + alpha * tm.ds_dz;
    }
    return {};
}

cplx ReductionContext::n(cplx z) const {
    const TransferMatrix tm = transfer(graph->potential, graph->length, z);
    if (family == Family::DeltaPrimeS) return tm.cp;
    if (family == Family::DeltaPrime) return -tm.cp;
    return -tm.s;
}

Eigen::MatrixXcd ReductionContext::weyl_inverse_N(cplx z) const {
    if (!measure_supported())
        throw PreconditionError("deck Weyl route unavailable for magnetic phases");
    const Eigen::MatrixXcd M = full_weyl(*graph, deck, triple, z);
    const Eigen::MatrixXcd Mp = basis.adjoint() * M * basis -
                                alpha_rel * Eigen::MatrixXcd::Identity(basis.cols(), basis.cols());
    return -Mp.inverse();
}

namespace {

// Orthonormal basis of p_v^perp via the Householder reflection sending
// e_1 to ones/sqrt(d); deterministic.
Eigen::MatrixXd pv_perp_basis(int d) {
    Eigen::VectorXd u = Eigen::VectorXd::Constant(d, 1.0 / std::sqrt(double(d)));
    Eigen::VectorXd w = u - Eigen::VectorXd::Unit(d, 0);
    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(d, d);
    const double wn2 = w.squaredNorm();
    if (wn2 > 1e-28) H -= (2.0 / wn2) * (w * w.transpose());
    return H.rightCols(d - 1);
}

Eigen::MatrixXcd delta_type_basis(const MetricGraph& g, const DeckIndex& deck) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(deck.size(), g.vertex_count());
    for (int i = 0; i < deck.size(); ++i) {
        const int v = deck.slots[i].vertex;
        b(i, v) = 1.0 / std::sqrt(double(g.deg[v]));
    }
    return b;
}

Eigen::MatrixXcd pvperp_type_basis(const MetricGraph& g, const DeckIndex& deck) {
    int r = 0;
    for (int v = 0; v < g.vertex_count(); ++v) r += g.deg[v] - 1;
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(deck.size(), r);
    int col = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
        const int d = g.deg[v];
        if (d < 2) continue;
        b.block(deck.block_begin(v), col, d, d - 1) = pv_perp_basis(d);
        col += d - 1;
    }
    return b;
}

}  // namespace

ReductionContext make_context(const MetricGraph& g, const ContextOptions& opts) {
    ReductionContext ctx;
    ctx.graph = std::make_shared<MetricGraph>(g);
    ctx.deck = deck_index(g);
    ctx.magnetic = g.has_magnetic_phases();

    if (g.couplings.empty()) throw ValidationError("graph has no vertices");
    const auto kind = g.couplings.front().kind;
    for (const auto& c : g.couplings)
        if (c.kind != kind)
            throw PreconditionError(
                "reduction requires the same coupling family at every vertex");

    const bool symmetric_V = check_symmetric_potential(g.potential, g.length);

    switch (kind) {
        case CouplingSpec::Kind::Delta: {
            const ScalarCondition sc = check_scalar_condition(g);
            if (!sc.ok)
                throw PreconditionError(
                    "scalar condition (eigenvalue match across vertex unitaries) failed: " +
                    sc.message +
                    (sc.message.find("distinct") != std::string::npos
                         ? " (theta_1 = " + std::to_string(sc.offending_a.real()) + "+" +
                               std::to_string(sc.offending_a.imag()) + "i, theta_2 = " +
                               std::to_string(sc.offending_b.real()) + "+" +
                               std::to_string(sc.offending_b.imag()) + "i)"
                         : ""));
            ctx.alpha = sc.alpha;
            ctx.alpha_rel = sc.alpha;
            if (symmetric_V) {
                ctx.family = Family::Delta;
            } else {
                // Kirchhoff family with asymmetric V needs the constant
                // out-degree ratio of the directed reduction theorem.
                double kap = double(g.outdeg[0]) / double(g.deg[0]);
                for (int v = 1; v < g.vertex_count(); ++v)
                    if (std::abs(double(g.outdeg[v]) / double(g.deg[v]) - kap) > 1e-14)
                        throw PreconditionError(
                            "potential is not symmetric (V(x) != V(l-x)) and "
                            "outdeg/deg is not constant; no reduction applies");
                ctx.family = Family::Th3Kappa;
                ctx.kappa = kap;
            }
            break;
        }
        case CouplingSpec::Kind::DeltaPrime: {
            if (!symmetric_V)
                throw PreconditionError(
                    "delta_prime reduction requires a symmetric potential V(x) = V(l-x)");
            double beta = g.couplings[0].beta / double(g.deg[0]);
            for (int v = 1; v < g.vertex_count(); ++v)
                if (std::abs(g.couplings[v].beta / double(g.deg[v]) - beta) > 1e-12)
                    throw PreconditionError(
                        "delta_prime reduction requires beta(v) = beta * deg v");
            if (beta == 0.0) throw PreconditionError("delta_prime requires beta != 0");
            ctx.family = Family::DeltaPrime;
            ctx.triple = TripleKind::NeumannBased;
            ctx.alpha = beta;
            ctx.alpha_rel = -beta;
            break;
        }
        case CouplingSpec::Kind::DeltaPrimeS: {
            if (!symmetric_V)
                throw PreconditionError(
                    "delta_prime_s reduction requires a symmetric potential");
            const ScalarCondition sc = check_scalar_condition(g);
            if (!sc.ok)
                throw PreconditionError("scalar condition failed: " + sc.message);
            ctx.family = Family::DeltaPrimeS;
            ctx.triple = TripleKind::NeumannBased;
            ctx.alpha_rel = sc.alpha;
            ctx.alpha = -sc.alpha;  // strength in eta(z) = c + alpha c'
            break;
        }
        default:
            throw PreconditionError(
                "reduction is implemented for the delta-type families; "
                "run the secular oracle for custom couplings");
    }

    // discrete operator
    if (ctx.magnetic) {
        if (ctx.family == Family::DeltaPrime)
            throw PreconditionError("magnetic phases with delta_prime are not supported");
        Eigen::MatrixXcd ab = degree_symmetrized(g, magnetic_adjacency(g));
        ctx.T = ctx.family == Family::DeltaPrimeS ? Eigen::MatrixXcd(-ab) : ab;
    } else {
        const Eigen::MatrixXd d = deck_shift(g, ctx.deck);
        if (ctx.family == Family::DeltaPrime)
            ctx.basis = pvperp_type_basis(g, ctx.deck);
        else
            ctx.basis = delta_type_basis(g, ctx.deck);
        Eigen::MatrixXcd dp = ctx.basis.adjoint() * d * ctx.basis;
        dp = 0.5 * (dp + dp.adjoint().eval());
        ctx.T = ctx.family == Family::DeltaPrimeS ? Eigen::MatrixXcd(-dp) : dp;
    }
    if (ctx.T.rows() > 0) ctx.Teig = hermitian_eigs(ctx.T);

    // reference spectrum and gap
    const int count = std::max(opts.reference_count, opts.gap + 2);
    if (ctx.triple == TripleKind::NeumannBased)
        ctx.reference = neumann_spectrum(g.potential, g.length, count,
                                         opts.z_min.value_or(0.0), opts.z_min.has_value());
    else
        ctx.reference = dirichlet_spectrum(g.potential, g.length, count,
                                           opts.z_min.value_or(0.0), opts.z_min.has_value());

    if (opts.interval) {
        ctx.gap_a = opts.interval->first;
        ctx.gap_b = opts.interval->second;
        if (!(ctx.gap_a < ctx.gap_b))
            throw ValidationError("interval endpoints must satisfy a < b");
        for (double nu : ctx.reference.eigenvalues)
            if (nu > ctx.gap_a + 1e-9 && nu < ctx.gap_b - 1e-9)
                throw ValidationError(
                    "interval contains a reference eigenvalue at z = " + std::to_string(nu));
    } else {
        std::tie(ctx.gap_a, ctx.gap_b) = ctx.reference.gap(opts.gap);
    }
    return ctx;
}

KInterval locate_K(const ReductionContext& ctx, int initial_grid) {
    KInterval K;
    if (ctx.T.rows() == 0) return K;

    const double st_lo = ctx.Teig.eigenvalues.minCoeff();
    const double st_hi = ctx.Teig.eigenvalues.maxCoeff();
    const double a = ctx.gap_a, b = ctx.gap_b;
    const double tol = 1e-12 * (1.0 + std::max(std::abs(st_lo), std::abs(st_hi)));

    struct Node {
        double z, m, mp;
    };
    std::vector<Node> grid;
    grid.reserve(initial_grid);
    for (int i = 1; i < initial_grid; ++i) {
        const double z = a + (b - a) * i / initial_grid;
        grid.push_back({z, ctx.m_real(z), ctx.m_prime_real(z)});
    }
    // refine where |m'| is small relative to neighbors
    double mp_scale = 0.0;
    for (const auto& nd : grid) mp_scale = std::max(mp_scale, std::abs(nd.mp));
    std::vector<Node> extra;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (std::abs(grid[i].mp) < 0.05 * mp_scale) {
            const double z = 0.5 * (grid[i].z + grid[i + 1].z);
            extra.push_back({z, ctx.m_real(z), ctx.m_prime_real(z)});
        }
    }
    grid.insert(grid.end(), extra.begin(), extra.end());
    std::sort(grid.begin(), grid.end(), [](const Node& x, const Node& y) { return x.z < y.z; });

    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (grid[i].m >= st_lo - tol && grid[i].m <= st_hi + tol) hits.push_back(i);

    const bool degenerate_band = (st_hi - st_lo) <= tol;
    if (hits.empty()) {
        if (degenerate_band) {
            // S_T is a single point; look for a crossing of m - st_lo
            for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
                const double fa = grid[i].m - st_lo, fb = grid[i + 1].m - st_lo;
                if ((fa < 0.0) != (fb < 0.0)) {
                    double lo = grid[i].z, hi = grid[i + 1].z, flo = fa;
                    while (hi - lo > 1e-13 * (1.0 + std::abs(lo))) {
                        const double mid = 0.5 * (lo + hi);
                        const double fm = ctx.m_real(mid) - st_lo;
                        if ((flo < 0.0) != (fm < 0.0))
                            hi = mid;
                        else {
                            lo = mid;
                            flo = fm;
                        }
                    }
                    K.lo = K.hi = 0.5 * (lo + hi);
                    const double mp = ctx.m_prime_real(K.lo);
                    K.direction = mp > 0.0 ? 1 : -1;
                    K.min_abs_mprime = std::abs(mp);
                    K.empty = false;
                    return K;
                }
            }
        }
        return K;  // spec T and m(J) do not meet; flagged empty
    }

    for (std::size_t i = 1; i < hits.size(); ++i)
        if (hits[i] != hits[i - 1] + 1)
            throw NumericalError(
                "locate_K: hit set is disconnected, violating the connectivity lemma; "
                "check the reduction hypotheses");

    int dir = 0;
    double min_mp = std::numeric_limits<double>::infinity();
    for (std::size_t i : hits) {
        const int s = grid[i].mp > 0.0 ? 1 : (grid[i].mp < 0.0 ? -1 : 0);
        if (dir == 0)
            dir = s;
        else if (s != 0 && s != dir)
            throw NumericalError("locate_K: m' changes sign inside K");
        min_mp = std::min(min_mp, std::abs(grid[i].mp));
    }

    auto refine_edge = [&](double z_out, double z_in, double m_out) -> double {
        const double bound = m_out > st_hi ? st_hi : st_lo;
        double lo = z_out, hi = z_in;  // possibly lo > hi; bisection is order-agnostic
        double flo = m_out - bound;
        while (std::abs(hi - lo) > 1e-13 * (1.0 + std::abs(lo))) {
            const double mid = 0.5 * (lo + hi);
            const double fm = ctx.m_real(mid) - bound;
            if ((flo < 0.0) != (fm < 0.0)) {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        return 0.5 * (lo + hi);
    };

    const std::size_t first = hits.front(), last = hits.back();
    K.lo = first == 0 ? a : refine_edge(grid[first - 1].z, grid[first].z, grid[first - 1].m);
    K.hi = last + 1 >= grid.size()
               ? b
               : refine_edge(grid[last + 1].z, grid[last].z, grid[last + 1].m);
    K.direction = dir;
    K.min_abs_mprime = min_mp;
    K.empty = false;
    return K;
}

double preimage(const ReductionContext& ctx, const KInterval& K, double lambda) {
    if (K.empty) throw NumericalError("preimage: K is empty");
    double mlo = ctx.m_real(K.lo), mhi = ctx.m_real(K.hi);
    const double lo_val = std::min(mlo, mhi), hi_val = std::max(mlo, mhi);
    const double tol = 1e-9 * (1.0 + std::abs(lambda));
    if (lambda < lo_val - tol || lambda > hi_val + tol)
        throw NumericalError("preimage: lambda outside m(K)");
    const double lam = std::clamp(lambda, lo_val, hi_val);

    double a = K.lo, b = K.hi;
    double fa = mlo - lam;
    if (std::abs(fa) < 1e-15) return a;
    if (std::abs(mhi - lam) < 1e-15) return b;
    while (b - a > 1e-12 * (1.0 + std::abs(a))) {
        const double mid = 0.5 * (a + b);
        const double fm = ctx.m_real(mid) - lam;
        if (fm == 0.0) return mid;
        if ((fa < 0.0) != (fm < 0.0))
            b = mid;
        else {
            a = mid;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

ReduceReport reduce_spectrum(const ReductionContext& ctx) {
    ReduceReport rep;
    rep.result.interval_a = ctx.gap_a;
    rep.result.interval_b = ctx.gap_b;
    rep.K = locate_K(ctx);
    if (rep.K.empty) return rep;

    const double mlo_K = ctx.m_real(rep.K.lo), mhi_K = ctx.m_real(rep.K.hi);
    const double lo_val = std::min(mlo_K, mhi_K), hi_val = std::max(mlo_K, mhi_K);

    for (const auto& [lambda, mult] : ctx.Teig.grouped) {
        if (lambda < lo_val - kBoundaryCollar || lambda > hi_val + kBoundaryCollar)
            continue;
        const double z = preimage(ctx, rep.K, lambda);
        // an eigenvalue whose preimage sits on dJ belongs to the reference
        // spectrum, not to the gap; report it as a boundary atom
        if (std::abs(z - ctx.gap_a) < kBoundaryCollar * (1.0 + std::abs(ctx.gap_a)) ||
            std::abs(z - ctx.gap_b) < kBoundaryCollar * (1.0 + std::abs(ctx.gap_b))) {
            rep.boundary_lambdas.push_back(lambda);
            continue;
        }
        SpectralEntry e;
        e.z = z;
        e.multiplicity = mult;
        e.lambda = lambda;
        e.method = "reduced";
        e.residual = std::abs(ctx.m_real(z) - lambda);
        rep.result.entries.push_back(e);
    }
    std::sort(rep.result.entries.begin(), rep.result.entries.end(),
              [](const SpectralEntry& x, const SpectralEntry& y) { return x.z < y.z; });
    return rep;
}

}  // namespace qg
