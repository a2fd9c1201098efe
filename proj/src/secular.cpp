#include "qg/secular.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "qg/errors.hpp"

namespace qg {

namespace {

// Trace matrices at vertex v: rows indexed by the deck slots of v,
// columns by the coefficient vector (a_0, b_0, ..., a_{E-1}, b_{E-1}).
// val = boundary values, der = inward derivatives, both with the
// tau-end magnetic phase e^{i beta_e}.
struct VertexTraces {
    Eigen::MatrixXcd val, der;
};

VertexTraces vertex_traces(const MetricGraph& g, const DeckIndex& deck, int v,
                           const TransferMatrix& tm) {
    const int d = g.deg[v];
    VertexTraces t;
    t.val = Eigen::MatrixXcd::Zero(d, 2 * g.edge_count());
    t.der = Eigen::MatrixXcd::Zero(d, 2 * g.edge_count());
    for (int i = deck.block_begin(v); i < deck.block_end(v); ++i) {
        const int r = i - deck.block_begin(v);
        const int e = deck.slots[i].edge;
        if (deck.slots[i].end == End::Iota) {
            t.val(r, 2 * e) = 1.0;      // f_e(0) = a_e
            t.der(r, 2 * e + 1) = 1.0;  // f_e'(0) = b_e
        } else {
            const cplx ph = std::polar(1.0, g.edges[e].beta);
            t.val(r, 2 * e) = ph * tm.c;
            t.val(r, 2 * e + 1) = ph * tm.s;
            t.der(r, 2 * e) = -ph * tm.cp;
            t.der(r, 2 * e + 1) = -ph * tm.sp;
        }
    }
    return t;
}

}  // namespace

Eigen::MatrixXcd secular_matrix(const MetricGraph& g, double z) {
    const DeckIndex deck = deck_index(g);
    const TransferMatrix tm = transfer(g.potential, g.length, cplx(z, 0.0));
    const int n = 2 * g.edge_count();
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
    for (int v = 0; v < g.vertex_count(); ++v) {
        const int d = g.deg[v];
        const Eigen::MatrixXcd U = to_unitary(g.couplings[v], d);
        const VertexTraces t = vertex_traces(g, deck, v, tm);
        const Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(d, d);
        Eigen::MatrixXcd rows;
        if (g.couplings[v].neumann_based()) {
            // Neumann-based triple: Gamma = derivatives, Gamma' = -values
            rows = (one - U) * t.der + cplx(0.0, 1.0) * (one + U) * t.val;
        } else {
            rows = (one - U) * t.val - cplx(0.0, 1.0) * (one + U) * t.der;
        }
        S.middleRows(deck.block_begin(v), d) = rows;
    }
    return S;
}

namespace {

struct SingularValues {
    double ratio;  // sigma_min / sigma_max
    Eigen::VectorXd sv;
};

SingularValues sv_ratio(const MetricGraph& g, double z) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(secular_matrix(g, z));
    SingularValues out;
    out.sv = svd.singularValues();
    const double smax = out.sv(0);
    if (smax <= 0.0) throw NumericalError("secular matrix vanished identically");
    out.ratio = out.sv(out.sv.size() - 1) / smax;
    return out;
}

double golden_minimize(const MetricGraph& g, double a, double b) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = sv_ratio(g, x1).ratio, f2 = sv_ratio(g, x2).ratio;
    while (b - a > 1e-13 * (1.0 + std::abs(a))) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = sv_ratio(g, x1).ratio;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = sv_ratio(g, x2).ratio;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

SpectralResult oracle_spectrum(const MetricGraph& g, double a, double b,
                               const OracleOptions& opts) {
    if (!(a < b)) throw ValidationError("oracle interval endpoints must satisfy a < b");
    SpectralResult res;
    res.interval_a = a;
    res.interval_b = b;

    const int N = opts.scan_points;
    std::vector<double> ratio(N + 1);
    for (int i = 0; i <= N; ++i) ratio[i] = sv_ratio(g, a + (b - a) * i / N).ratio;

    for (int i = 1; i < N; ++i) {
        if (!(ratio[i] <= ratio[i - 1] && ratio[i] <= ratio[i + 1])) continue;
        if (ratio[i] > 0.2) continue;  // shallow dip, not a candidate root
        const double lo = a + (b - a) * (i - 1) / N;
        const double hi = a + (b - a) * (i + 1) / N;
        const double z = golden_minimize(g, lo, hi);
        const SingularValues sv = sv_ratio(g, z);
        const double smax = sv.sv(0);
        if (sv.sv(sv.sv.size() - 1) >= opts.singular_rel * smax) continue;
        int mult = 0;
        for (int j = 0; j < sv.sv.size(); ++j)
            if (sv.sv(j) < opts.kernel_rel * smax) ++mult;

        if (!res.entries.empty() &&
            std::abs(res.entries.back().z - z) < 1e-9 * (1.0 + std::abs(z))) {
            if (sv.ratio < res.entries.back().residual) {
                res.entries.back().z = z;
                res.entries.back().residual = sv.ratio;
                res.entries.back().multiplicity = mult;
            }
            continue;
        }
        SpectralEntry e;
        e.z = z;
        e.multiplicity = mult;
        e.lambda = 0.0;
        e.method = "oracle";
        e.residual = sv.ratio;
        res.entries.push_back(e);
    }
    return res;
}

CompareReport compare_spectra(const SpectralResult& got, const SpectralResult& want,
                              double tol) {
    CompareReport rep;
    std::size_t i = 0, j = 0;
    auto note = [&rep](const std::string& s) {
        rep.ok = false;
        rep.details.push_back(s);
    };
    while (i < got.entries.size() && j < want.entries.size()) {
        const auto& ge = got.entries[i];
        const auto& we = want.entries[j];
        const double t = tol * (1.0 + std::abs(we.z));
        if (std::abs(ge.z - we.z) <= t) {
            rep.max_z_error = std::max(rep.max_z_error, std::abs(ge.z - we.z));
            if (ge.multiplicity != we.multiplicity) {
                ++rep.multiplicity_mismatches;
                note("multiplicity mismatch at z = " + std::to_string(we.z) + ": " +
                     std::to_string(ge.multiplicity) + " vs " +
                     std::to_string(we.multiplicity));
            }
            ++i;
            ++j;
        } else if (ge.z < we.z) {
            note("unmatched entry at z = " + std::to_string(ge.z) + " in first list");
            ++i;
        } else {
            note("unmatched entry at z = " + std::to_string(we.z) + " in second list");
            ++j;
        }
    }
    for (; i < got.entries.size(); ++i)
        note("unmatched entry at z = " + std::to_string(got.entries[i].z) + " in first list");
    for (; j < want.entries.size(); ++j)
        note("unmatched entry at z = " + std::to_string(want.entries[j].z) + " in second list");
    return rep;
}

}  // namespace qg
