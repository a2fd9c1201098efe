#include "qg/discrete.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "qg/errors.hpp"

namespace qg {

using cplx = std::complex<double>;

Eigen::MatrixXcd magnetic_adjacency(const MetricGraph& g, const std::vector<double>& beta) {
    const int nv = g.vertex_count();
    if (beta.size() != static_cast<std::size_t>(g.edge_count()))
        throw ValidationError("magnetic_adjacency: one phase per edge expected");
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(nv, nv);
    for (int e = 0; e < g.edge_count(); ++e) {
        const int u = g.edges[e].tail, w = g.edges[e].head;
        const cplx ph = std::polar(1.0, beta[e]);
        // (Delta f)(tail) picks up e^{-i beta} f(head), and conversely
        m(u, w) += std::conj(ph);
        m(w, u) += ph;
    }
    for (int v = 0; v < nv; ++v) m.row(v) /= double(g.deg[v]);
    return m;
}

Eigen::MatrixXcd magnetic_adjacency(const MetricGraph& g) {
    std::vector<double> beta(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) beta[e] = g.edges[e].beta;
    return magnetic_adjacency(g, beta);
}

Eigen::MatrixXcd adjacency_operator(const MetricGraph& g) {
    return magnetic_adjacency(g, std::vector<double>(g.edge_count(), 0.0));
}

Eigen::MatrixXcd degree_symmetrized(const MetricGraph& g, const Eigen::MatrixXcd& m) {
    const int nv = g.vertex_count();
    Eigen::VectorXd wsq(nv);
    for (int v = 0; v < nv; ++v) wsq(v) = std::sqrt(double(g.deg[v]));
    return wsq.asDiagonal() * m * wsq.cwiseInverse().asDiagonal();
}

Eigen::MatrixXd deck_shift(const MetricGraph&, const DeckIndex& deck) {
    const int n = deck.size();
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, deck.partner(i)) = 1.0;
    return d;
}

ProjectedShift projected_shift(const MetricGraph& g, const DeckIndex& deck,
                               const std::vector<NormalizedCoupling>& couplings) {
    const int nv = g.vertex_count();
    if (couplings.size() != static_cast<std::size_t>(nv))
        throw ValidationError("projected_shift: one normalized coupling per vertex expected");

    int r = 0;
    for (const auto& nc : couplings) r += nc.rank();

    ProjectedShift out;
    out.basis = Eigen::MatrixXcd::Zero(deck.size(), r);
    int col = 0;
    for (int v = 0; v < nv; ++v) {
        const auto& nc = couplings[v];
        if (nc.basis.rows() != g.deg[v])
            throw ValidationError("projected_shift: coupling size mismatch at vertex " +
                                  g.vertices[v]);
        out.basis.block(deck.block_begin(v), col, g.deg[v], nc.rank()) = nc.basis;
        col += nc.rank();
    }
    const Eigen::MatrixXd d = deck_shift(g, deck);
    out.matrix = out.basis.adjoint() * d * out.basis;
    out.matrix = 0.5 * (out.matrix + out.matrix.adjoint().eval());
    return out;
}

Eigen::MatrixXd theta_map(const MetricGraph& g, const DeckIndex& deck,
                          const std::vector<NormalizedCoupling>& couplings) {
    const int nv = g.vertex_count();
    for (int v = 0; v < nv; ++v) {
        const auto& nc = couplings[v];
        const int d = g.deg[v];
        if (nc.rank() != 1 ||
            (nc.P - Eigen::MatrixXcd::Ones(d, d) / double(d)).norm() > 1e-10)
            throw PreconditionError(
                "theta_map requires the rank-1 delta projector at every vertex");
    }
    Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(deck.size(), nv);
    for (int i = 0; i < deck.size(); ++i) {
        const int v = deck.slots[i].vertex;
        theta(i, v) = 1.0 / std::sqrt(double(g.deg[v]));
    }
    return theta;
}

EigenDecomposition hermitian_eigs(const Eigen::MatrixXcd& m, double group_tol) {
    const double scale = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() > 1e-10 * scale)
        throw ValidationError("hermitian_eigs: input is not Hermitian within 1e-10");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    if (es.info() != Eigen::Success)
        throw NumericalError("hermitian_eigs: eigensolver failed to converge");

    EigenDecomposition out;
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();

    const int n = static_cast<int>(out.eigenvalues.size());
    for (int i = 0; i < n;) {
        int j = i + 1;
        while (j < n && out.eigenvalues(j) - out.eigenvalues(j - 1) <= group_tol) ++j;
        std::vector<int> idx;
        double sum = 0.0;
        for (int k = i; k < j; ++k) {
            idx.push_back(k);
            sum += out.eigenvalues(k);
        }
        out.grouped.emplace_back(sum / idx.size(), static_cast<int>(idx.size()));
        out.group_indices.push_back(std::move(idx));
        i = j;
    }
    return out;
}

}  // namespace qg
