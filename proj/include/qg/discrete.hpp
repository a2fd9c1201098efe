#ifndef QG_DISCRETE_HPP
#define QG_DISCRETE_HPP

#include <Eigen/Dense>
#include <vector>

#include "qg/graph.hpp"

namespace qg {

// Weighted adjacency operator Delta in the vertex basis:
// (Delta f)(v) = (1/deg v) (sum_{iota e = v} f(tau e) + sum_{tau e = v} f(iota e)).
// Not symmetric for unequal degrees; see degree_symmetrized.
Eigen::MatrixXcd adjacency_operator(const MetricGraph& g);

// Magnetic version Delta_beta with per-edge phases from g.
Eigen::MatrixXcd magnetic_adjacency(const MetricGraph& g);
Eigen::MatrixXcd magnetic_adjacency(const MetricGraph& g, const std::vector<double>& beta);

// W^{1/2} M W^{-1/2} with W = diag(deg v); Hermitian for Delta, Delta_beta.
Eigen::MatrixXcd degree_symmetrized(const MetricGraph& g, const Eigen::MatrixXcd& m);

// Permutation matrix of the partner involution on deck slots.
Eigen::MatrixXd deck_shift(const MetricGraph& g, const DeckIndex& deck);

/// D_P = P D P* restricted to ran P, in the orthonormal bases from the
/// per-vertex normalized couplings; `basis` stacks them block-diagonally.
struct ProjectedShift {
    Eigen::MatrixXcd matrix;   // r x r Hermitian
    Eigen::MatrixXcd basis;    // (deck size) x r, orthonormal columns
    bool empty() const { return matrix.rows() == 0; }
};

ProjectedShift projected_shift(const MetricGraph& g, const DeckIndex& deck,
                               const std::vector<NormalizedCoupling>& couplings);

// Euclidean-isometry matrix of Theta: l^2(G) -> deck space, slot (v,e) row
// carrying 1/sqrt(deg v). Intertwines deck D_P with the symmetrized Delta.
// Requires every P_v to be the rank-1 delta projector.
Eigen::MatrixXd theta_map(const MetricGraph& g, const DeckIndex& deck,
                          const std::vector<NormalizedCoupling>& couplings);

/// Full Hermitian eigendecomposition with multiplicity grouping.
struct EigenDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXcd eigenvectors; // orthonormal columns
    // groups of indices with eigenvalues within the grouping tolerance
    std::vector<std::pair<double, int>> grouped;  // (representative value, multiplicity)
    std::vector<std::vector<int>> group_indices;
};

EigenDecomposition hermitian_eigs(const Eigen::MatrixXcd& m, double group_tol = 1e-8);

}  // namespace qg

#endif
