#ifndef QG_SECULAR_HPP
#define QG_SECULAR_HPP

#include <Eigen/Dense>

#include "qg/graph.hpp"
#include "qg/ode.hpp"
#include "qg/spectral_result.hpp"

namespace qg {

// Secular matrix S(z), 2|E| x 2|E|, acting on the coefficient vector
// (a_e, b_e) of f_e = a_e c + b_e s. Row block for vertex v enforces
// (1 - U_v) Gamma_v f = i (1 + U_v) Gamma'_v f with magnetic phase
// factors e^{i beta} on the tau-end traces. z in spec(H) iff S(z) is
// singular; kernel dimension equals the eigenvalue multiplicity.
Eigen::MatrixXcd secular_matrix(const MetricGraph& g, double z);

struct OracleOptions {
    int scan_points = 2048;
    double singular_rel = 1e-8;    // sigma_min < rel * sigma_max declares a root
    double kernel_rel = 1e-6;      // sigma_j < rel * sigma_max counts multiplicity
};

// Direct spectrum of H on (a, b): sigma_min scan of S(z) on a uniform
// grid, golden-section refinement of each local minimum, singular-value
// thresholding for detection and multiplicity. Independent of the
// reduction pipeline.
SpectralResult oracle_spectrum(const MetricGraph& g, double a, double b,
                               const OracleOptions& opts = {});

struct CompareReport {
    bool ok = true;
    double max_z_error = 0.0;
    int multiplicity_mismatches = 0;
    std::vector<std::string> details;
};

// Greedy matching of two sorted spectral lists with per-entry tolerance
// tol * (1 + |z|); multiplicities must agree on matched pairs and no
// entry may be unmatched.
CompareReport compare_spectra(const SpectralResult& got, const SpectralResult& want,
                              double tol);

}  // namespace qg

#endif
