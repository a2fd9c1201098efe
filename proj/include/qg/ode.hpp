#ifndef QG_ODE_HPP
#define QG_ODE_HPP

#include <complex>
#include <utility>
#include <vector>

#include "qg/potential.hpp"

namespace qg {

using cplx = std::complex<double>;

/// Boundary values of the fundamental system of -y'' + V y = z y on [0, l]:
/// s(0)=c'(0)=0, s'(0)=c(0)=1. Entries evaluated at x = l.
struct TransferMatrix {
    cplx c, s, cp, sp;
    cplx dc_dz{}, ds_dz{}, dcp_dz{}, dsp_dz{};
    bool has_dz = false;

    cplx wronskian() const { return c * sp - s * cp; }
};

// Adaptive Dormand-Prince 5(4) propagation of Y' = [[0,1],[V-z,0]] Y with
// Y(0) = I; want_dz adds the variational system for d/dz.
TransferMatrix transfer(const Potential& V, double l, cplx z, bool want_dz = false);

/// Sorted simple eigenvalues of a reference interval operator and the gap
/// structure of its complement.
struct GapList {
    std::vector<double> eigenvalues;  // strictly increasing
    double z_min;                     // finite left endpoint of the lowest gap

    // gap 0 = (z_min, ev[0]), gap k = (ev[k-1], ev[k])
    std::pair<double, double> gap(int k) const;
    int gap_count() const { return static_cast<int>(eigenvalues.size()); }
};

// First `count` zeros of z -> s(l; z); Dirichlet spectrum sigma_D.
GapList dirichlet_spectrum(const Potential& V, double l, int count,
                           double z_min_override = 0.0, bool use_override = false);

// First `count` zeros of z -> c'(l; z); Neumann spectrum sigma_N.
GapList neumann_spectrum(const Potential& V, double l, int count,
                         double z_min_override = 0.0, bool use_override = false);

// True iff V(x) = V(l-x) on a sample grid and s'(l;z) = c(l;z) at probe
// points (the m_ii = m_tt consequence used downstream).
bool check_symmetric_potential(const Potential& V, double l, double tol = 1e-8);

// Closed forms cos(sqrt(z) x) and sin(sqrt(z) x)/sqrt(z), entire in z;
// even power series near z = 0. Test/reference helpers for V = 0.
cplx cos_sqrt(cplx z, double x);
cplx sinc_sqrt(cplx z, double x);

}  // namespace qg

#endif
