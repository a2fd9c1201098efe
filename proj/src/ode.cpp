#include "qg/ode.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

#include "qg/errors.hpp"

namespace qg {

namespace {

// Dormand-Prince 5(4) coefficients
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

constexpr double kRelTol = 1e-12;
constexpr double kAbsTol = 1e-14;

// State layout: (c, c', s, s') and, when propagating d/dz,
// (dc, dc', ds, ds') appended.
using State = std::array<cplx, 8>;

struct Rhs {
    const Potential* V;
    cplx z;
    int n;  // 4 or 8

    State operator()(double x, const State& y) const {
        State d{};
        const cplx q = cplx((*V)(x), 0.0) - z;
        d[0] = y[1];
        d[1] = q * y[0];
        d[2] = y[3];
        d[3] = q * y[2];
        if (n == 8) {
            d[4] = y[5];
            d[5] = q * y[4] - y[0];
            d[6] = y[7];
            d[7] = q * y[6] - y[2];
        }
        return d;
    }
};

}  // namespace

TransferMatrix transfer(const Potential& V, double l, cplx z, bool want_dz) {
    if (!(l > 0.0)) throw ValidationError("transfer: length must be positive");

    const int n = want_dz ? 8 : 4;
    Rhs rhs{&V, z, n};

    State y{};
    y[0] = 1.0;  // c(0)=1
    y[3] = 1.0;  // s'(0)=1

    double x = 0.0;
    double h = l / (50.0 * (1.0 + std::sqrt(std::abs(z))));
    h = std::min(h, l);
    double worst_err = 0.0;

    State k1 = rhs(x, y);
    const int max_steps = 2000000;
    for (int step = 0; step < max_steps && x < l;) {
        if (x + h > l) h = l - x;

        State t;
        for (int i = 0; i < n; ++i) t[i] = y[i] + h * a21 * k1[i];
        State k2 = rhs(x + c2 * h, t);
        for (int i = 0; i < n; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        State k3 = rhs(x + c3 * h, t);
        for (int i = 0; i < n; ++i)
            t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        State k4 = rhs(x + c4 * h, t);
        for (int i = 0; i < n; ++i)
            t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        State k5 = rhs(x + c5 * h, t);
        for (int i = 0; i < n; ++i)
            t[i] = y[i] +
                   h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        State k6 = rhs(x + h, t);
        State ynew;
        for (int i = 0; i < n; ++i)
            ynew[i] = y[i] +
                      h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        State k7 = rhs(x + h, ynew);

        double err = 0.0;
        for (int i = 0; i < n; ++i) {
            const cplx ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                 e6 * k6[i] + e7 * k7[i]);
            const double sc =
                kAbsTol + kRelTol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double r = std::abs(ei) / sc;
            err += r * r;
        }
        err = std::sqrt(err / n);

        if (err <= 1.0) {
            x += h;
            y = ynew;
            k1 = k7;  // FSAL
            worst_err = std::max(worst_err, err);
            ++step;
        }
        const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (h < 1e-15 * l)
            throw NumericalError("transfer: step size underflow, error estimate " +
                                 std::to_string(err));
    }
    if (x < l)
        throw NumericalError("transfer: step budget exhausted, achieved error " +
                             std::to_string(worst_err));

    TransferMatrix tm;
    tm.c = y[0];
    tm.cp = y[1];
    tm.s = y[2];
    tm.sp = y[3];
    if (want_dz) {
        tm.dc_dz = y[4];
        tm.dcp_dz = y[5];
        tm.ds_dz = y[6];
        tm.dsp_dz = y[7];
        tm.has_dz = true;
    }
    return tm;
}

std::pair<double, double> GapList::gap(int k) const {
    if (k < 0 || k >= gap_count()) throw ValidationError("gap index out of range");
    if (k == 0) return {z_min, eigenvalues[0]};
    return {eigenvalues[k - 1], eigenvalues[k]};
}

namespace {

// Locate the first `count` real zeros of f, scanning z = z_lo + t^2 with a
// step bounded by the V=0 spacing heuristic, then refine by bisection.
GapList scan_spectrum(const std::function<double(double)>& f,
                      const std::function<double(double)>& f_dz,
                      double z_lo, double l, int count) {
    GapList out;
    out.z_min = 0.0;
    if (count < 1) {
        out.z_min = -1.0;
        return out;
    }

    const double dt = M_PI / (8.0 * l);
    const double t_cap = (count + 4) * M_PI / l * 4.0;

    double t_prev = 0.0;
    double f_prev = f(z_lo);

    for (double t = t_prev + dt; static_cast<int>(out.eigenvalues.size()) < count;
         t += dt) {
        if (t > t_cap)
            throw NumericalError("spectrum scan window exhausted before finding " +
                                 std::to_string(count) + " roots");
        const double z = z_lo + t * t;
        const double fv = f(z);
        if (fv == 0.0 || (f_prev < 0.0) != (fv < 0.0)) {
            double a = z_lo + t_prev * t_prev, b = z;
            double fa = f_prev;
            // bisection to width 1e-12 (1+|z|)
            while (b - a > 1e-12 * (1.0 + std::abs(a))) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if (fm == 0.0) {
                    a = b = m;
                    break;
                }
                if ((fa < 0.0) != (fm < 0.0))
                    b = m;
                else {
                    a = m;
                    fa = fm;
                }
            }
            double root = 0.5 * (a + b);
            // one safeguarded secant polish
            const double fr = f(root);
            const double dfr = f_dz(root);
            if (dfr != 0.0) {
                const double cand = root - fr / dfr;
                if (cand > a - (b - a) && cand < b + (b - a)) root = cand;
            }
            if (std::abs(dfr) < 1e-10)
                throw NumericalError("spectrum root at z=" + std::to_string(root) +
                                     " is not simple within tolerance");
            out.eigenvalues.push_back(root);
        }
        f_prev = fv;
        t_prev = t;
    }
    out.z_min = std::min(-1.0, out.eigenvalues.front() - 10.0);
    return out;
}

double potential_floor(const Potential& V, double l) {
    double lo = 0.0;
    for (int i = 0; i <= 200; ++i) lo = std::min(lo, V(l * i / 200.0));
    return lo;
}

}  // namespace

GapList dirichlet_spectrum(const Potential& V, double l, int count,
                           double z_min_override, bool use_override) {
    const double z_lo = potential_floor(V, l) - 1.0;
    auto f = [&](double z) { return transfer(V, l, cplx(z, 0.0)).s.real(); };
    auto fdz = [&](double z) { return transfer(V, l, cplx(z, 0.0), true).ds_dz.real(); };
    GapList gl = scan_spectrum(f, fdz, z_lo, l, count);
    if (use_override) gl.z_min = z_min_override;
    return gl;
}

GapList neumann_spectrum(const Potential& V, double l, int count,
                         double z_min_override, bool use_override) {
    const double z_lo = potential_floor(V, l) - 1.0;
    auto f = [&](double z) { return transfer(V, l, cplx(z, 0.0)).cp.real(); };
    auto fdz = [&](double z) { return transfer(V, l, cplx(z, 0.0), true).dcp_dz.real(); };
    GapList gl = scan_spectrum(f, fdz, z_lo, l, count);
    if (use_override) gl.z_min = z_min_override;
    return gl;
}

bool check_symmetric_potential(const Potential& V, double l, double tol) {
    for (int i = 0; i <= 200; ++i) {
        const double x = l * i / 200.0;
        if (std::abs(V(x) - V(l - x)) > tol) return false;
    }
    const double probes[5] = {-3.7, 0.43, 2.9, 7.31, 17.11};
    for (double p : probes) {
        const double z = p / (l * l);
        const TransferMatrix tm = transfer(V, l, cplx(z, 0.0));
        if (std::abs(tm.sp - tm.c) > tol * (1.0 + std::abs(tm.c))) return false;
    }
    return true;
}

cplx cos_sqrt(cplx z, double x) {
    const cplx w = z * (x * x);
    if (std::abs(w) < 1e-4) {
        // even series sum (-1)^k w^k / (2k)!
        cplx term = 1.0, acc = 1.0;
        for (int k = 1; k <= 8; ++k) {
            term *= -w / double((2 * k - 1) * (2 * k));
            acc += term;
        }
        return acc;
    }
    return std::cos(std::sqrt(z) * x);
}

cplx sinc_sqrt(cplx z, double x) {
    const cplx w = z * (x * x);
    if (std::abs(w) < 1e-4) {
        cplx term = 1.0, acc = 1.0;
        for (int k = 1; k <= 8; ++k) {
            term *= -w / double((2 * k) * (2 * k + 1));
            acc += term;
        }
        return x * acc;
    }
    const cplx r = std::sqrt(z);
    return std::sin(r * x) / r;
}

}  // namespace qg
