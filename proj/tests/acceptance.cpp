// Acceptance runner: executes the ten top-level criteria and prints one
// PASS/FAIL line per criterion. Exit code 0 iff all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "qg/coupling.hpp"
#include "qg/discrete.hpp"
#include "qg/errors.hpp"
#include "qg/measure.hpp"
#include "qg/ode.hpp"
#include "qg/secular.hpp"
#include "qg/weyl.hpp"

using namespace qg;
using namespace qgtest;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
    std::printf("criterion %2d [%s] %s%s%s\n", idx, ok ? "PASS" : "FAIL", name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++failures;
}

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

// Reduce on gap `gap` and compare against the secular oracle on a collared
// window inside the gap. Returns max |dz| scaled; `ok` false on any
// multiplicity mismatch or unmatched root.
struct GapCompare {
    bool ok = true;
    double max_err = 0.0;
    std::string detail;
};

GapCompare compare_gap(const json& doc, int gap, double tol) {
    GapCompare out;
    const MetricGraph g = build(doc);
    ContextOptions opts;
    opts.gap = gap;
    opts.reference_count = 2;
    const ReductionContext ctx = make_context(g, opts);
    const ReduceReport rep = reduce_spectrum(ctx);
    const double a = ctx.gap_a + 1e-3 * (1.0 + std::abs(ctx.gap_a));
    const double b = ctx.gap_b - 1e-3 * (1.0 + std::abs(ctx.gap_b));
    SpectralResult reduced;
    for (const auto& e : rep.result.entries)
        if (e.z > a && e.z < b) reduced.entries.push_back(e);
    const SpectralResult oracle = oracle_spectrum(g, a, b);
    const CompareReport cmp = compare_spectra(reduced, oracle, tol);
    out.ok = cmp.ok;
    out.max_err = cmp.max_z_error;
    if (!cmp.ok && !cmp.details.empty()) out.detail = cmp.details.front();
    return out;
}

std::vector<std::pair<std::string, json>> acceptance_graphs() {
    auto k = [](int) { return delta(0.0); };
    return {{"single edge", single_edge(delta(0.0), delta(0.0))},
            {"path P3", path3(k)},
            {"star S3", star3(k)},
            {"triangle C3", triangle(k)},
            {"double edge", double_edge(k)},
            {"loop+pendant", loop_pendant(k)}};
}

Potential random_potential(std::mt19937& rng) {
    std::uniform_int_distribution<int> kind(0, 2);
    std::uniform_real_distribution<double> coeff(-3.0, 3.0);
    switch (kind(rng)) {
        case 0:
            return Potential::zero();
        case 1: {
            std::vector<double> cs(1 + rng() % 4);
            for (auto& c : cs) c = coeff(rng);
            return Potential::polynomial(cs);
        }
        default: {
            std::vector<double> xs, vs;
            const int n = 8 + static_cast<int>(rng() % 8);
            for (int i = 0; i <= n; ++i) {
                xs.push_back(i / double(n));
                vs.push_back(coeff(rng));
            }
            return Potential::table(std::move(xs), std::move(vs));
        }
    }
}

void criterion1() {
    const double t0 = now_s();
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    try {
        for (const auto& [name, doc] : acceptance_graphs()) {
            const MetricGraph g = build(doc);
            // collared window inside each of gaps 0-2; one oracle scan spans
            // them all and is filtered per window afterwards
            std::vector<std::pair<double, double>> windows;
            SpectralResult reduced;
            for (int gap = 0; gap <= 2; ++gap) {
                ContextOptions opts;
                opts.gap = gap;
                opts.reference_count = 2;
                const ReductionContext ctx = make_context(g, opts);
                const double a = ctx.gap_a + 1e-3 * (1.0 + std::abs(ctx.gap_a));
                const double b = ctx.gap_b - 1e-3 * (1.0 + std::abs(ctx.gap_b));
                windows.emplace_back(a, b);
                const ReduceReport rep = reduce_spectrum(ctx);
                for (const auto& e : rep.result.entries) {
                    const double cz = std::cos(std::sqrt(std::max(e.z, 0.0)));
                    if (std::abs(cz - e.lambda) > 1e-10) {
                        ok = false;
                        detail = name + ": |cos sqrt z - lambda| too large";
                    }
                    if (e.z > a && e.z < b) reduced.entries.push_back(e);
                }
            }
            const SpectralResult scan =
                oracle_spectrum(g, windows.front().first, windows.back().second);
            SpectralResult oracle;
            for (const auto& e : scan.entries)
                for (const auto& [a, b] : windows)
                    if (e.z > a && e.z < b) {
                        oracle.entries.push_back(e);
                        break;
                    }
            const CompareReport cmp = compare_spectra(reduced, oracle, 1e-8);
            worst = std::max(worst, cmp.max_z_error);
            if (!cmp.ok) {
                ok = false;
                detail = name + ": " + (cmp.details.empty() ? "mismatch" : cmp.details.front());
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double dt = now_s() - t0;
    if (dt > 10.0) {
        ok = false;
        detail += " runtime over 10 s";
    }
    std::ostringstream d;
    d << "six V=0 graphs, gaps 0-2, max |dz| = " << worst << ", " << dt << " s";
    report(1, "reduction matches oracle (Kirchhoff, V = 0)", ok, detail.empty() ? d.str() : detail);
}

void criterion2() {
    const double t0 = now_s();
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    try {
        for (double alpha : {0.0, 0.7}) {
            auto c = [&](int d) { return delta(alpha * d); };
            for (const json& doc : {triangle(c, cos_potential()), star3(c, cos_potential())}) {
                for (int gap = 0; gap <= 1; ++gap) {
                    const GapCompare r = compare_gap(doc, gap, 1e-6);
                    worst = std::max(worst, r.max_err);
                    if (!r.ok) {
                        ok = false;
                        detail = "alpha=" + std::to_string(alpha) + " gap " +
                                 std::to_string(gap) + ": " + r.detail;
                    }
                }
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    const double dt = now_s() - t0;
    if (dt > 60.0) {
        ok = false;
        detail += " runtime over 60 s";
    }
    std::ostringstream d;
    d << "V = cos(2 pi x), alpha in {0, 0.7}, max |dz| = " << worst << ", " << dt << " s";
    report(2, "reduction matches oracle with potential", ok, detail.empty() ? d.str() : detail);
}

void criterion3() {
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    try {
        for (int gap = 0; gap <= 1; ++gap) {
            const GapCompare r =
                compare_gap(triangle([](int d) { return delta_prime(1.0 * d); }), gap, 1e-6);
            worst = std::max(worst, r.max_err);
            if (!r.ok) {
                ok = false;
                detail = "gap " + std::to_string(gap) + ": " + r.detail;
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    std::ostringstream d;
    d << "beta(v) = deg v, triangle, max |dz| = " << worst;
    report(3, "delta-prime reduction matches oracle", ok, detail.empty() ? d.str() : detail);
}

void criterion4() {
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    try {
        auto c = [](int d) { return delta_prime_s(0.5 * d); };
        for (const json& doc : {single_edge_f(c), triangle(c)}) {
            for (int gap = 0; gap <= 1; ++gap) {
                const GapCompare r = compare_gap(doc, gap, 1e-6);
                worst = std::max(worst, r.max_err);
                if (!r.ok) {
                    ok = false;
                    detail = "gap " + std::to_string(gap) + ": " + r.detail;
                }
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    std::ostringstream d;
    d << "alpha = 0.5, single edge + triangle, sigma_N gaps, max |dz| = " << worst;
    report(4, "symmetrized delta-prime reduction matches oracle", ok,
           detail.empty() ? d.str() : detail);
}

void criterion5() {
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    try {
        const json doc = cycle4([](int) { return delta(0.0); }, linear_potential());
        for (int gap = 0; gap <= 1; ++gap) {
            const GapCompare r = compare_gap(doc, gap, 1e-6);
            worst = std::max(worst, r.max_err);
            if (!r.ok) {
                ok = false;
                detail = "gap " + std::to_string(gap) + ": " + r.detail;
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    std::ostringstream d;
    d << "directed 4-cycle, V(x) = x, kappa = 1/2, max |dz| = " << worst;
    report(5, "asymmetric-potential reduction matches oracle", ok,
           detail.empty() ? d.str() : detail);
}

void criterion6() {
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    try {
        for (double flux : {M_PI / 4, M_PI / 2}) {
            const json doc = cycle4([](int) { return delta(0.0); }, {{"kind", "zero"}}, flux);
            const GapCompare r = compare_gap(doc, 0, 1e-6);
            worst = std::max(worst, r.max_err);
            if (!r.ok) {
                ok = false;
                detail = "flux " + std::to_string(flux) + ": " + r.detail;
            }
            // gauge shift: same total flux concentrated on one edge
            json doc2 = cycle4([](int) { return delta(0.0); });
            doc2["edges"][0]["beta"] = flux;
            const ReduceReport r1 = reduce_spectrum(make_context(build(doc)));
            const ReduceReport r2 = reduce_spectrum(make_context(build(doc2)));
            if (r1.result.entries.size() != r2.result.entries.size()) {
                ok = false;
                detail = "gauge shift changed the root count";
            } else {
                for (std::size_t i = 0; i < r1.result.entries.size(); ++i)
                    if (std::abs(r1.result.entries[i].z - r2.result.entries[i].z) > 1e-10) {
                        ok = false;
                        detail = "gauge shift moved a root beyond 1e-10";
                    }
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    std::ostringstream d;
    d << "flux pi/4 and pi/2, max |dz| = " << worst;
    report(6, "magnetic reduction matches oracle; gauge invariance", ok,
           detail.empty() ? d.str() : detail);
}

void criterion7() {
    bool ok = true;
    std::string detail;
    try {
        const ReductionContext ctx =
            make_context(build(triangle([](int) { return delta(0.0); })));
        const MeasureReport rep = measure_check(ctx, 4.0, 4.8);
        if (!rep.monotone) {
            ok = false;
            detail = "discrepancy not decreasing along the eps ladder";
        }
        if (rep.extrapolated_discrepancy > 1e-3 * rep.rhs.norm()) {
            ok = false;
            detail = "extrapolated discrepancy " +
                     std::to_string(rep.extrapolated_discrepancy) + " too large";
        }
        if (rep.rhs_min_eigenvalue < -1e-10) {
            ok = false;
            detail = "rhs not positive semidefinite";
        }
        if (ok) {
            std::ostringstream d;
            d << "B = (4.0, 4.8), extrapolated discrepancy = " << rep.extrapolated_discrepancy
              << ", rhs min eig = " << rep.rhs_min_eigenvalue;
            detail = d.str();
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(7, "Stieltjes measure identity on the triangle", ok, detail);
}

void criterion8() {
    bool ok = true;
    std::string detail;
    try {
        const ReductionContext ctx =
            make_context(build(triangle([](int) { return delta(0.0); })));
        struct Probe {
            double lambda;
            const char* want;
        };
        const double lam_end = ctx.m_real(3.0);
        const Probe probes[3] = {{-0.5, "interior"}, {lam_end, "boundary"}, {0.9, "exterior"}};
        std::ostringstream d;
        for (const Probe& p : probes) {
            const KernelReport rep = k_I_check(ctx, 3.0, 5.0, p.lambda);
            if (rep.placement != p.want) {
                ok = false;
                detail = std::string("misclassified ") + p.want + " as " + rep.placement;
            }
            if (rep.final_deviation > 5e-3) {
                ok = false;
                detail = std::string(p.want) + " deviation " +
                         std::to_string(rep.final_deviation) + " > 5e-3";
            }
            d << p.want << " dev " << rep.final_deviation << "  ";
        }
        if (ok) detail = d.str();
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(8, "kernel limits (full / half / zero)", ok, detail);
}

void criterion9() {
    bool ok = true;
    std::string detail;
    try {
        // Wronskian on 1000 random probes
        std::mt19937 rng(424242);
        std::uniform_real_distribution<double> zre(-30.0, 80.0), zim(-2.0, 2.0);
        double worst_w = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const Potential V = random_potential(rng);
            const cplx z(zre(rng), i % 3 == 0 ? zim(rng) : 0.0);
            worst_w = std::max(worst_w, std::abs(transfer(V, 1.0, z).wronskian() - 1.0));
        }
        if (worst_w > 1e-10) {
            ok = false;
            detail = "Wronskian deviation " + std::to_string(worst_w);
        }

        // coupling round-trips
        const std::vector<std::pair<CouplingSpec, int>> specs{
            {CouplingSpec::delta(1.4), 3},
            {CouplingSpec::delta_prime(2.0), 2},
            {CouplingSpec::delta_prime_s(0.5), 3}};
        for (const auto& [spec, deg] : specs) {
            const Eigen::MatrixXcd U = to_unitary(spec, deg);
            const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(deg, deg);
            if ((U * U.adjoint() - eye).norm() > 1e-10) ok = false;
            const NormalizedCoupling nc = to_projector_form(U);
            if ((nc.P * nc.P - nc.P).norm() > 1e-10 ||
                (nc.C - nc.C.adjoint()).norm() > 1e-10)
                ok = false;
        }
        {
            Eigen::MatrixXcd A(2, 2), B(2, 2);
            A << 1, -1, -1.1, 0;
            B << 0, 0, 1, 1;
            const Eigen::MatrixXcd U = to_unitary(CouplingSpec::custom_ab(A, B), 2);
            if ((U - to_unitary(CouplingSpec::delta(1.1), 2)).norm() > 1e-10) {
                ok = false;
                detail = "AB -> U round-trip failed";
            }
        }

        // discrete spectra in [-1, 1], Theta intertwining, K properties
        for (const auto& [name, doc] : acceptance_graphs()) {
            const MetricGraph g = build(doc);
            const EigenDecomposition e =
                hermitian_eigs(degree_symmetrized(g, magnetic_adjacency(g)));
            if (e.eigenvalues.minCoeff() < -1.0 - 1e-12 ||
                e.eigenvalues.maxCoeff() > 1.0 + 1e-12) {
                ok = false;
                detail = name + std::string(": discrete spectrum outside [-1,1]");
            }

            const DeckIndex deck = deck_index(g);
            std::vector<NormalizedCoupling> ncs;
            for (int v = 0; v < g.vertex_count(); ++v)
                ncs.push_back(to_projector_form(to_unitary(g.couplings[v], g.deg[v])));
            const Eigen::MatrixXd theta = theta_map(g, deck, ncs);
            const int nv = g.vertex_count();
            if ((theta.transpose() * theta - Eigen::MatrixXd::Identity(nv, nv)).norm() >
                1e-12) {
                ok = false;
                detail = name + std::string(": Theta not an isometry");
            }
            const Eigen::MatrixXd ds = deck_shift(g, deck);
            const Eigen::MatrixXcd dsym = degree_symmetrized(g, adjacency_operator(g));
            const Eigen::MatrixXcd dp =
                theta * theta.transpose() * ds * theta * theta.transpose();
            if ((dp * theta - theta * dsym).norm() > 1e-12) {
                ok = false;
                detail = name + std::string(": D_P Theta != Theta Delta");
            }

            for (int gap = 0; gap <= 2; ++gap) {
                ContextOptions opts;
                opts.gap = gap;
                const ReductionContext ctx = make_context(g, opts);
                const KInterval K = locate_K(ctx);  // throws if disconnected
                if (K.empty) continue;
                if (K.min_abs_mprime < 1e-8) {
                    ok = false;
                    detail = name + std::string(": min |eta'| on K below 1e-8");
                }
                for (int i = 0; i <= 8; ++i) {
                    const double z = K.lo + (K.hi - K.lo) * i / 8.0;
                    const double mp = ctx.m_prime_real(z), n = ctx.n_real(z);
                    if (std::abs(mp) > 1e-12 && std::abs(n) > 1e-12 && mp * n <= 0.0) {
                        ok = false;
                        detail = name + std::string(": sign(eta') != sign(n) on K");
                    }
                }
            }
        }

        // z-derivatives against central differences
        for (int rep = 0; rep < 20; ++rep) {
            const Potential V = random_potential(rng);
            const double z = std::uniform_real_distribution<double>(-5.0, 40.0)(rng);
            // h large enough that integrator noise ~1e-11, amplified by
            // 1/(2h), stays below the 1e-6 relative bound
            const double h = 1e-4 * (1.0 + std::abs(z));
            const TransferMatrix tm = transfer(V, 1.0, z, true);
            const TransferMatrix lo = transfer(V, 1.0, z - h);
            const TransferMatrix hi = transfer(V, 1.0, z + h);
            auto rel = [](cplx got, cplx want) {
                return std::abs(got - want) / (1.0 + std::abs(want));
            };
            if (rel(tm.dc_dz, (hi.c - lo.c) / (2 * h)) > 1e-6 ||
                rel(tm.ds_dz, (hi.s - lo.s) / (2 * h)) > 1e-6 ||
                rel(tm.dcp_dz, (hi.cp - lo.cp) / (2 * h)) > 1e-6 ||
                rel(tm.dsp_dz, (hi.sp - lo.sp) / (2 * h)) > 1e-6) {
                ok = false;
                detail = "z-derivative finite-difference mismatch";
            }
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(9, "property suites (Wronskian, couplings, discrete, K, derivatives)", ok,
           detail.empty() ? "all sub-properties hold" : detail);
}

void criterion10() {
    bool ok = true;
    std::string detail;
    // asymmetric V with the delta family on a graph with varying outdeg/deg
    try {
        make_context(build(path3([](int) { return delta(0.0); }, linear_potential())));
        ok = false;
        detail = "asymmetric potential was not rejected";
    } catch (const PreconditionError&) {
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("wrong error class: ") + e.what();
    }
    // alpha(v) not proportional to degree: must name the two offending eigenvalues
    try {
        make_context(build(star3([](int) { return delta(1.0); })));
        ok = false;
        detail = "non-proportional alpha(v) was not rejected";
    } catch (const PreconditionError& e) {
        const std::string msg = e.what();
        if (msg.find("theta_1") == std::string::npos ||
            msg.find("theta_2") == std::string::npos) {
            ok = false;
            detail = "offending eigenvalues not named: " + msg;
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("wrong error class: ") + e.what();
    }
    report(10, "negative controls (hypothesis failures)", ok,
           detail.empty() ? "precondition errors raised as specified" : detail);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (failures == 0) {
        std::printf("all 10 acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", failures);
    return 1;
}
