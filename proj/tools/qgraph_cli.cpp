// qgraph: spectra of Sturm-Liouville operators on equilateral metric
// graphs via discrete reduction, with a secular-equation oracle and
// spectral-measure verification.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qg/errors.hpp"
#include "qg/graph.hpp"
#include "qg/measure.hpp"
#include "qg/ode.hpp"
#include "qg/secular.hpp"
#include "qg/weyl.hpp"

namespace {

using nlohmann::json;

std::string fnv1a_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qg::ValidationError("cannot open input file: " + path);
    std::uint64_t h = 1469598103934665603ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Report {
    std::string command;
    std::string digest;
    json parameters = json::object();
    json checks = json::object();  // name -> bool
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    double elapsed_ms = 0.0;

    void emit(const std::string& format) const {
        if (format == "structured") {
            json doc{{"command", command},
                     {"input_digest", digest},
                     {"parameters", parameters},
                     {"checks", checks},
                     {"columns", columns},
                     {"rows", rows},
                     {"elapsed_ms", elapsed_ms}};
            std::cout << doc.dump(2) << "\n";
            return;
        }
        if (format == "csv") {
            for (std::size_t i = 0; i < columns.size(); ++i)
                std::cout << columns[i] << (i + 1 < columns.size() ? "," : "\n");
            for (const auto& r : rows)
                for (std::size_t i = 0; i < r.size(); ++i)
                    std::cout << r[i] << (i + 1 < r.size() ? "," : "\n");
            return;
        }
        std::cout << "# " << command << "  input:" << digest << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            std::cout << columns[i] << (i + 1 < columns.size() ? "\t" : "\n");
        for (const auto& r : rows)
            for (std::size_t i = 0; i < r.size(); ++i)
                std::cout << r[i] << (i + 1 < r.size() ? "\t" : "\n");
        for (auto it = checks.begin(); it != checks.end(); ++it)
            std::cout << it.key() << ": " << (it.value().get<bool>() ? "PASS" : "FAIL")
                      << "\n";
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void spectral_rows(Report& rep, const qg::SpectralResult& res) {
    rep.columns = {"z", "multiplicity", "lambda", "method", "residual"};
    for (const auto& e : res.entries)
        rep.rows.push_back({num(e.z), std::to_string(e.multiplicity), num(e.lambda),
                            e.method, num(e.residual)});
}

struct Cli {
    std::string graph_file;
    std::string format = "table";
    int count = 8;
    int gap = 0;
    std::vector<double> interval;
    std::vector<double> eps;
    std::optional<double> z_min;
    double zmin_value = 0.0;
    bool zmin_set = false;
};

qg::ContextOptions context_options(const Cli& c) {
    qg::ContextOptions opts;
    opts.gap = c.gap;
    if (c.interval.size() == 2) opts.interval = {c.interval[0], c.interval[1]};
    if (c.zmin_set) opts.z_min = c.zmin_value;
    return opts;
}

int run(int argc, char** argv) {
    CLI::App app{"spectra of differential operators on equilateral metric graphs"};
    app.require_subcommand(1);

    Cli c;
    std::string cmd_name;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("graph", c.graph_file, "graph description JSON file")->required();
        sub->add_option("--format", c.format, "output format")
            ->check(CLI::IsMember({"table", "csv", "structured"}));
        sub->add_option("--z-min", c.zmin_value, "left endpoint of the lowest gap")
            ->each([&](const std::string&) { c.zmin_set = true; });
        sub->callback([&, sub] { cmd_name = sub->get_name(); });
        return sub;
    };

    auto* dirichlet = add_common(app.add_subcommand("dirichlet", "reference spectrum"));
    dirichlet->add_option("--count", c.count, "number of eigenvalues");

    add_common(app.add_subcommand("discrete", "discrete operator spectrum"));

    auto* reduce = add_common(app.add_subcommand("reduce", "reduced spectrum on a gap"));
    reduce->add_option("--gap", c.gap, "gap index (0 = lowest)");
    reduce->add_option("--interval", c.interval, "explicit interval a b")->expected(2);

    auto* oracle = add_common(app.add_subcommand("oracle", "secular-equation spectrum"));
    oracle->add_option("--interval", c.interval, "scan interval a b")
        ->expected(2)
        ->required();

    auto* verify = add_common(app.add_subcommand("verify", "reduce + oracle + compare"));
    verify->add_option("--gap", c.gap, "gap index (0 = lowest)");

    auto* measure = add_common(app.add_subcommand("measure", "spectral-measure identity"));
    measure->add_option("--interval", c.interval, "Borel interval a b")
        ->expected(2)
        ->required();
    measure->add_option("--eps", c.eps, "epsilon ladder (strictly decreasing)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Report rep;
    rep.command = cmd_name;
    rep.digest = fnv1a_digest(c.graph_file);
    const qg::MetricGraph g = qg::load_graph_file(c.graph_file);

    bool failed_check = false;

    if (cmd_name == "dirichlet") {
        rep.parameters = {{"count", c.count}};
        const bool neumann =
            !g.couplings.empty() &&
            (g.couplings.front().kind == qg::CouplingSpec::Kind::DeltaPrimeS ||
             g.couplings.front().kind == qg::CouplingSpec::Kind::DeltaPrime);
        const qg::GapList list =
            neumann ? qg::neumann_spectrum(g.potential, g.length, c.count, c.zmin_value,
                                           c.zmin_set)
                    : qg::dirichlet_spectrum(g.potential, g.length, c.count, c.zmin_value,
                                             c.zmin_set);
        rep.columns = {"index", "nu", "gap_lo", "gap_hi"};
        for (std::size_t i = 0; i < list.eigenvalues.size(); ++i) {
            const auto [lo, hi] = list.gap(static_cast<int>(i));
            rep.rows.push_back({std::to_string(i + 1), num(list.eigenvalues[i]), num(lo),
                                num(hi)});
        }
    } else if (cmd_name == "discrete") {
        const qg::ReductionContext ctx = qg::make_context(g, context_options(c));
        rep.columns = {"lambda", "multiplicity"};
        for (const auto& [lam, mult] : ctx.Teig.grouped)
            rep.rows.push_back({num(lam), std::to_string(mult)});
    } else if (cmd_name == "reduce") {
        rep.parameters = {{"gap", c.gap}};
        const qg::ReductionContext ctx = qg::make_context(g, context_options(c));
        const qg::ReduceReport rr = qg::reduce_spectrum(ctx);
        rep.parameters["interval"] = {rr.result.interval_a, rr.result.interval_b};
        spectral_rows(rep, rr.result);
        rep.checks["k_nonempty"] = !rr.K.empty || rr.result.entries.empty();
    } else if (cmd_name == "oracle") {
        rep.parameters = {{"interval", {c.interval[0], c.interval[1]}}};
        spectral_rows(rep, qg::oracle_spectrum(g, c.interval[0], c.interval[1]));
    } else if (cmd_name == "verify") {
        rep.parameters = {{"gap", c.gap}};
        const qg::ReductionContext ctx = qg::make_context(g, context_options(c));
        const qg::ReduceReport rr = qg::reduce_spectrum(ctx);
        // compare away from the gap endpoints, where the oracle would pick
        // up genuine eigenvalues of the reference spectrum
        const double ca = ctx.gap_a + 1e-3 * (1.0 + std::abs(ctx.gap_a));
        const double cb = ctx.gap_b - 1e-3 * (1.0 + std::abs(ctx.gap_b));
        qg::SpectralResult reduced;
        for (const auto& e : rr.result.entries)
            if (e.z > ca && e.z < cb) reduced.entries.push_back(e);
        qg::SpectralResult oracle_res;
        if (ca < cb)
            for (const auto& e : qg::oracle_spectrum(g, ca, cb).entries)
                oracle_res.entries.push_back(e);
        const qg::CompareReport cmp = qg::compare_spectra(reduced, oracle_res, 1e-6);
        spectral_rows(rep, rr.result);
        rep.checks["spectra_match"] = cmp.ok;
        rep.parameters["max_z_error"] = cmp.max_z_error;
        for (const auto& d : cmp.details) rep.parameters["mismatches"].push_back(d);
        if (!cmp.ok) failed_check = true;
    } else if (cmd_name == "measure") {
        const qg::ReductionContext ctx = qg::make_context(g, context_options(c));
        std::vector<double> ladder = c.eps.empty() ? qg::default_eps_ladder() : c.eps;
        const qg::MeasureReport mr =
            qg::measure_check(ctx, c.interval[0], c.interval[1], ladder);
        rep.parameters = {{"interval", {c.interval[0], c.interval[1]}}};
        rep.columns = {"eps", "discrepancy"};
        for (std::size_t i = 0; i < mr.eps.size(); ++i)
            rep.rows.push_back({num(mr.eps[i]), num(mr.discrepancy[i])});
        const double tol = 1e-3 * std::max(mr.rhs.norm(), 1e-30);
        rep.checks["monotone"] = mr.monotone;
        rep.checks["extrapolated_within_tol"] = mr.extrapolated_discrepancy <= tol;
        rep.checks["rhs_psd"] =
            mr.rhs_min_eigenvalue >= -1e-10 * std::max(mr.rhs.norm(), 1.0);
        rep.parameters["extrapolated_discrepancy"] = mr.extrapolated_discrepancy;
        if (!mr.monotone || mr.extrapolated_discrepancy > tol) failed_check = true;
    }

    rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    rep.emit(c.format);
    return failed_check ? 3 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const qg::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const qg::PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return 4;
    } catch (const qg::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
