#include "qg/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "qg/errors.hpp"

namespace qg {

using nlohmann::json;

int MetricGraph::vertex_index(const std::string& id) const {
    const auto it = std::lower_bound(vertices.begin(), vertices.end(), id);
    if (it == vertices.end() || *it != id)
        throw ValidationError("unknown vertex id '" + id + "'");
    return static_cast<int>(it - vertices.begin());
}

bool MetricGraph::has_magnetic_phases() const {
    for (const auto& e : edges)
        if (e.beta != 0.0) return true;
    return false;
}

namespace {

std::complex<double> parse_entry(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2)
        return {j[0].get<double>(), j[1].get<double>()};
    throw ValidationError("matrix entry must be a number or [re, im]");
}

Eigen::MatrixXcd parse_matrix(const json& j) {
    if (!j.is_array() || j.empty())
        throw ValidationError("expected a non-empty matrix (array of rows)");
    const auto rows = j.size();
    const auto cols = j[0].size();
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j[r].size() != cols) throw ValidationError("ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_entry(j[r][c]);
    }
    return m;
}

Potential parse_potential(const json& j) {
    if (j.is_null()) return Potential::zero();
    const std::string kind = j.value("kind", "zero");
    if (kind == "zero") return Potential::zero();
    if (kind == "polynomial") {
        if (!j.contains("coefficients"))
            throw ValidationError("polynomial potential needs 'coefficients'");
        return Potential::polynomial(j["coefficients"].get<std::vector<double>>());
    }
    if (kind == "table") {
        if (!j.contains("samples"))
            throw ValidationError("table potential needs 'samples'");
        std::vector<double> xs, vs;
        for (const auto& row : j["samples"]) {
            if (!row.is_array() || row.size() != 2)
                throw ValidationError("table sample must be [x, V(x)]");
            xs.push_back(row[0].get<double>());
            vs.push_back(row[1].get<double>());
        }
        return Potential::table(std::move(xs), std::move(vs));
    }
    throw ValidationError("unknown potential kind '" + kind + "'");
}

CouplingSpec parse_coupling(const json& j) {
    if (j.is_null()) return CouplingSpec::delta(0.0);
    const std::string type = j.value("type", "delta");
    const json params = j.value("parameters", json::object());
    if (type == "delta") return CouplingSpec::delta(params.value("alpha", 0.0));
    if (type == "delta_prime") {
        if (!params.contains("beta"))
            throw ValidationError("delta_prime coupling needs parameter 'beta'");
        return CouplingSpec::delta_prime(params["beta"].get<double>());
    }
    if (type == "delta_prime_s")
        return CouplingSpec::delta_prime_s(params.value("alpha", 0.0));
    if (type == "custom_AB") {
        if (!params.contains("A") || !params.contains("B"))
            throw ValidationError("custom_AB coupling needs 'A' and 'B'");
        return CouplingSpec::custom_ab(parse_matrix(params["A"]), parse_matrix(params["B"]));
    }
    if (type == "custom_U") {
        if (!params.contains("U")) throw ValidationError("custom_U coupling needs 'U'");
        return CouplingSpec::custom_u(parse_matrix(params["U"]));
    }
    throw ValidationError("unknown coupling kind '" + type + "'");
}

}  // namespace

MetricGraph build_graph(const json& doc, int max_degree) {
    MetricGraph g;
    g.length = doc.value("length", 1.0);
    if (!(g.length > 0.0)) throw ValidationError("edge length must be positive");
    g.potential = parse_potential(doc.value("potential", json()));
    g.potential.validate_for_length(g.length);

    if (!doc.contains("vertices") || !doc.contains("edges"))
        throw ValidationError("graph document needs 'vertices' and 'edges'");

    std::map<std::string, CouplingSpec> couplings;
    for (const auto& jv : doc["vertices"]) {
        const std::string id = jv.at("id").get<std::string>();
        if (couplings.count(id)) throw ValidationError("duplicate vertex id '" + id + "'");
        couplings[id] = parse_coupling(jv.value("coupling", json()));
    }
    for (const auto& [id, cs] : couplings) g.vertices.push_back(id);
    std::sort(g.vertices.begin(), g.vertices.end());
    for (const auto& id : g.vertices) g.couplings.push_back(couplings[id]);

    std::set<std::string> edge_ids;
    for (const auto& je : doc["edges"]) {
        Edge e;
        e.id = je.at("id").get<std::string>();
        if (!edge_ids.insert(e.id).second)
            throw ValidationError("duplicate edge id '" + e.id + "'");
        e.tail = g.vertex_index(je.at("tail").get<std::string>());
        e.head = g.vertex_index(je.at("head").get<std::string>());
        e.beta = je.value("beta", 0.0);
        g.edges.push_back(e);
    }
    std::sort(g.edges.begin(), g.edges.end(),
              [](const Edge& a, const Edge& b) { return a.id < b.id; });

    const int nv = g.vertex_count();
    g.deg.assign(nv, 0);
    g.indeg.assign(nv, 0);
    g.outdeg.assign(nv, 0);
    for (const auto& e : g.edges) {
        g.outdeg[e.tail] += 1;
        g.indeg[e.head] += 1;
        g.deg[e.tail] += 1;
        g.deg[e.head] += 1;  // a self-loop contributes 2
    }
    for (int v = 0; v < nv; ++v) {
        if (g.deg[v] == 0)
            throw ValidationError("isolated vertex '" + g.vertices[v] + "'");
        if (g.deg[v] > max_degree)
            throw ValidationError("vertex '" + g.vertices[v] + "' exceeds degree bound " +
                                  std::to_string(max_degree));
    }
    return g;
}

MetricGraph load_graph_file(const std::string& path, int max_degree) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open graph file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("parse error in '" + path + "': " + e.what());
    }
    return build_graph(doc, max_degree);
}

int DeckIndex::find(int vertex, int edge, End end) const {
    for (int i = vertex_offset[vertex]; i < vertex_offset[vertex + 1]; ++i)
        if (slots[i].edge == edge && slots[i].end == end) return i;
    throw ValidationError("deck slot not found");
}

DeckIndex deck_index(const MetricGraph& g) {
    DeckIndex d;
    const int nv = g.vertex_count();
    d.vertex_offset.assign(nv + 1, 0);
    for (int v = 0; v < nv; ++v) {
        d.vertex_offset[v] = static_cast<int>(d.slots.size());
        // edges already sorted by id; iota slot before tau slot for self-loops
        for (int e = 0; e < g.edge_count(); ++e) {
            if (g.edges[e].tail == v) d.slots.push_back({v, e, End::Iota});
            if (g.edges[e].head == v) d.slots.push_back({v, e, End::Tau});
        }
    }
    d.vertex_offset[nv] = static_cast<int>(d.slots.size());

    d.partner_.assign(d.slots.size(), -1);
    for (int i = 0; i < d.size(); ++i) {
        const Slot& s = d.slots[i];
        const End other = s.end == End::Iota ? End::Tau : End::Iota;
        const int ov = other == End::Iota ? g.edges[s.edge].tail : g.edges[s.edge].head;
        d.partner_[i] = d.find(ov, s.edge, other);
    }
    return d;
}

}  // namespace qg
