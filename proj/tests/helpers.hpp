#ifndef QG_TEST_HELPERS_HPP
#define QG_TEST_HELPERS_HPP

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qg/graph.hpp"

namespace qgtest {

using nlohmann::json;

inline json delta(double alpha_v) {
    return {{"type", "delta"}, {"parameters", {{"alpha", alpha_v}}}};
}
inline json delta_prime(double beta_v) {
    return {{"type", "delta_prime"}, {"parameters", {{"beta", beta_v}}}};
}
inline json delta_prime_s(double alpha_v) {
    return {{"type", "delta_prime_s"}, {"parameters", {{"alpha", alpha_v}}}};
}

struct EdgeSpec {
    std::string id, tail, head;
    double beta = 0.0;
};

inline json graph_doc(const std::vector<std::pair<std::string, json>>& vertices,
                      const std::vector<EdgeSpec>& edges,
                      json potential = {{"kind", "zero"}}, double length = 1.0) {
    json doc{{"length", length}, {"potential", potential}};
    doc["vertices"] = json::array();
    for (const auto& [id, c] : vertices) doc["vertices"].push_back({{"id", id}, {"coupling", c}});
    doc["edges"] = json::array();
    for (const auto& e : edges) {
        json je{{"id", e.id}, {"tail", e.tail}, {"head", e.head}};
        if (e.beta != 0.0) je["beta"] = e.beta;
        doc["edges"].push_back(je);
    }
    return doc;
}

// coupling_of(deg) -> coupling json, so strengths can scale with degree
template <typename F>
json vertexed(const std::vector<std::pair<std::string, int>>& degs, F coupling_of,
              const std::vector<EdgeSpec>& edges, json potential = {{"kind", "zero"}}) {
    std::vector<std::pair<std::string, json>> vs;
    for (const auto& [id, d] : degs) vs.emplace_back(id, coupling_of(d));
    return graph_doc(vs, edges, potential);
}

// ---- the six acceptance graphs, V = 0, l = 1 ----

inline json single_edge(json c1, json c2) {
    return graph_doc({{"v1", c1}, {"v2", c2}}, {{"e1", "v1", "v2"}});
}
template <typename F>
json single_edge_f(F c) {
    return vertexed({{"v1", 1}, {"v2", 1}}, c, {{"e1", "v1", "v2"}});
}
template <typename F>
json path3(F c, json potential = {{"kind", "zero"}}) {
    return vertexed({{"v1", 1}, {"v2", 2}, {"v3", 1}}, c,
                    {{"e1", "v1", "v2"}, {"e2", "v2", "v3"}}, potential);
}
template <typename F>
json star3(F c, json potential = {{"kind", "zero"}}) {
    return vertexed({{"c", 3}, {"l1", 1}, {"l2", 1}, {"l3", 1}}, c,
                    {{"e1", "c", "l1"}, {"e2", "c", "l2"}, {"e3", "c", "l3"}}, potential);
}
template <typename F>
json triangle(F c, json potential = {{"kind", "zero"}}) {
    return vertexed({{"v1", 2}, {"v2", 2}, {"v3", 2}}, c,
                    {{"e1", "v1", "v2"}, {"e2", "v2", "v3"}, {"e3", "v3", "v1"}}, potential);
}
template <typename F>
json double_edge(F c) {
    return vertexed({{"v1", 2}, {"v2", 2}}, c, {{"e1", "v1", "v2"}, {"e2", "v1", "v2"}});
}
template <typename F>
json loop_pendant(F c) {
    // self-loop at v1 (deg 3 with the pendant), pendant edge to v2
    return vertexed({{"v1", 3}, {"v2", 1}}, c, {{"e1", "v1", "v1"}, {"e2", "v1", "v2"}});
}
template <typename F>
json cycle4(F c, json potential = {{"kind", "zero"}}, double flux = 0.0) {
    std::vector<EdgeSpec> es{{"e1", "v1", "v2", flux / 4},
                             {"e2", "v2", "v3", flux / 4},
                             {"e3", "v3", "v4", flux / 4},
                             {"e4", "v4", "v1", flux / 4}};
    return vertexed({{"v1", 2}, {"v2", 2}, {"v3", 2}, {"v4", 2}}, c, es, potential);
}

inline json cos_potential() {
    json samples = json::array();
    for (int i = 0; i <= 200; ++i) {
        const double x = i / 200.0;
        samples.push_back({x, std::cos(2 * M_PI * x)});
    }
    return {{"kind", "table"}, {"samples", samples}};
}

inline json linear_potential() { return {{"kind", "polynomial"}, {"coefficients", {0.0, 1.0}}}; }

inline qg::MetricGraph build(const json& doc) { return qg::build_graph(doc); }

}  // namespace qgtest

#endif
