#ifndef QG_GRAPH_HPP
#define QG_GRAPH_HPP

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "qg/coupling.hpp"
#include "qg/potential.hpp"

namespace qg {

struct Edge {
    std::string id;
    int tail = 0;        // index of iota(e) in vertices
    int head = 0;        // index of tau(e)
    double beta = 0.0;   // magnetic phase, radians
};

/// Finite equilateral metric graph. Immutable after build_graph.
struct MetricGraph {
    std::vector<std::string> vertices;  // sorted lexicographically by id
    std::vector<Edge> edges;            // sorted lexicographically by id
    double length = 1.0;
    Potential potential;
    std::vector<CouplingSpec> couplings;  // per vertex

    std::vector<int> deg, indeg, outdeg;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int edge_count() const { return static_cast<int>(edges.size()); }
    int vertex_index(const std::string& id) const;
    bool has_magnetic_phases() const;
};

// Parses and validates the graph description document. Throws
// ValidationError on malformed input, isolated vertices, deg > max_degree.
MetricGraph build_graph(const nlohmann::json& doc, int max_degree = 64);
MetricGraph load_graph_file(const std::string& path, int max_degree = 64);

enum class End { Iota, Tau };

struct Slot {
    int vertex;
    int edge;
    End end;
    bool operator==(const Slot&) const = default;
};

/// Half-edge indexing of the deck space G = (+)_v C^{deg v}.
/// Slots ordered by (vertex, edge id, end with iota < tau); vertex blocks
/// are contiguous.
struct DeckIndex {
    std::vector<Slot> slots;
    std::vector<int> vertex_offset;  // size |V|+1
    std::vector<int> partner_;       // involution pairing the two ends of each edge

    int size() const { return static_cast<int>(slots.size()); }
    int partner(int slot) const { return partner_[slot]; }
    int find(int vertex, int edge, End end) const;
    int block_begin(int v) const { return vertex_offset[v]; }
    int block_end(int v) const { return vertex_offset[v + 1]; }
};

DeckIndex deck_index(const MetricGraph& g);

}  // namespace qg

#endif
