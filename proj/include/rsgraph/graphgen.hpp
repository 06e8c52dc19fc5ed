#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "rsgraph/additive.hpp"

namespace rsg {

// Tripartite 3-uniform hypergraph over disjoint id ranges:
// V1 = [0, p1), V2 = [p1, p1+p2), V3 = [p1+p2, p1+p2+p3).
struct TripleSystem {
    std::array<std::uint32_t, 3> part_sizes{0, 0, 0};
    std::vector<std::array<std::uint32_t, 3>> triples;  // (v1, v2, v3), vi in part i

    std::uint32_t order() const { return part_sizes[0] + part_sizes[1] + part_sizes[2]; }
};

// Undirected simple graph with part bookkeeping. Graphs produced by
// build_tripartite only have edges crossing two distinct parts; arbitrary edge
// sets are accepted as verifier inputs.
struct TripartiteGraph {
    std::array<std::uint32_t, 3> part_sizes{0, 0, 0};
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // u < v, sorted, deduped
    std::uint32_t padded_order = 0;  // >= part sum; extra ids are isolated dummies

    std::uint32_t base_order() const { return part_sizes[0] + part_sizes[1] + part_sizes[2]; }
    int part_of(std::uint32_t v) const {
        if (v < part_sizes[0]) return 0;
        if (v < part_sizes[0] + part_sizes[1]) return 1;
        if (v < base_order()) return 2;
        return 3;  // padding
    }
};

// Output of the corner-set construction: one triple per pair, vertex parts are
// the deduplicated projection images relabeled to disjoint id ranges in sorted
// order of the underlying lattice points.
struct Construction {
    TripleSystem system;
    TripartiteGraph graph;
    std::vector<LatticePoint> labels1, labels2, labels3;  // id -> lattice point
};

// Builds the graph whose edges are the pairs inside each triple. When
// check_input is set, a triple-condition violation aborts the build and the
// witness is returned instead.
std::variant<Construction, Witness> build_tripartite(const CornerSet& a, bool check_input = true);

struct TriangleList {
    std::int64_t count = 0;
    std::vector<std::array<std::uint32_t, 3>> list;  // u < v < w, lexicographic
};

// Exact triangle enumeration via sorted-adjacency intersection over edges.
TriangleList count_triangles(const TripartiteGraph& g);

// std::nullopt iff every edge lies in exactly one triangle. The witness
// carries an edge together with the (0 or >= 2) triangles containing it.
std::optional<Witness> verify_edge_disjoint(const TripartiteGraph& g);

enum class VerifyLevel { full, sampled, off };

// Pipeline-facing verification: edge-disjointness plus consistency of the
// declared triple list with the actual triangles. `sampled` checks every-8th
// edge only; `off` skips everything.
std::optional<Witness> verify_graph(const TripartiteGraph& g, const TripleSystem& ts,
                                    VerifyLevel level);

// Provenance of one construction run, filled by the pipelines.
struct ReportContext {
    std::string kind;  // box | ball | abstract
    int dim = 1;
    std::int64_t n = 0;
    std::int64_t m = 0;       // box side parameter, or measured M after translation
    double radius = 0.0;      // ball pipeline only
    std::uint64_t seed = 0;
    std::int64_t shift_trials = 0;

    std::int64_t a0 = 0;       // pairs before pigeonhole extraction
    std::int64_t classes = 0;  // color classes present
    std::int64_t a = 0;        // extracted corner-free pairs
    std::int64_t x_size = 0, y_size = 0, z_size = 0;

    std::int64_t pre_trim_pairs = 0;
    std::int64_t post_trim_pairs = 0;
    std::int64_t trim_rounds = 0;
    bool size_bound_2n_held = true;
    std::vector<double> shift;  // chosen shift, when a shift search ran
    double shift_target = 0.0;
    bool shift_achieved = false;

    // abstract pipeline extras
    std::int64_t w0_size = 0;
    std::int64_t best_t = 0;
    Fraction p_hat{0, 1};
    Fraction p_reference{0, 1};

    bool verified = false;
    std::string verify_level = "full";
    std::int64_t triangle_count = 0;
};

struct DensityReport {
    ReportContext ctx;
    std::int64_t order = 0;  // 3n after padding
    std::int64_t edge_count = 0;
    std::array<std::uint32_t, 3> parts{0, 0, 0};
    Fraction eta_lower{0, 1};               // e(G) / (3n)^2
    Fraction eta_lower_conservative{0, 1};  // |A| / (9 n^2)
    double theory_behrend = 0.0, theory_green = 0.0, theory_new = 0.0;
    double epsilon = 0.0;      // eta_lower / 3
    double delta_bound = 0.0;  // 1 / (3n)

    nlohmann::json to_json() const;
};

// Pads to order exactly 3n (isolated dummies) and computes the densities.
// Requires every part size <= n and e(G) = 3 * triangle count.
DensityReport density_report(const TripartiteGraph& g, std::int64_t n, const ReportContext& ctx);

// Edge-list text format:
//   rs-graph <|V1|> <|V2|> <|V3|> <padded_order> <edge_count> <triple_count>
//   e <u> <v>      (one per edge, u < v)
//   t <a> <b> <c>  (one per triple)
void export_graph(const TripartiteGraph& g, const TripleSystem& ts, const std::string& path);

struct GraphFile {
    TripartiteGraph graph;
    TripleSystem system;
};

// Parses the edge-list format; FormatError carries the offending line number.
GraphFile read_graph(const std::string& path);

nlohmann::json witness_to_json(const Witness& w);

}  // namespace rsg
