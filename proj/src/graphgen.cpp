#include "rsgraph/graphgen.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "rsgraph/probability.hpp"

namespace rsg {

namespace {

std::uint32_t id_of(const std::vector<LatticePoint>& labels, const LatticePoint& p) {
    const auto it = std::lower_bound(labels.begin(), labels.end(), p);
    return static_cast<std::uint32_t>(it - labels.begin());
}

std::vector<std::vector<std::uint32_t>> adjacency(const TripartiteGraph& g) {
    std::vector<std::vector<std::uint32_t>> adj(g.padded_order);
    for (const auto& [u, v] : g.edges) {
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

std::variant<Construction, Witness> build_tripartite(const CornerSet& a, bool check_input) {
    if (check_input) {
        if (auto w = check_triple_condition(a)) return *w;
    }
    const int dim = a.dim();
    const std::size_t n = a.size();
    Construction c;
    c.labels1.reserve(n);
    c.labels2.reserve(n);
    c.labels3.reserve(n);
    LatticePoint sum(dim);
    for (std::size_t i = 0; i < n; ++i) {
        c.labels1.emplace_back(a.x(i), a.x(i) + dim);
        c.labels2.emplace_back(a.y(i), a.y(i) + dim);
        for (int d = 0; d < dim; ++d) sum[d] = a.x(i)[d] + a.y(i)[d];
        c.labels3.push_back(sum);
    }
    for (auto* labels : {&c.labels1, &c.labels2, &c.labels3}) {
        std::sort(labels->begin(), labels->end());
        labels->erase(std::unique(labels->begin(), labels->end()), labels->end());
    }
    const std::uint32_t p1 = static_cast<std::uint32_t>(c.labels1.size());
    const std::uint32_t p2 = static_cast<std::uint32_t>(c.labels2.size());
    const std::uint32_t p3 = static_cast<std::uint32_t>(c.labels3.size());
    c.system.part_sizes = {p1, p2, p3};
    c.system.triples.reserve(n);
    LatticePoint xv(dim), yv(dim);
    for (std::size_t i = 0; i < n; ++i) {
        xv.assign(a.x(i), a.x(i) + dim);
        yv.assign(a.y(i), a.y(i) + dim);
        for (int d = 0; d < dim; ++d) sum[d] = xv[d] + yv[d];
        c.system.triples.push_back({id_of(c.labels1, xv), p1 + id_of(c.labels2, yv),
                                    p1 + p2 + id_of(c.labels3, sum)});
    }
    c.graph.part_sizes = c.system.part_sizes;
    c.graph.edges.reserve(3 * n);
    for (const auto& t : c.system.triples) {
        c.graph.edges.emplace_back(t[0], t[1]);
        c.graph.edges.emplace_back(t[0], t[2]);
        c.graph.edges.emplace_back(t[1], t[2]);
    }
    std::sort(c.graph.edges.begin(), c.graph.edges.end());
    c.graph.edges.erase(std::unique(c.graph.edges.begin(), c.graph.edges.end()),
                        c.graph.edges.end());
    c.graph.padded_order = c.graph.base_order();
    return c;
}

// ---------------------------------------------------------------------------
// Triangles

TriangleList count_triangles(const TripartiteGraph& g) {
    TriangleList out;
    const auto adj = adjacency(g);
    for (const auto& [u, v] : g.edges) {
        // common neighbors w > v close a triangle counted once at u < v < w
        const auto& nu = adj[u];
        const auto& nv = adj[v];
        auto iu = std::upper_bound(nu.begin(), nu.end(), v);
        auto iv = std::upper_bound(nv.begin(), nv.end(), v);
        while (iu != nu.end() && iv != nv.end()) {
            if (*iu < *iv) {
                ++iu;
            } else if (*iv < *iu) {
                ++iv;
            } else {
                out.list.push_back({u, v, *iu});
                ++iu;
                ++iv;
            }
        }
    }
    std::sort(out.list.begin(), out.list.end());
    out.count = static_cast<std::int64_t>(out.list.size());
    return out;
}

namespace {

std::optional<Witness> edges_in_one_triangle(const TripartiteGraph& g, const TriangleList& tl,
                                             std::size_t stride) {
    std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> tri_of_edge;
    tri_of_edge.reserve(tl.list.size() * 3);
    auto key = [](std::uint32_t u, std::uint32_t v) {
        return (static_cast<std::uint64_t>(u) << 32) | v;
    };
    for (std::uint32_t t = 0; t < tl.list.size(); ++t) {
        const auto& tr = tl.list[t];
        tri_of_edge[key(tr[0], tr[1])].push_back(t);
        tri_of_edge[key(tr[0], tr[2])].push_back(t);
        tri_of_edge[key(tr[1], tr[2])].push_back(t);
    }
    for (std::size_t i = 0; i < g.edges.size(); i += stride) {
        const auto& [u, v] = g.edges[i];
        const auto it = tri_of_edge.find(key(u, v));
        const std::size_t cnt = it == tri_of_edge.end() ? 0 : it->second.size();
        if (cnt == 1) continue;
        Witness w;
        w.kind = WitnessKind::diamond;
        w.edge = {u, v};
        if (it != tri_of_edge.end())
            for (std::uint32_t t : it->second) w.triangles.push_back(tl.list[t]);
        return w;
    }
    return std::nullopt;
}

}  // namespace

std::optional<Witness> verify_edge_disjoint(const TripartiteGraph& g) {
    const TriangleList tl = count_triangles(g);
    return edges_in_one_triangle(g, tl, 1);
}

std::optional<Witness> verify_graph(const TripartiteGraph& g, const TripleSystem& ts,
                                    VerifyLevel level) {
    if (level == VerifyLevel::off) return std::nullopt;
    const TriangleList tl = count_triangles(g);
    if (level == VerifyLevel::full) {
        // triple list must be exactly the triangle list
        std::vector<std::array<std::uint32_t, 3>> declared;
        declared.reserve(ts.triples.size());
        for (auto t : ts.triples) {
            std::sort(t.begin(), t.end());
            declared.push_back(t);
        }
        std::sort(declared.begin(), declared.end());
        if (declared != tl.list) {
            Witness w;
            w.kind = WitnessKind::diamond;
            // first discrepancy, reported as the offending triple's first edge
            std::vector<std::array<std::uint32_t, 3>> diff;
            std::set_symmetric_difference(declared.begin(), declared.end(), tl.list.begin(),
                                          tl.list.end(), std::back_inserter(diff));
            if (!diff.empty()) {
                w.edge = {diff[0][0], diff[0][1]};
                w.triangles.push_back(diff[0]);
            }
            return w;
        }
        return edges_in_one_triangle(g, tl, 1);
    }
    return edges_in_one_triangle(g, tl, 8);
}

// ---------------------------------------------------------------------------
// Report

DensityReport density_report(const TripartiteGraph& g, std::int64_t n, const ReportContext& ctx) {
    for (std::uint32_t p : g.part_sizes)
        if (static_cast<std::int64_t>(p) > n)
            throw std::invalid_argument("density_report: part size exceeds n");
    const std::int64_t edges = static_cast<std::int64_t>(g.edges.size());
    if (ctx.verified && edges != 3 * ctx.triangle_count)
        throw std::invalid_argument("density_report: verified graph must have e = 3 * triangles");
    DensityReport r;
    r.ctx = ctx;
    r.order = 3 * n;
    r.edge_count = edges;
    r.parts = g.part_sizes;
    r.eta_lower = Fraction(edges, 9 * n * n);
    r.eta_lower_conservative = Fraction(ctx.a, 9 * n * n);
    const TheoryCurves tc = theory_curves(ctx.dim, static_cast<double>(n));
    r.theory_behrend = tc.behrend;
    r.theory_green = tc.green;
    r.theory_new = tc.ball;
    r.epsilon = r.eta_lower.value() / 3.0;
    r.delta_bound = 1.0 / static_cast<double>(3 * n);
    return r;
}

nlohmann::json DensityReport::to_json() const {
    nlohmann::json params{{"kind", ctx.kind}, {"dim", ctx.dim},   {"n", ctx.n},
                          {"m", ctx.m},       {"seed", ctx.seed}, {"shift_trials", ctx.shift_trials}};
    if (ctx.kind == "ball") {
        params["radius"] = ctx.radius;
        params["shift"] = ctx.shift;
        params["shift_target"] = ctx.shift_target;
        params["shift_achieved"] = ctx.shift_achieved;
    }
    nlohmann::json counts{{"A0", ctx.a0},       {"classes", ctx.classes}, {"A", ctx.a},
                          {"X", ctx.x_size},    {"Y", ctx.y_size},        {"Z", ctx.z_size},
                          {"pre_trim_pairs", ctx.pre_trim_pairs},
                          {"post_trim_pairs", ctx.post_trim_pairs},
                          {"trim_rounds", ctx.trim_rounds},
                          {"size_bound_2n_held", ctx.size_bound_2n_held}};
    if (ctx.kind == "abstract") {
        counts["W0"] = ctx.w0_size;
        counts["best_t"] = ctx.best_t;
        counts["p_hat"] = {{"num", ctx.p_hat.num}, {"den", ctx.p_hat.den}, {"value", ctx.p_hat.value()}};
        counts["p_reference"] = {{"num", ctx.p_reference.num},
                                 {"den", ctx.p_reference.den},
                                 {"value", ctx.p_reference.value()}};
    }
    nlohmann::json graph{{"order", order},
                         {"edges", edge_count},
                         {"triangles", ctx.triangle_count},
                         {"parts", {parts[0], parts[1], parts[2]}},
                         {"verified", ctx.verified},
                         {"verify_level", ctx.verify_level}};
    return nlohmann::json{
        {"params", params},
        {"counts", counts},
        {"graph", graph},
        {"eta_lower", {{"num", eta_lower.num}, {"den", eta_lower.den}, {"value", eta_lower.value()}}},
        {"eta_lower_conservative",
         {{"num", eta_lower_conservative.num},
          {"den", eta_lower_conservative.den},
          {"value", eta_lower_conservative.value()}}},
        {"theory", {{"behrend", theory_behrend}, {"green", theory_green}, {"new", theory_new}}},
        {"epsilon", epsilon},
        {"delta_bound", delta_bound}};
}

// ---------------------------------------------------------------------------
// File format

void export_graph(const TripartiteGraph& g, const TripleSystem& ts, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("export_graph: cannot open " + path);
    out << "rs-graph " << g.part_sizes[0] << " " << g.part_sizes[1] << " " << g.part_sizes[2]
        << " " << g.padded_order << " " << g.edges.size() << " " << ts.triples.size() << "\n";
    for (const auto& [u, v] : g.edges) out << "e " << u << " " << v << "\n";
    for (const auto& t : ts.triples) out << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
    if (!out) throw std::runtime_error("export_graph: write failed for " + path);
}

GraphFile read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_graph: cannot open " + path);
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> bool {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty()) return true;
        }
        ++line_no;
        return false;
    };
    if (!next_line()) throw FormatError("read_graph: missing header", line_no);
    std::istringstream head(line);
    std::string magic;
    std::uint32_t p1, p2, p3, padded;
    std::uint64_t edge_count, triple_count;
    if (!(head >> magic >> p1 >> p2 >> p3 >> padded >> edge_count >> triple_count) ||
        magic != "rs-graph")
        throw FormatError("read_graph: bad header, expected 'rs-graph p1 p2 p3 order edges triples'",
                          line_no);
    GraphFile f;
    f.graph.part_sizes = {p1, p2, p3};
    f.graph.padded_order = padded;
    f.system.part_sizes = {p1, p2, p3};
    if (padded < p1 + p2 + p3)
        throw FormatError("read_graph: padded order smaller than part sum", line_no);
    for (std::uint64_t i = 0; i < edge_count; ++i) {
        if (!next_line()) throw FormatError("read_graph: unexpected end of file in edge list", line_no);
        std::istringstream ls(line);
        std::string tag;
        std::uint32_t u, v;
        if (!(ls >> tag >> u >> v) || tag != "e")
            throw FormatError("read_graph: expected 'e u v'", line_no);
        if (u >= v) throw FormatError("read_graph: edge must satisfy u < v", line_no);
        if (v >= padded) throw FormatError("read_graph: vertex id beyond padded order", line_no);
        f.graph.edges.emplace_back(u, v);
    }
    for (std::uint64_t i = 0; i < triple_count; ++i) {
        if (!next_line())
            throw FormatError("read_graph: unexpected end of file in triple list", line_no);
        std::istringstream ls(line);
        std::string tag;
        std::uint32_t a, b, c;
        if (!(ls >> tag >> a >> b >> c) || tag != "t")
            throw FormatError("read_graph: expected 't a b c'", line_no);
        if (a >= padded || b >= padded || c >= padded)
            throw FormatError("read_graph: triple id beyond padded order", line_no);
        f.system.triples.push_back({a, b, c});
    }
    if (next_line()) throw FormatError("read_graph: trailing content", line_no);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> sorted_edges = f.graph.edges;
    std::sort(sorted_edges.begin(), sorted_edges.end());
    if (std::adjacent_find(sorted_edges.begin(), sorted_edges.end()) != sorted_edges.end())
        throw FormatError("read_graph: duplicate edge", line_no);
    f.graph.edges = std::move(sorted_edges);
    return f;
}

nlohmann::json witness_to_json(const Witness& w) {
    nlohmann::json j;
    switch (w.kind) {
        case WitnessKind::corner: j["kind"] = "corner"; break;
        case WitnessKind::three_ap: j["kind"] = "three-ap"; break;
        case WitnessKind::triple_condition: j["kind"] = "triple-condition"; break;
        case WitnessKind::diamond: j["kind"] = "diamond"; break;
    }
    if (!w.points.empty()) j["points"] = w.points;
    if (!w.difference.empty()) j["difference"] = w.difference;
    if (!w.pairs.empty()) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& [x, y] : w.pairs) pairs.push_back({{"x", x}, {"y", y}});
        j["pairs"] = pairs;
    }
    if (w.kind == WitnessKind::diamond) {
        j["edge"] = {w.edge.first, w.edge.second};
        nlohmann::json tris = nlohmann::json::array();
        for (const auto& t : w.triangles) tris.push_back({t[0], t[1], t[2]});
        j["triangles"] = tris;
    }
    j["description"] = w.describe();
    return j;
}

}  // namespace rsg
