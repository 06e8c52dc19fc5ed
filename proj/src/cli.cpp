#include "rsgraph/cli.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rsgraph/pipeline.hpp"
#include "rsgraph/probability.hpp"

namespace rsg {

namespace {

struct Flags {
    int dim = 1;
    std::int64_t n = 0;
    std::int64_t m = 0;
    std::uint64_t seed = 0;
    std::int64_t samples = 1'000'000;
    std::int64_t shift_trials = 64;
    unsigned threads = 0;
    std::string out_path;
    std::string format = "json";
    std::string verify = "full";
    std::int64_t budget_pairs = kDefaultPairBudget;
    std::int64_t budget_points = kDefaultPointBudget;
};

VerifyLevel parse_verify(const std::string& s) {
    if (s == "full") return VerifyLevel::full;
    if (s == "sampled") return VerifyLevel::sampled;
    if (s == "off") return VerifyLevel::off;
    throw std::invalid_argument("unknown verify level: " + s);
}

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
    cmd->add_option("--threads", f.threads, "worker cap (0 = hardware)")->capture_default_str();
    cmd->add_option("--out", f.out_path, "output path or prefix");
    cmd->add_option("--format", f.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "edgelist"}))
        ->capture_default_str();
    cmd->add_option("--budget-pairs", f.budget_pairs, "pair scan budget")->capture_default_str();
    cmd->add_option("--budget-points", f.budget_points, "point enumeration budget")
        ->capture_default_str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::string graph_text(const TripartiteGraph& g, const TripleSystem& ts) {
    std::ostringstream os;
    os << "rs-graph " << g.part_sizes[0] << " " << g.part_sizes[1] << " " << g.part_sizes[2] << " "
       << g.padded_order << " " << g.edges.size() << " " << ts.triples.size() << "\n";
    for (const auto& [u, v] : g.edges) os << "e " << u << " " << v << "\n";
    for (const auto& t : ts.triples) os << "t " << t[0] << " " << t[1] << " " << t[2] << "\n";
    return os.str();
}

int cmd_build(const std::string& kind, const Flags& f, std::ostream& out) {
    PipelineConfig cfg;
    if (kind == "box") {
        cfg.kind = PipelineConfig::Kind::box;
        cfg.m = f.m;
    } else if (kind == "ball") {
        cfg.kind = PipelineConfig::Kind::ball;
        cfg.n = f.n;
    } else {
        cfg.kind = PipelineConfig::Kind::abstract;
        cfg.n = f.n;
    }
    cfg.dim = f.dim;
    cfg.seed = f.seed;
    cfg.shift_trials = f.shift_trials;
    cfg.verify_level = parse_verify(f.verify);
    cfg.budget_points = f.budget_points;
    cfg.budget_pairs = f.budget_pairs;
    cfg.closure_samples = f.samples;
    cfg.workers = f.threads;
    cfg.validate();

    const PipelineResult r = run_pipeline(cfg);
    if (r.witness) {
        out << witness_to_json(*r.witness).dump(2) << "\n";
        return 2;
    }
    if (!f.out_path.empty()) {
        export_graph(r.graph, r.system, f.out_path + ".edgelist");
        write_file(f.out_path + ".json", r.report.to_json().dump(2) + "\n");
    }
    if (f.format == "edgelist") {
        out << graph_text(r.graph, r.system);
    } else if (f.format == "csv") {
        SweepCell cell;
        cell.cfg = cfg;
        cell.report = r.report;
        out << sweep_csv({cell});
    } else {
        out << r.report.to_json().dump(2) << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& path, std::ostream& out) {
    const GraphFile f = read_graph(path);
    if (auto w = verify_graph(f.graph, f.system, VerifyLevel::full)) {
        out << witness_to_json(*w).dump(2) << "\n";
        return 2;
    }
    out << "ok: every edge lies in exactly one triangle and the triple list is consistent\n";
    return 0;
}

nlohmann::json estimate_json(const char* op, const Flags& f, const ProbabilityEstimate& e) {
    return nlohmann::json{{"op", op},
                          {"dim", f.dim},
                          {"m", f.m},
                          {"samples", e.samples},
                          {"seed", f.seed},
                          {"value", e.value},
                          {"stderr", e.stderr_value},
                          {"method", method_name(e.method)},
                          {"quad_error", e.quad_error},
                          {"band_discards", e.band_discards},
                          {"identity_violations", e.identity_violations}};
}

int cmd_prob(const std::string& op, const Flags& f, std::ostream& out) {
    nlohmann::json j;
    if (op == "ball") {
        j = estimate_json("ball", f, mc_ball_closure(f.dim, f.samples, f.seed, f.threads));
    } else if (op == "sphere") {
        j = estimate_json("sphere", f, mc_sphere_closure(f.dim, f.samples, f.seed, f.threads));
    } else if (op == "sphere-exact") {
        j = estimate_json("sphere-exact", f, exact_sphere_closure(f.dim));
    } else if (op == "lower-bound") {
        const double v = lower_bound_integral(f.dim);
        ProbabilityEstimate e;
        e.value = v;
        e.method = EstimateMethod::quadrature;
        j = estimate_json("lower-bound", f, e);
    } else {  // box
        const Fraction p = box_sum_probability(f.m);
        ProbabilityEstimate e;
        e.value = p.value();
        e.method = EstimateMethod::exact;
        j = estimate_json("box", f, e);
        j["num"] = p.num;
        j["den"] = p.den;
    }
    std::string rendered;
    if (f.format == "csv") {
        std::ostringstream os;
        os.precision(12);
        os << "op,dim,m,samples,seed,value,stderr,method\n";
        os << j["op"].get<std::string>() << "," << f.dim << "," << f.m << ","
           << j["samples"].get<std::int64_t>() << "," << f.seed << ","
           << j["value"].get<double>() << "," << j["stderr"].get<double>() << ","
           << j["method"].get<std::string>() << "\n";
        rendered = os.str();
    } else {
        rendered = j.dump(2) + "\n";
    }
    if (!f.out_path.empty())
        write_file(f.out_path, rendered);
    else
        out << rendered;
    return 0;
}

int cmd_curves(const Flags& f, double epsilon, std::ostream& out) {
    if (f.n < 2) throw std::invalid_argument("curves: --n must be >= 2");
    const OptimizeResult ob = optimize_D(f.n, CurveKind::behrend);
    const OptimizeResult og = optimize_D(f.n, CurveKind::green);
    const OptimizeResult on = optimize_D(f.n, CurveKind::ball);
    const int d_max = static_cast<int>(
        std::ceil(8.0 * std::sqrt(std::log2(static_cast<double>(f.n)))));

    nlohmann::json rows = nlohmann::json::array();
    for (int d = 1; d <= d_max; ++d) {
        const TheoryCurves c = theory_curves(d, static_cast<double>(f.n));
        rows.push_back(nlohmann::json{{"D", d},
                                      {"behrend", c.behrend},
                                      {"green", c.green},
                                      {"new", c.ball},
                                      {"opt_behrend", d == ob.d_best},
                                      {"opt_green", d == og.d_best},
                                      {"opt_new", d == on.d_best}});
    }
    nlohmann::json j{
        {"n", f.n},
        {"constants", {{"c_new", removal_constant_new()}, {"c_old", removal_constant_old()}}},
        {"optima",
         {{"behrend", {{"D", ob.d_best}, {"value", ob.value}, {"analytic_D", ob.d_analytic}}},
          {"green", {{"D", og.d_best}, {"value", og.value}, {"analytic_D", og.d_analytic}}},
          {"new", {{"D", on.d_best}, {"value", on.value}, {"analytic_D", on.d_analytic}}}}},
        {"rows", rows}};
    if (epsilon > 0.0) {
        nlohmann::json deltas;
        const std::pair<const char*, CurveKind> families[] = {
            {"behrend", CurveKind::behrend}, {"green", CurveKind::green}, {"new", CurveKind::ball}};
        for (const auto& [name, kind] : families) {
            const auto eta = [kind](std::int64_t n) {
                return optimize_D(std::max<std::int64_t>(n, 2), kind).value;
            };
            const DeltaBound d = eta_to_delta(eta, epsilon);
            deltas[name] = {{"epsilon", d.epsilon}, {"n_max", d.n_max}, {"delta", d.delta}};
        }
        j["delta"] = deltas;
    }

    std::string rendered;
    if (f.format == "csv") {
        std::ostringstream os;
        os.precision(12);
        os << "# n=" << f.n << " c_new=" << removal_constant_new()
           << " c_old=" << removal_constant_old() << "\n";
        os << "# optima: behrend D=" << ob.d_best << " value=" << ob.value
           << "; green D=" << og.d_best << " value=" << og.value << "; new D=" << on.d_best
           << " value=" << on.value << "\n";
        os << "n,D,behrend,green,new,opt_behrend,opt_green,opt_new\n";
        for (int d = 1; d <= d_max; ++d) {
            const TheoryCurves c = theory_curves(d, static_cast<double>(f.n));
            os << f.n << "," << d << "," << c.behrend << "," << c.green << "," << c.ball << ","
               << (d == ob.d_best ? 1 : 0) << "," << (d == og.d_best ? 1 : 0) << ","
               << (d == on.d_best ? 1 : 0) << "\n";
        }
        rendered = os.str();
    } else {
        rendered = j.dump(2) + "\n";
    }
    if (!f.out_path.empty())
        write_file(f.out_path, rendered);
    else
        out << rendered;
    return 0;
}

int cmd_sweep(const std::string& kind, const Flags& f, const std::vector<int>& dims,
              const std::vector<std::int64_t>& ms, const std::vector<std::int64_t>& ns,
              std::ostream& out) {
    PipelineConfig base;
    base.seed = f.seed;
    base.shift_trials = f.shift_trials;
    base.verify_level = parse_verify(f.verify);
    base.budget_points = f.budget_points;
    base.budget_pairs = f.budget_pairs;
    base.workers = f.threads;
    std::vector<std::int64_t> sizes;
    if (kind == "box") {
        base.kind = PipelineConfig::Kind::box;
        sizes = ms;
        if (sizes.empty()) throw std::invalid_argument("sweep: box kind needs --ms");
    } else if (kind == "ball") {
        base.kind = PipelineConfig::Kind::ball;
        sizes = ns;
        if (sizes.empty()) throw std::invalid_argument("sweep: ball kind needs --ns");
    } else {
        base.kind = PipelineConfig::Kind::abstract;
        sizes = ns;
        if (sizes.empty()) throw std::invalid_argument("sweep: abstract kind needs --ns");
    }
    std::vector<int> dim_range = dims.empty() ? std::vector<int>{f.dim} : dims;
    const auto cells = sweep(base, dim_range, sizes);
    const std::string rendered =
        f.format == "json" ? sweep_json(cells).dump(2) + "\n" : sweep_csv(cells);
    if (!f.out_path.empty())
        write_file(f.out_path, rendered);
    else
        out << rendered;
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Construction and verification of graphs whose every edge lies in exactly one "
                 "triangle, with the additive-combinatorics machinery behind them"};
    app.require_subcommand(1);
    Flags f;

    auto* build = app.add_subcommand("build", "construct a verified graph and report");
    std::string build_kind;
    build->add_option("kind", build_kind, "construction kind")
        ->required()
        ->check(CLI::IsMember({"box", "ball", "abstract"}));
    build->add_option("--dim", f.dim, "ambient dimension D")->capture_default_str();
    build->add_option("--n", f.n, "target set size n");
    build->add_option("--m", f.m, "box side parameter M (even)");
    build->add_option("--shift-trials", f.shift_trials, "shift search trials")
        ->capture_default_str();
    build->add_option("--samples", f.samples, "Monte-Carlo samples for the shift target")
        ->capture_default_str();
    build->add_option("--verify", f.verify, "verification level")
        ->check(CLI::IsMember({"full", "sampled", "off"}))
        ->capture_default_str();
    add_common(build, f);

    auto* verify = app.add_subcommand("verify", "re-verify an exported graph file");
    std::string verify_path;
    verify->add_option("path", verify_path, "graph file in edge-list format")->required();

    auto* prob = app.add_subcommand("prob", "probability estimates");
    bool p_ball = false, p_sphere = false, p_sphere_exact = false, p_box = false,
         p_lower = false;
    prob->add_flag("--ball", p_ball, "Monte-Carlo ball closure P(x+y in B)");
    prob->add_flag("--sphere", p_sphere, "Monte-Carlo sphere closure P(<u,v> <= -1/2)");
    prob->add_flag("--sphere-exact", p_sphere_exact, "quadrature sphere closure");
    prob->add_flag("--box", p_box, "exact box sum probability");
    prob->add_flag("--lower-bound", p_lower, "quadrature of (1-r^2)^{D/2} over [-1,-1/2]");
    prob->add_option("--dim", f.dim, "dimension D")->capture_default_str();
    prob->add_option("--m", f.m, "box half-width m");
    prob->add_option("--samples", f.samples, "Monte-Carlo samples")->capture_default_str();
    add_common(prob, f);

    auto* curves = app.add_subcommand("curves", "theory curves, optima and delta bounds");
    double epsilon = 0.0;
    curves->add_option("--n", f.n, "graph order for the curve table")->required();
    curves->add_option("--epsilon", epsilon, "also binary-search the delta(eps) bound");
    add_common(curves, f);

    auto* sweep_cmd = app.add_subcommand("sweep", "run a pipeline grid and tabulate");
    std::string sweep_kind;
    std::vector<int> dims;
    std::vector<std::int64_t> ms, ns;
    sweep_cmd->add_option("--kind", sweep_kind, "construction kind")
        ->required()
        ->check(CLI::IsMember({"box", "ball", "abstract"}));
    sweep_cmd->add_option("--dims", dims, "dimensions")->delimiter(',');
    sweep_cmd->add_option("--ms", ms, "box side parameters")->delimiter(',');
    sweep_cmd->add_option("--ns", ns, "set sizes")->delimiter(',');
    sweep_cmd->add_option("--shift-trials", f.shift_trials, "shift search trials")
        ->capture_default_str();
    sweep_cmd->add_option("--verify", f.verify, "verification level")
        ->check(CLI::IsMember({"full", "sampled", "off"}))
        ->capture_default_str();
    sweep_cmd->add_option("--dim", f.dim, "dimension when --dims is omitted")
        ->capture_default_str();
    add_common(sweep_cmd, f);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 1;
    }

    try {
        if (build->parsed()) return cmd_build(build_kind, f, out);
        if (verify->parsed()) return cmd_verify(verify_path, out);
        if (prob->parsed()) {
            const int selected = static_cast<int>(p_ball) + static_cast<int>(p_sphere) +
                                 static_cast<int>(p_sphere_exact) + static_cast<int>(p_box) +
                                 static_cast<int>(p_lower);
            if (selected != 1)
                throw std::invalid_argument(
                    "prob: pick exactly one of --ball --sphere --sphere-exact --box --lower-bound");
            const std::string op = p_ball          ? "ball"
                                   : p_sphere      ? "sphere"
                                   : p_sphere_exact ? "sphere-exact"
                                   : p_lower       ? "lower-bound"
                                                   : "box";
            return cmd_prob(op, f, out);
        }
        if (curves->parsed()) return cmd_curves(f, epsilon, out);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_kind, f, dims, ms, ns, out);
    } catch (const BudgetError& e) {
        err << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        err << "format error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace rsg
