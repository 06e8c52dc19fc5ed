#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsgraph/graphgen.hpp"

namespace rsg {

struct PipelineConfig {
    enum class Kind { box, ball, abstract };
    Kind kind = Kind::box;
    int dim = 1;
    std::int64_t n = 0;  // ball / abstract size parameter
    std::int64_t m = 0;  // box side parameter (even)
    std::uint64_t seed = 0;
    std::int64_t shift_trials = 64;
    VerifyLevel verify_level = VerifyLevel::full;
    std::int64_t budget_points = kDefaultPointBudget;
    std::int64_t budget_pairs = kDefaultPairBudget;
    std::int64_t closure_samples = 200'000;  // Monte-Carlo samples for the shift target
    unsigned workers = 0;                    // 0 = hardware concurrency

    void validate() const;
};

struct PipelineResult {
    DensityReport report;
    TripartiteGraph graph;
    TripleSystem system;
    std::optional<Witness> witness;  // set iff verification failed
};

// Product box construction: X = Y = {-M/2..M/2}^D translated into [M+1]^D,
// Z translated one box further; pairs with x+y in Z are colored by norm_color
// and the largest class becomes the graph.
PipelineResult run_box_pipeline(const PipelineConfig& cfg);

// Ball construction: radius with mu(B) = n, dyadic shift search, measured
// size check against 2n, deterministic 8-combo trim, translation into the
// positive orthant, color extraction, graph build and verification.
PipelineResult run_ball_pipeline(const PipelineConfig& cfg);

// Abstract reduction over X = Y = Z = {1..n} with a 3-AP-free difference set:
// scans all translates t in {-2n..n} and keeps the best pair set, which is
// corner-free wholesale (no coloring step).
PipelineResult run_abstract_pipeline(const PipelineConfig& cfg);

PipelineResult run_pipeline(const PipelineConfig& cfg);

struct SweepCell {
    PipelineConfig cfg;
    std::optional<DensityReport> report;
    std::string error;  // nonempty when the cell failed
};

// One pipeline run per (dim, size) cell; cell errors are recorded, not fatal.
std::vector<SweepCell> sweep(const PipelineConfig& base, const std::vector<int>& dims,
                             const std::vector<std::int64_t>& sizes);

std::string sweep_csv(const std::vector<SweepCell>& cells);
nlohmann::json sweep_json(const std::vector<SweepCell>& cells);

}  // namespace rsg
