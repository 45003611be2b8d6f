// Command-line front end: ingestion -> enumeration / chain sampling ->
// metrics -> elections -> report files. Exposed as a library so tests can
// drive full runs in-process.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "twodist/dual_graph.hpp"
#include "twodist/enumerate.hpp"

namespace twodist {

struct RunConfig {
    std::string units_path;
    std::string adjacency_path;
    std::optional<double> prune_min_km;
    std::optional<double> prune_min_fraction;
    std::string out_dir = "out";
    int threads = 1;
    int bins = 50;  // histogram bins for analyze

    ConstraintSet constraints;  // count/enumerate filters, chain hard constraints

    std::string plans_path;  // analyze / treeprob input

    // chain
    std::uint64_t steps = 1;
    std::optional<std::uint64_t> rng_seed;  // required for randomized commands
    std::string seeds_path;
    std::string accept_policy = "always";  // "always" or "thresholded"
    ConstraintSet accept_inner;
    double fallback_prob = 0.05;
    int max_tree_retries = 100;
};

// Loads units + adjacency and applies the configured pruning.
DualGraph load_graph(const RunConfig& cfg);

// The subcommand bodies; they throw on failure and return 0 on success.
int cmd_count(const RunConfig& cfg);
int cmd_enumerate(const RunConfig& cfg);
int cmd_chain(const RunConfig& cfg);
int cmd_analyze(const RunConfig& cfg);
int cmd_treeprob(const RunConfig& cfg);

// Full argv-level entry point used by the binary and by tests.
// Exit codes: 0 success, 2 data error, 3 constraint/config error.
int run_cli(const std::vector<std::string>& args);

}  // namespace twodist
