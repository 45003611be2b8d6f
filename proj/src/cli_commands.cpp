#include "twodist/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twodist/elections.hpp"
#include "twodist/errors.hpp"
#include "twodist/geo_ingest.hpp"
#include "twodist/metrics.hpp"
#include "twodist/plan.hpp"
#include "twodist/recom.hpp"
#include "twodist/reports.hpp"
#include "twodist/trees.hpp"

namespace twodist {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

bool looks_like_json(const std::string& path) {
    auto dot = path.rfind('.');
    if (dot == std::string::npos) return false;
    std::string ext = path.substr(dot);
    return ext == ".json" || ext == ".geojson";
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write output file: " + p.string());
    return out;
}

fs::path ensure_out_dir(const RunConfig& cfg) {
    fs::path dir(cfg.out_dir.empty() ? "." : cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory: " + dir.string());
    return dir;
}

ordered_json constraints_json(const ConstraintSet& c) {
    ordered_json j;
    j["max_pop_dev"] = c.max_pop_dev ? ordered_json(*c.max_pop_dev) : ordered_json(nullptr);
    j["max_er"] = c.max_er ? ordered_json(*c.max_er) : ordered_json(nullptr);
    return j;
}

ordered_json graph_json(const RunConfig& cfg, const DualGraph& g) {
    ordered_json j;
    j["id"] = g.id;
    j["n"] = g.n();
    j["m"] = g.m();
    j["units_file"] = cfg.units_path;
    j["adjacency_file"] = cfg.adjacency_path;
    if (cfg.prune_min_km) {
        j["prune"] = {{"min_length_km", *cfg.prune_min_km},
                      {"min_fraction", *cfg.prune_min_fraction}};
    } else {
        j["prune"] = nullptr;
    }
    return j;
}

void write_histogram_csv(const fs::path& p, const std::vector<double>& values, int bins) {
    auto out = open_out(p);
    out << "bin_lo,bin_hi,count\n";
    for (const auto& b : fixed_width_histogram(values, bins))
        out << format_double(b.lo) << "," << format_double(b.hi) << "," << b.count << "\n";
}

ordered_json five_number_json(const FiveNumber& f) {
    return {{"min", f.min}, {"q1", f.q1}, {"median", f.median}, {"q3", f.q3}, {"max", f.max}};
}

}  // namespace

DualGraph load_graph(const RunConfig& cfg) {
    if (cfg.units_path.empty()) throw ConfigError("units file is required (--units)");
    if (cfg.adjacency_path.empty()) throw ConfigError("adjacency file is required (--adjacency)");
    if (cfg.prune_min_km.has_value() != cfg.prune_min_fraction.has_value())
        throw ConfigError("pruning needs both --prune-km and --prune-frac");

    auto units = looks_like_json(cfg.units_path) ? load_units_geojson(cfg.units_path)
                                                 : load_units(cfg.units_path);
    auto adjacency = load_adjacency(cfg.adjacency_path);
    DualGraph g = build_graph(std::move(units), adjacency);
    if (cfg.prune_min_km) g = prune_short_borders(g, *cfg.prune_min_km, *cfg.prune_min_fraction);
    return g;
}

int cmd_count(const RunConfig& cfg) {
    const DualGraph g = load_graph(cfg);
    const BigInt count = count_plans(g, cfg.constraints, cfg.threads);
    const std::string digits = count.to_string();
    std::cout << digits << "\n";
    auto dir = ensure_out_dir(cfg);
    open_out(dir / "count.txt") << digits << "\n";
    return 0;
}

int cmd_enumerate(const RunConfig& cfg) {
    const DualGraph g = load_graph(cfg);
    auto dir = ensure_out_dir(cfg);
    auto out = open_out(dir / "plans.pbm1");
    PlanFileWriter writer(out, g.n(), g.id);
    // serial so the plan file is byte-identical run to run
    const std::uint64_t emitted =
        enumerate_plans(g, cfg.constraints, [&](const PlanView& v) { writer.write(v.plan()); });
    out.close();
    open_out(dir / "count.txt") << emitted << "\n";
    std::cout << emitted << "\n";
    return 0;
}

int cmd_chain(const RunConfig& cfg) {
    const DualGraph g = load_graph(cfg);
    if (!cfg.rng_seed) throw ConfigError("chain requires an explicit --rng-seed");
    if (cfg.seeds_path.empty()) throw ConfigError("chain requires --seeds <plans.pbm1>");

    ChainConfig chain;
    chain.steps = cfg.steps;
    chain.hard_constraints = cfg.constraints;
    chain.rng_seed = *cfg.rng_seed;
    chain.max_tree_retries = cfg.max_tree_retries;
    chain.threads = cfg.threads;
    if (cfg.accept_policy == "always") {
        chain.accept.kind = AcceptPolicy::Kind::always;
    } else if (cfg.accept_policy == "thresholded") {
        chain.accept.kind = AcceptPolicy::Kind::thresholded;
        chain.accept.inner = cfg.accept_inner;
        chain.accept.fallback_prob = cfg.fallback_prob;
    } else {
        throw ConfigError("accept policy must be 'always' or 'thresholded'");
    }
    const PlanFile seeds = read_plan_file(cfg.seeds_path, g.n());
    if (seeds.plans.empty()) throw ConfigError("seed file contains no plans");
    chain.seeds = seeds.plans;

    const auto t0 = std::chrono::steady_clock::now();
    const Ensemble ens = run_chain(g, chain);
    const auto t1 = std::chrono::steady_clock::now();
    const std::uint64_t unique = ens.unique_count();

    auto dir = ensure_out_dir(cfg);
    {
        auto out = open_out(dir / "plans.pbm1");
        PlanFileWriter writer(out, g.n(), g.id);
        for (const auto& [step, p] : ens.plans) writer.write(p);
    }

    ordered_json manifest;
    manifest["command"] = "chain";
    manifest["graph"] = graph_json(cfg, g);
    manifest["steps"] = cfg.steps;
    manifest["rng_seed"] = *cfg.rng_seed;
    manifest["seed_plans"] = chain.seeds.size();
    manifest["hard_constraints"] = constraints_json(cfg.constraints);
    ordered_json accept;
    accept["policy"] = cfg.accept_policy;
    if (chain.accept.kind == AcceptPolicy::Kind::thresholded) {
        accept["inner"] = constraints_json(cfg.accept_inner);
        accept["fallback_prob"] = cfg.fallback_prob;
    }
    manifest["accept"] = accept;
    manifest["max_tree_retries"] = cfg.max_tree_retries;
    manifest["plans_recorded"] = ens.plans.size();
    manifest["unique_plans"] = unique;
    // kept out of the deterministic fields above
    manifest["timing"] = {
        {"wall_ms", std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()}};
    open_out(dir / "manifest.json") << manifest.dump(2) << "\n";

    std::cout << "recorded " << ens.plans.size() << " plans, " << unique << " unique\n";
    return 0;
}

int cmd_analyze(const RunConfig& cfg) {
    const DualGraph g = load_graph(cfg);
    if (cfg.plans_path.empty()) throw ConfigError("analyze requires --plans <plans.pbm1>");
    const PlanFile pf = read_plan_file(cfg.plans_path, g.n());
    if (pf.plans.empty()) throw ConfigError("empty ensemble: " + cfg.plans_path);
    for (std::size_t i = 0; i < pf.plans.size(); ++i)
        if (!is_valid_plan(g, pf.plans[i]))
            throw DataError("plan " + std::to_string(i) + " in " + cfg.plans_path +
                            " is not a contiguous bipartition of this graph");

    auto dir = ensure_out_dir(cfg);
    const auto metrics = score_plans(g, pf.plans, cfg.threads);

    {
        auto out = open_out(dir / "metrics.csv");
        out << "plan_id,pop_dev,er,pbp_min,pbp_mean,lw_min,pop_0,pop_1\n";
        for (std::size_t i = 0; i < metrics.size(); ++i) {
            const auto& m = metrics[i];
            out << i << "," << m.pop_dev.to_decimal(17) << "," << m.er << ","
                << format_double(m.pbp_min) << "," << format_double(m.pbp_mean) << ","
                << format_double(m.lw_min) << "," << m.populations.first << ","
                << m.populations.second << "\n";
        }
    }

    std::vector<double> dev, er, pbp_min, pbp_mean, lw_min;
    dev.reserve(metrics.size());
    for (const auto& m : metrics) {
        dev.push_back(m.pop_dev.to_double());
        er.push_back(m.er);
        pbp_min.push_back(m.pbp_min);
        pbp_mean.push_back(m.pbp_mean);
        lw_min.push_back(m.lw_min);
    }
    write_histogram_csv(dir / "hist_pop_dev.csv", dev, cfg.bins);
    write_histogram_csv(dir / "hist_er.csv", er, cfg.bins);
    write_histogram_csv(dir / "hist_pbp_min.csv", pbp_min, cfg.bins);
    write_histogram_csv(dir / "hist_pbp_mean.csv", pbp_mean, cfg.bins);
    write_histogram_csv(dir / "hist_lw_min.csv", lw_min, cfg.bins);

    ordered_json summary;
    summary["plans"] = pf.plans.size();
    summary["metrics"] = {{"pop_dev", five_number_json(five_number(dev))},
                          {"er", five_number_json(five_number(er))},
                          {"pbp_min", five_number_json(five_number(pbp_min))},
                          {"pbp_mean", five_number_json(five_number(pbp_mean))},
                          {"lw_min", five_number_json(five_number(lw_min))}};

    ordered_json contests = ordered_json::object();
    for (const std::string& contest : contest_ids(g.units)) {
        std::vector<ShareMode> modes{ShareMode::two_party};
        std::int64_t total_ind = 0;
        for (const auto& u : g.units) {
            auto it = u.votes.find(contest);
            if (it != u.votes.end()) total_ind += it->second.ind;
        }
        if (total_ind > 0) modes.push_back(ShareMode::augmented);

        auto out = open_out(dir / ("outcomes_" + contest + ".csv"));
        out << "plan_id,contest,mode,share_lo,share_hi,dem_seats\n";
        ordered_json cj = ordered_json::object();
        for (ShareMode mode : modes) {
            const ElectionDataset ds = make_dataset(g, contest, mode);
            const OutcomeTable table = ensemble_outcomes(g, pf.plans, ds, cfg.threads);
            for (std::size_t i = 0; i < table.rows.size(); ++i) {
                const auto& r = table.rows[i];
                out << i << "," << contest << "," << to_string(mode) << ","
                    << format_double(r.shares.first) << "," << format_double(r.shares.second)
                    << "," << r.dem_seats << "\n";
            }
            cj[to_string(mode)] = {
                {"district1", five_number_json(table.district1)},
                {"district2", five_number_json(table.district2)},
                {"seats", {table.seats_histogram[0], table.seats_histogram[1],
                           table.seats_histogram[2]}},
                {"proportionality_reference", proportionality_reference(ds)}};
        }
        contests[contest] = cj;
    }
    summary["contests"] = contests;
    open_out(dir / "summary.json") << summary.dump(2) << "\n";

    std::cout << "analyzed " << pf.plans.size() << " plans\n";
    return 0;
}

int cmd_treeprob(const RunConfig& cfg) {
    const DualGraph g = load_graph(cfg);
    if (cfg.plans_path.empty()) throw ConfigError("treeprob requires --plans <plans.pbm1>");
    const PlanFile pf = read_plan_file(cfg.plans_path, g.n());
    if (pf.plans.empty()) throw ConfigError("empty ensemble: " + cfg.plans_path);

    const ProposalDistribution dist = proposal_distribution(g, pf.plans, cfg.threads);
    auto dir = ensure_out_dir(cfg);
    auto out = open_out(dir / "treeprob.csv");
    out << "er_score,probability,num_plans\n";
    for (const auto& [er, prob] : dist.per_er)
        out << er << "," << prob.to_decimal(12) << "," << dist.plans_per_er.at(er) << "\n";
    std::cout << "treeprob over " << pf.plans.size() << " plans, " << dist.per_er.size()
              << " distinct cut sizes\n";
    return 0;
}

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"two-district plan enumeration, sampling and analysis"};
    app.set_version_flag("--version", "twodist 1.0.0");
    app.set_config("--config", "", "key=value config file; command-line flags win");
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--units", cfg.units_path, "units attribute table (CSV or GeoJSON)");
    app.add_option("--adjacency", cfg.adjacency_path, "adjacency CSV");
    app.add_option("--prune-km", cfg.prune_min_km,
                   "drop borders shorter than this many km (with --prune-frac)");
    app.add_option("--prune-frac", cfg.prune_min_fraction,
                   "...and below this fraction of both unit perimeters");
    app.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads")->capture_default_str();

    auto add_filters = [&](CLI::App* sub) {
        sub->add_option("--max-pop-dev", cfg.constraints.max_pop_dev,
                        "keep plans with population deviation < this");
        sub->add_option("--max-er", cfg.constraints.max_er,
                        "keep plans with cut size < this");
    };

    CLI::App* count = app.add_subcommand("count", "count contiguous two-district plans");
    count->fallthrough();
    add_filters(count);
    CLI::App* enumerate = app.add_subcommand("enumerate", "write every plan to plans.pbm1");
    enumerate->fallthrough();
    add_filters(enumerate);

    CLI::App* chain = app.add_subcommand("chain", "run a recombination chain");
    chain->fallthrough();
    add_filters(chain);
    chain->add_option("--steps", cfg.steps, "total steps to record")->capture_default_str();
    chain->add_option("--rng-seed", cfg.rng_seed, "random seed (required)");
    chain->add_option("--seeds", cfg.seeds_path, "seed plans (.pbm1), one chain per seed");
    chain->add_option("--accept", cfg.accept_policy, "'always' or 'thresholded'")
        ->capture_default_str();
    chain->add_option("--accept-max-pop-dev", cfg.accept_inner.max_pop_dev,
                      "thresholded: inner population bound");
    chain->add_option("--accept-max-er", cfg.accept_inner.max_er,
                      "thresholded: inner cut-size bound");
    chain->add_option("--fallback-prob", cfg.fallback_prob,
                      "thresholded: accept probability outside the inner bounds")
        ->capture_default_str();
    chain->add_option("--max-tree-retries", cfg.max_tree_retries,
                      "tree redraws within one step before recording a repeat")
        ->capture_default_str();

    CLI::App* analyze = app.add_subcommand("analyze", "score a plan file and write reports");
    analyze->fallthrough();
    analyze->add_option("--plans", cfg.plans_path, "input plan file (.pbm1)");
    analyze->add_option("--bins", cfg.bins, "histogram bin count")->capture_default_str();

    CLI::App* treeprob =
        app.add_subcommand("treeprob", "proposal probability by cut size over a plan file");
    treeprob->fallthrough();
    treeprob->add_option("--plans", cfg.plans_path, "input plan file (.pbm1)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    }

    try {
        if (app.got_subcommand(count)) return cmd_count(cfg);
        if (app.got_subcommand(enumerate)) return cmd_enumerate(cfg);
        if (app.got_subcommand(chain)) return cmd_chain(cfg);
        if (app.got_subcommand(analyze)) return cmd_analyze(cfg);
        return cmd_treeprob(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SizeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {  // schema/parse/data/reference/structure
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace twodist
