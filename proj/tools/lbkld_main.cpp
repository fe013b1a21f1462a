// Batch front end: parse a JSON run configuration, dispatch the requested
// model/estimator/design combination, and emit machine-readable results.
// Data goes to stdout or --out; progress and timing go to stderr only, so
// primary outputs are byte-identical across reruns of the same config+seed.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "lbkld/config.hpp"
#include "lbkld/estimators.hpp"
#include "lbkld/io.hpp"
#include "lbkld/models.hpp"
#include "lbkld/optimize.hpp"
#include "lbkld/parallel.hpp"
#include "lbkld/rng.hpp"

namespace {

lbkld::RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return lbkld::parse_run_config(buf.str());
}

std::size_t resolve_workers(const lbkld::RunConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  return lbkld::default_workers();  // LBKLD_WORKERS env, then hardware
}

// Writes with LF endings regardless of platform; stdout when path is empty.
void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

const lbkld::DesignPoint& require_point_design(const lbkld::RunConfig& cfg,
                                               const char* command) {
  const auto* fixed = std::get_if<lbkld::FixedDesign>(&cfg.design.shape);
  if (!fixed) {
    throw std::invalid_argument(std::string(command) +
                                " requires design.kind = \"point\"");
  }
  return fixed->point;
}

// Bundles an estimator call into the callable the sweep and optimizer
// expect.  `inner_workers` threads run inside each estimate (sweeps
// parallelize across designs instead, so they pass 1).  A nonzero
// `replications_override` replaces the replication count of the
// lower-bound estimators; per-evaluation cost during optimization is
// governed by the optimizer config, not the estimator block.
lbkld::UtilityFn make_utility_fn(const lbkld::RunConfig& cfg,
                                 const lbkld::SimulationModel& model,
                                 std::size_t inner_workers,
                                 std::size_t replications_override = 0) {
  switch (cfg.estimator) {
    case lbkld::EstimatorKind::lbkld_partition: {
      lbkld::LbkldConfig ec = cfg.lbkld;
      if (replications_override > 0) ec.replications = replications_override;
      return [&model, ec, inner_workers](const lbkld::DesignPoint& d,
                                         lbkld::RngStream rng) {
        return lbkld::lbkld_estimate(model, d, ec, rng, inner_workers);
      };
    }
    case lbkld::EstimatorKind::lbkld_nopartition: {
      lbkld::LbkldConfig ec = cfg.lbkld;
      if (replications_override > 0) ec.replications = replications_override;
      return [&model, ec, inner_workers](const lbkld::DesignPoint& d,
                                         lbkld::RngStream rng) {
        return lbkld::lbkld_no_partition(model, d, ec, rng, inner_workers);
      };
    }
    case lbkld::EstimatorKind::nested_mc_kld: {
      lbkld::NestedMcConfig ec = cfg.nested;
      return [&model, ec, inner_workers](const lbkld::DesignPoint& d,
                                         lbkld::RngStream rng) {
        return lbkld::nested_mc_kld(model, d, ec, rng, inner_workers);
      };
    }
    case lbkld::EstimatorKind::d_posterior_precision: {
      lbkld::AbcConfig ec = cfg.abc;
      return [&model, ec, inner_workers](const lbkld::DesignPoint& d,
                                         lbkld::RngStream rng) {
        return lbkld::d_posterior_precision(model, d, ec, rng, inner_workers);
      };
    }
  }
  throw std::logic_error("unhandled estimator kind");
}

nlohmann::ordered_json estimate_json(const lbkld::UtilityEstimate& est,
                                     std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["design"] = est.design.coords;
  j["kind"] = lbkld::estimator_kind_name(est.kind);
  j["value"] = est.value;
  j["std_error"] = est.std_error;
  j["n_sims"] = est.n_sims;
  j["replications"] = est.replications;
  j["seed"] = seed;
  if (est.degenerate) j["degenerate"] = true;
  return j;
}

int cmd_utility(const lbkld::RunConfig& cfg) {
  const lbkld::DesignPoint& design = require_point_design(cfg, "utility");
  auto model = cfg.make_model();
  model->validate_design(design);

  std::size_t workers = resolve_workers(cfg);
  lbkld::UtilityFn fn = make_utility_fn(cfg, *model, workers);
  lbkld::UtilityEstimate est = fn(design, lbkld::RngStream(cfg.seed));

  write_text(cfg.output_path, estimate_json(est, cfg.seed).dump(2) + "\n");
  return 0;
}

int cmd_sweep(const lbkld::RunConfig& cfg) {
  auto model = cfg.make_model();
  std::vector<lbkld::DesignPoint> designs = lbkld::enumerate_designs(cfg.design);
  for (const lbkld::DesignPoint& d : designs) model->validate_design(d);

  std::size_t workers = resolve_workers(cfg);
  std::cerr << "lbkld: sweeping " << designs.size() << " designs\n";
  // Rows carry the pool; each row's estimate runs single-threaded so the
  // thread count stays bounded by `workers`.
  lbkld::UtilityFn fn = make_utility_fn(cfg, *model, 1);
  lbkld::SweepResult result =
      lbkld::sweep(designs, fn, lbkld::RngStream(cfg.seed), workers);

  std::ostringstream csv;
  lbkld::write_sweep_csv(csv, result, cfg.seed);
  write_text(cfg.output_path, csv.str());
  return 0;
}

int cmd_optimize(const lbkld::RunConfig& cfg) {
  const auto* box = std::get_if<lbkld::TimeBox>(&cfg.design.shape);
  if (!box) {
    throw std::invalid_argument("optimize requires design.kind = \"time_box\"");
  }

  auto model = cfg.make_model();
  std::size_t workers = resolve_workers(cfg);
  lbkld::UtilityFn fn = make_utility_fn(cfg, *model, workers,
                                        cfg.spsa.replications_per_eval);
  lbkld::SpsaResult result =
      lbkld::spsa_optimize(*box, fn, cfg.spsa, lbkld::RngStream(cfg.seed));

  std::string trace_path =
      (cfg.output_path.empty() ? std::string("optimize") : cfg.output_path) +
      ".trace.csv";
  std::ostringstream trace;
  lbkld::write_spsa_trace_csv(trace, result);
  write_text(trace_path, trace.str());
  std::cerr << "lbkld: iterate trace written to " << trace_path << "\n";

  nlohmann::ordered_json j = estimate_json(result.final_estimate, cfg.seed);
  j["iterations"] = result.trace.size();
  if (result.aborted) j["aborted"] = true;
  write_text(cfg.output_path, j.dump(2) + "\n");
  return 0;
}

int cmd_replicate_infer(const lbkld::RunConfig& cfg) {
  if (cfg.estimator != lbkld::EstimatorKind::d_posterior_precision) {
    throw std::invalid_argument(
        "replicate-infer requires estimator.kind = \"d_posterior_precision\" "
        "(its block holds the rejection-sampler settings)");
  }
  const lbkld::DesignPoint& design =
      require_point_design(cfg, "replicate-infer");
  auto model = cfg.make_model();
  model->validate_design(design);

  std::size_t workers = resolve_workers(cfg);
  lbkld::InferenceStudy study = lbkld::replicate_inference(
      *model, design, cfg.abc, lbkld::RngStream(cfg.seed), workers);

  std::ostringstream csv;
  lbkld::write_inference_csv(csv, study);
  write_text(cfg.output_path, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Expected-utility estimation and design optimization for "
      "simulation-based experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed_override = 0;
  std::size_t workers_override = 0;
  std::string out_override;

  const char* descriptions[] = {
      "Estimate the expected utility of a single design (JSON)",
      "Evaluate every design in an enumerable space (CSV)",
      "Search a sampling-time box with stochastic approximation (JSON + trace)",
      "Repeated truth/inference trials at a fixed design (CSV)",
  };
  const char* names[] = {"utility", "sweep", "optimize", "replicate-infer"};
  for (int i = 0; i < 4; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descriptions[i]);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--workers", workers_override,
                    "worker thread count (0 = LBKLD_WORKERS, then hardware)");
    sub->add_option("--out", out_override,
                    "output path (default: config output_path, else stdout)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    lbkld::RunConfig cfg = load_config(config_path);
    if (sub->count("--seed") > 0) cfg.seed = seed_override;
    if (sub->count("--workers") > 0) cfg.workers = workers_override;
    if (sub->count("--out") > 0) cfg.output_path = out_override;

    std::cerr << "lbkld: " << sub->get_name() << " model=" << cfg.model_name
              << " estimator=" << lbkld::estimator_kind_name(cfg.estimator)
              << " seed=" << cfg.seed << " workers=" << resolve_workers(cfg)
              << "\n";
    auto start = std::chrono::steady_clock::now();

    int rc = 1;
    const std::string& name = sub->get_name();
    if (name == "utility") {
      rc = cmd_utility(cfg);
    } else if (name == "sweep") {
      rc = cmd_sweep(cfg);
    } else if (name == "optimize") {
      rc = cmd_optimize(cfg);
    } else if (name == "replicate-infer") {
      rc = cmd_replicate_infer(cfg);
    }

    std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;
    std::cerr << "lbkld: done in " << elapsed.count() << " s, output: "
              << (cfg.output_path.empty() ? std::string("<stdout>")
                                          : cfg.output_path)
              << "\n";
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "lbkld: error: " << e.what() << "\n";
    return 1;
  }
}
