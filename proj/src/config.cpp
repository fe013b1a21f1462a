#include "lbkld/config.hpp"

#include <initializer_list>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace lbkld {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: '" + path + "' " + what);
}

std::string join(const std::string& path, const char* key) {
  return path.empty() ? std::string(key) : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      const std::string where = path.empty() ? it.key() : path + "." + it.key();
      throw std::invalid_argument("config: unknown key '" + where + "'");
    }
  }
}

const json& require_object(const json& parent, const std::string& path,
                           const char* key) {
  if (!parent.contains(key)) fail(path.empty() ? key : path + "." + key,
                                  "is required");
  const json& v = parent.at(key);
  if (!v.is_object()) fail(path.empty() ? key : path + "." + key,
                           "must be an object");
  return v;
}

std::string require_string(const json& obj, const std::string& path,
                           const char* key) {
  if (!obj.contains(key)) fail(join(path, key), "is required");
  const json& v = obj.at(key);
  if (!v.is_string()) fail(join(path, key), "must be a string");
  return v.get<std::string>();
}

std::size_t get_count(const json& obj, const std::string& path,
                      const char* key, std::size_t fallback,
                      long long min_value) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < min_value) {
    fail(join(path, key),
         "must be an integer >= " + std::to_string(min_value));
  }
  return v.get<std::size_t>();
}

double get_real(const json& obj, const std::string& path, const char* key,
                double fallback, bool require_positive) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "must be a number");
  const double x = v.get<double>();
  if (require_positive && !(x > 0.0)) {
    fail(join(path, key), "must be positive");
  }
  return x;
}

double require_real(const json& obj, const std::string& path,
                    const char* key) {
  if (!obj.contains(key)) fail(join(path, key), "is required");
  const json& v = obj.at(key);
  if (!v.is_number()) fail(join(path, key), "must be a number");
  return v.get<double>();
}

bool get_bool(const json& obj, const std::string& path, const char* key,
              bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) fail(join(path, key), "must be a boolean");
  return v.get<bool>();
}

void parse_model(const json& root, RunConfig& cfg) {
  const json& m = require_object(root, "", "model");
  cfg.model_name = require_string(m, "model", "name");
  if (cfg.model_name == "toy") {
    check_keys(m, "model", {"name", "noise_sd"});
    cfg.toy_noise_sd = get_real(m, "model", "noise_sd", 0.05, true);
  } else if (cfg.model_name == "ricker") {
    check_keys(m, "model", {"name", "horizon", "initial_state"});
    cfg.ricker_horizon = get_count(m, "model", "horizon", 50, 7);
    cfg.ricker_initial_state =
        get_real(m, "model", "initial_state", 1.0, true);
  } else if (cfg.model_name == "aphid") {
    check_keys(m, "model", {"name", "n0", "c0"});
    cfg.aphid_n0 = static_cast<long>(get_count(m, "model", "n0", 28, 0));
    cfg.aphid_c0 = static_cast<long>(get_count(m, "model", "c0", 28, 0));
  } else {
    fail("model.name", "must be one of toy, ricker, aphid");
  }
}

void parse_estimator(const json& root, RunConfig& cfg) {
  const json& e = require_object(root, "", "estimator");
  const std::string kind = require_string(e, "estimator", "kind");
  try {
    cfg.estimator = estimator_kind_from_name(kind);
  } catch (const std::invalid_argument&) {
    fail("estimator.kind",
         "must be one of lbkld_partition, lbkld_nopartition, nested_mc_kld, "
         "d_posterior_precision");
  }
  switch (cfg.estimator) {
    case EstimatorKind::lbkld_partition:
    case EstimatorKind::lbkld_nopartition:
      check_keys(e, "estimator",
                 {"kind", "n", "L", "n_min", "k_nn", "jitter_scale",
                  "replications"});
      cfg.lbkld.n = get_count(e, "estimator", "n", 10000, 2);
      cfg.lbkld.num_groups = get_count(e, "estimator", "L", 5, 1);
      cfg.lbkld.min_group = get_count(e, "estimator", "n_min", 10, 1);
      cfg.lbkld.k_nn = get_count(e, "estimator", "k_nn", 3, 1);
      cfg.lbkld.jitter_scale = get_real(e, "estimator", "jitter_scale", 1.0, false);
      if (cfg.lbkld.jitter_scale < 0.0) {
        fail("estimator.jitter_scale", "must be >= 0");
      }
      cfg.lbkld.replications = get_count(e, "estimator", "replications", 20, 1);
      break;
    case EstimatorKind::nested_mc_kld:
      check_keys(e, "estimator", {"kind", "n", "n_inner"});
      cfg.nested.n = get_count(e, "estimator", "n", 10000, 1);
      cfg.nested.n_inner = get_count(e, "estimator", "n_inner", 1000, 1);
      break;
    case EstimatorKind::d_posterior_precision:
      check_keys(e, "estimator",
                 {"kind", "n_sim", "n_keep", "n_outer", "reuse_pool"});
      cfg.abc.n_sim = get_count(e, "estimator", "n_sim", 10000, 2);
      cfg.abc.n_keep = get_count(e, "estimator", "n_keep", 100, 1);
      cfg.abc.n_outer = get_count(e, "estimator", "n_outer", 100, 1);
      cfg.abc.reuse_pool = get_bool(e, "estimator", "reuse_pool", true);
      break;
  }
}

void parse_design(const json& root, RunConfig& cfg) {
  const json& d = require_object(root, "", "design");
  const std::string kind = require_string(d, "design", "kind");
  if (kind == "point") {
    check_keys(d, "design", {"kind", "coords"});
    if (!d.contains("coords") || !d.at("coords").is_array() ||
        d.at("coords").empty()) {
      fail("design.coords", "must be a nonempty array of numbers");
    }
    FixedDesign fixed;
    for (const json& c : d.at("coords")) {
      if (!c.is_number()) fail("design.coords", "must contain only numbers");
      fixed.point.coords.push_back(c.get<double>());
    }
    cfg.design.shape = std::move(fixed);
  } else if (kind == "scalar_interval") {
    check_keys(d, "design", {"kind", "lo", "hi", "grid_points"});
    ScalarInterval iv;
    iv.lo = require_real(d, "design", "lo");
    iv.hi = require_real(d, "design", "hi");
    iv.grid_points = get_count(d, "design", "grid_points", 25, 2);
    cfg.design.shape = iv;
  } else if (kind == "index_pairs") {
    check_keys(d, "design", {"kind", "m"});
    IndexPairs pairs;
    pairs.m = get_count(d, "design", "m", 13, 2);
    cfg.design.shape = pairs;
  } else if (kind == "time_box") {
    check_keys(d, "design", {"kind", "k", "lo", "hi", "grid_resolution"});
    TimeBox box;
    box.k = get_count(d, "design", "k", 0, 1);
    if (box.k == 0) fail("design.k", "is required");
    box.lo = get_real(d, "design", "lo", 0.0, false);
    box.hi = get_real(d, "design", "hi", 50.0, false);
    box.grid_resolution =
        get_real(d, "design", "grid_resolution", 0.01, true);
    cfg.design.shape = box;
  } else {
    fail("design.kind",
         "must be one of point, scalar_interval, index_pairs, time_box");
  }
}

void parse_spsa(const json& root, RunConfig& cfg) {
  if (!root.contains("spsa")) return;
  const json& s = require_object(root, "", "spsa");
  check_keys(s, "spsa",
             {"iterations", "replications_per_eval", "first_step_fraction"});
  cfg.spsa.iterations = get_count(s, "spsa", "iterations", 200, 1);
  cfg.spsa.replications_per_eval =
      get_count(s, "spsa", "replications_per_eval", 5, 1);
  cfg.spsa.first_step_fraction =
      get_real(s, "spsa", "first_step_fraction", 0.02, true);
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: not valid JSON: ") +
                                e.what());
  }
  if (!root.is_object()) {
    throw std::invalid_argument("config: top level must be an object");
  }
  check_keys(root, "",
             {"model", "estimator", "design", "seed", "workers",
              "output_path", "spsa"});

  RunConfig cfg;
  parse_model(root, cfg);
  parse_estimator(root, cfg);
  parse_design(root, cfg);
  parse_spsa(root, cfg);

  if (root.contains("seed")) {
    const json& v = root.at("seed");
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail("seed", "must be a nonnegative integer");
    }
    cfg.seed = v.get<std::uint64_t>();
  }
  cfg.workers = get_count(root, "", "workers", 0, 0);  // 0: decide at run time
  if (root.contains("output_path")) {
    const json& v = root.at("output_path");
    if (!v.is_string()) fail("output_path", "must be a string");
    cfg.output_path = v.get<std::string>();
  }
  return cfg;
}

std::unique_ptr<SimulationModel> RunConfig::make_model() const {
  if (model_name == "toy") return std::make_unique<ToyModel>(toy_noise_sd);
  if (model_name == "ricker") {
    return std::make_unique<RickerModel>(ricker_horizon, ricker_initial_state);
  }
  if (model_name == "aphid") {
    return std::make_unique<AphidModel>(aphid_n0, aphid_c0);
  }
  throw std::invalid_argument("config: unknown model '" + model_name + "'");
}

}  // namespace lbkld
