#include "lbkld/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lbkld/parallel.hpp"

namespace lbkld {

namespace {

std::vector<DesignPoint> integer_grid(double lo, double hi) {
  const long first = static_cast<long>(std::ceil(lo));
  const long last = static_cast<long>(std::floor(hi));
  if (first > last) {
    throw std::invalid_argument(
        "time_box: no integer grid points inside [lo, hi]");
  }
  std::vector<DesignPoint> out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  for (long t = first; t <= last; ++t) {
    out.push_back(DesignPoint{static_cast<double>(t)});
  }
  return out;
}

}  // namespace

std::vector<DesignPoint> enumerate_designs(const DesignSpec& spec) {
  if (const auto* fixed = std::get_if<FixedDesign>(&spec.shape)) {
    if (fixed->point.size() == 0) {
      throw std::invalid_argument("design point must have coordinates");
    }
    return {fixed->point};
  }

  if (const auto* interval = std::get_if<ScalarInterval>(&spec.shape)) {
    if (!(interval->lo <= interval->hi)) {
      throw std::invalid_argument("scalar_interval: lo must be <= hi");
    }
    if (interval->grid_points < 2) {
      throw std::invalid_argument("scalar_interval: grid_points must be >= 2");
    }
    std::vector<DesignPoint> out;
    out.reserve(interval->grid_points);
    const double step = (interval->hi - interval->lo) /
                        static_cast<double>(interval->grid_points - 1);
    for (std::size_t i = 0; i < interval->grid_points; ++i) {
      const double v = (i + 1 == interval->grid_points)
                           ? interval->hi
                           : interval->lo + step * static_cast<double>(i);
      out.push_back(DesignPoint{v});
    }
    return out;
  }

  if (const auto* pairs = std::get_if<IndexPairs>(&spec.shape)) {
    if (pairs->m < 2) {
      throw std::invalid_argument("index_pairs: m must be >= 2");
    }
    std::vector<DesignPoint> out;
    out.reserve(pairs->m * (pairs->m - 1) / 2);
    for (std::size_t i = 1; i < pairs->m; ++i) {
      for (std::size_t j = i + 1; j <= pairs->m; ++j) {
        out.push_back(DesignPoint{static_cast<double>(i),
                                  static_cast<double>(j)});
      }
    }
    return out;
  }

  const auto& box = std::get<TimeBox>(spec.shape);
  if (!(box.lo <= box.hi)) {
    throw std::invalid_argument("time_box: lo must be <= hi");
  }
  if (box.k == 1) return integer_grid(box.lo, box.hi);
  if (box.k == 2) {
    const std::vector<DesignPoint> grid = integer_grid(box.lo, box.hi);
    std::vector<DesignPoint> out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < grid.size(); ++j) {
        out.push_back(DesignPoint{grid[i][0], grid[j][0]});
      }
    }
    if (out.empty()) {
      throw std::invalid_argument("time_box: k = 2 needs two grid points");
    }
    return out;
  }
  throw std::invalid_argument(
      "time_box with k >= 3 is not enumerable; use the spsa optimizer");
}

SweepResult sweep(const std::vector<DesignPoint>& designs,
                  const UtilityFn& utility, RngStream rng,
                  std::size_t workers) {
  if (designs.empty()) {
    throw std::invalid_argument("sweep needs at least one design");
  }
  SweepResult res;
  res.rows.resize(designs.size());
  parallel_for(designs.size(), workers, [&](std::size_t i) {
    res.rows[i].design = designs[i];
    res.rows[i].estimate = utility(designs[i], rng.fold(i));
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    const double v = res.rows[i].estimate.value;
    const double b = res.rows[best].estimate.value;
    if (v > b || (v == b && res.rows[i].design < res.rows[best].design)) {
      best = i;
    }
  }
  res.argmax_index = best;
  return res;
}

DesignPoint project_sorted_box(DesignPoint d, double lo, double hi) {
  for (double& t : d.coords) t = std::clamp(t, lo, hi);
  std::sort(d.coords.begin(), d.coords.end());
  return d;
}

DesignPoint snap_to_grid(DesignPoint d, const TimeBox& box) {
  for (double& t : d.coords) {
    const double steps = std::round((t - box.lo) / box.grid_resolution);
    t = box.lo + steps * box.grid_resolution;
  }
  return project_sorted_box(std::move(d), box.lo, box.hi);
}

SpsaResult spsa_optimize(const TimeBox& box, const UtilityFn& utility,
                         const SpsaConfig& cfg, RngStream rng) {
  if (box.k < 1) {
    throw std::invalid_argument("spsa: time_box k must be >= 1");
  }
  if (!(box.lo < box.hi)) {
    throw std::invalid_argument("spsa: need lo < hi");
  }
  if (!(box.grid_resolution > 0.0)) {
    throw std::invalid_argument("spsa: grid_resolution must be positive");
  }
  if (cfg.iterations < 1) {
    throw std::invalid_argument("spsa: iterations must be >= 1");
  }

  const double width = box.hi - box.lo;
  const double stability = 0.1 * static_cast<double>(cfg.iterations);

  // start from evenly spread times; any interior sorted point works
  DesignPoint d;
  d.coords.resize(box.k);
  for (std::size_t i = 0; i < box.k; ++i) {
    d.coords[i] = box.lo + width * static_cast<double>(i + 1) /
                               static_cast<double>(box.k + 1);
  }

  SpsaResult res;

  // perturbation scale: the utility's own replication noise, with a
  // fallback for deterministic test functions
  const UtilityEstimate initial =
      utility(d, rng.fold(cfg.iterations));
  if (!std::isfinite(initial.value)) {
    res.aborted = true;
    res.final_design = snap_to_grid(d, box);
    res.final_estimate = initial;
    return res;
  }
  double c = initial.std_error;
  if (!(c > 0.0)) c = 0.01 * width;

  double a = 0.0;  // calibrated from the first gradient estimate
  std::vector<double> delta(box.k), grad(box.k);

  for (std::size_t m = 0; m < cfg.iterations; ++m) {
    RngStream iter_stream = rng.fold(m);
    const double c_m =
        c / std::pow(static_cast<double>(m + 1), cfg.gamma);

    RngStream delta_stream = iter_stream.fold(0);
    for (std::size_t i = 0; i < box.k; ++i) {
      delta[i] = delta_stream.uniform() < 0.5 ? -1.0 : 1.0;
    }

    DesignPoint d_plus = d, d_minus = d;
    for (std::size_t i = 0; i < box.k; ++i) {
      d_plus.coords[i] += c_m * delta[i];
      d_minus.coords[i] -= c_m * delta[i];
    }
    d_plus = project_sorted_box(std::move(d_plus), box.lo, box.hi);
    d_minus = project_sorted_box(std::move(d_minus), box.lo, box.hi);

    // common random numbers: both probes consume the same stream
    const UtilityEstimate u_plus = utility(d_plus, iter_stream.fold(1));
    const UtilityEstimate u_minus = utility(d_minus, iter_stream.fold(1));
    if (!std::isfinite(u_plus.value) || !std::isfinite(u_minus.value)) {
      res.aborted = true;
      break;
    }

    const double diff = (u_plus.value - u_minus.value) / (2.0 * c_m);
    double grad_max = 0.0;
    for (std::size_t i = 0; i < box.k; ++i) {
      grad[i] = diff * delta[i];  // delta entries are their own inverses
      grad_max = std::max(grad_max, std::abs(grad[i]));
    }
    if (m == 0) {
      a = cfg.first_step_fraction * width *
          std::pow(1.0 + stability, cfg.alpha) /
          (grad_max > 0.0 ? grad_max : 1.0);
    }
    const double a_m =
        a / std::pow(static_cast<double>(m + 1) + stability, cfg.alpha);

    for (std::size_t i = 0; i < box.k; ++i) {
      d.coords[i] += a_m * grad[i];
    }
    d = project_sorted_box(std::move(d), box.lo, box.hi);
    res.trace.push_back(
        {m + 1, d, 0.5 * (u_plus.value + u_minus.value)});
  }

  res.final_design = snap_to_grid(d, box);
  if (!res.aborted) {
    res.final_estimate =
        utility(res.final_design, rng.fold(cfg.iterations + 1));
  } else {
    res.final_estimate.design = res.final_design;
    res.final_estimate.value = std::numeric_limits<double>::quiet_NaN();
  }
  return res;
}

}  // namespace lbkld
