#pragma once

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "lbkld/batch.hpp"
#include "lbkld/estimators.hpp"
#include "lbkld/rng.hpp"

namespace lbkld {

// Design spaces.  Scalar intervals and index pairs enumerate exhaustively;
// a time box enumerates its integer grid for k <= 2 and is otherwise
// searched with spsa_optimize.
struct FixedDesign {
  DesignPoint point;
};

struct ScalarInterval {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t grid_points = 2;  // inclusive of both endpoints
};

struct IndexPairs {
  std::size_t m = 13;  // pairs (i, j), 1 <= i < j <= m
};

struct TimeBox {
  std::size_t k = 1;
  double lo = 0.0;
  double hi = 50.0;
  double grid_resolution = 0.01;  // final spsa iterate snaps to this
};

struct DesignSpec {
  std::variant<FixedDesign, ScalarInterval, IndexPairs, TimeBox> shape;
};

// All candidate designs in deterministic order (grids ascending, pairs
// lexicographic).  Throws for a time box with k >= 3; that space is
// continuous-search only.
std::vector<DesignPoint> enumerate_designs(const DesignSpec& spec);

// A utility evaluation: estimate at one design from one rng stream.
// Sweeps and the optimizer derive per-call substreams themselves, so the
// callable must be a pure function of (design, stream).
using UtilityFn =
    std::function<UtilityEstimate(const DesignPoint&, RngStream)>;

struct SweepRow {
  DesignPoint design;
  UtilityEstimate estimate;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // one per design, enumeration order
  std::size_t argmax_index = 0;
};

// Evaluates every design once (row i uses substream fold(i), so worker
// count cannot change values).  Ties on the maximum go to the
// lexicographically smallest design.
SweepResult sweep(const std::vector<DesignPoint>& designs,
                  const UtilityFn& utility, RngStream rng,
                  std::size_t workers = 1);

struct SpsaConfig {
  std::size_t iterations = 200;
  std::size_t replications_per_eval = 5;
  // first iterate moves about this fraction of the box width
  double first_step_fraction = 0.02;
  double alpha = 0.602;  // step-size decay exponent
  double gamma = 0.101;  // perturbation decay exponent
};

struct SpsaTraceRow {
  std::size_t iteration = 0;  // 1-based
  DesignPoint iterate;        // after update and projection
  double utility = 0.0;       // mean of the two probe estimates
};

struct SpsaResult {
  DesignPoint final_design;       // snapped to the grid, sorted, in box
  UtilityEstimate final_estimate;  // fresh evaluation at final_design
  std::vector<SpsaTraceRow> trace;
  bool aborted = false;  // a probe utility came back non-finite
};

// Simultaneous-perturbation ascent over the sorted box [lo,hi]^k.  Both
// probes of an iteration share one rng stream (common random numbers), the
// perturbation scale starts at the utility's replication standard error,
// and the step gain is calibrated from the first gradient estimate.
SpsaResult spsa_optimize(const TimeBox& box, const UtilityFn& utility,
                         const SpsaConfig& cfg, RngStream rng);

// Clamp every coordinate into [lo, hi], then sort ascending.
DesignPoint project_sorted_box(DesignPoint d, double lo, double hi);

// Round each coordinate to the box grid, then project again.
DesignPoint snap_to_grid(DesignPoint d, const TimeBox& box);

}  // namespace lbkld
