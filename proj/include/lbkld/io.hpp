#pragma once

#include <cstdint>
#include <ostream>
#include <string>

#include "lbkld/estimators.hpp"
#include "lbkld/optimize.hpp"

namespace lbkld {

// Shortest exact decimal form of a double (17 significant digits), so CSV
// numbers round-trip bit-exactly.
std::string format_double(double v);

// One row per design in enumeration order, then a comment row naming the
// argmax.  Header: design_1,...,design_k,estimator,value,std_error,n_sims,seed
void write_sweep_csv(std::ostream& os, const SweepResult& result,
                     std::uint64_t seed);

// Header: iteration,design_1,...,design_k,utility
void write_spsa_trace_csv(std::ostream& os, const SpsaResult& result);

// Header: trial,theta_true_1,...,theta_true_p,post_mean_1,...,post_mean_p
// with a trailing per-coordinate mean-squared-error comment row.
void write_inference_csv(std::ostream& os, const InferenceStudy& study);

}  // namespace lbkld
