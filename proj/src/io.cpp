#include "lbkld/io.hpp"

#include <cstdio>
#include <stdexcept>

namespace lbkld {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result,
                     std::uint64_t seed) {
  if (result.rows.empty()) {
    throw std::invalid_argument("write_sweep_csv: empty sweep");
  }
  const std::size_t k = result.rows.front().design.size();
  for (std::size_t d = 0; d < k; ++d) os << "design_" << (d + 1) << ",";
  os << "estimator,value,std_error,n_sims,seed\n";
  for (const SweepRow& row : result.rows) {
    for (std::size_t d = 0; d < k; ++d) {
      os << format_double(row.design[d]) << ",";
    }
    os << estimator_kind_name(row.estimate.kind) << ","
       << format_double(row.estimate.value) << ","
       << format_double(row.estimate.std_error) << "," << row.estimate.n_sims
       << "," << seed << "\n";
  }
  const SweepRow& best = result.rows[result.argmax_index];
  os << "# argmax: design=(";
  for (std::size_t d = 0; d < k; ++d) {
    if (d) os << ",";
    os << format_double(best.design[d]);
  }
  os << ") value=" << format_double(best.estimate.value) << "\n";
}

void write_spsa_trace_csv(std::ostream& os, const SpsaResult& result) {
  const std::size_t k = result.trace.empty()
                            ? result.final_design.size()
                            : result.trace.front().iterate.size();
  os << "iteration,";
  for (std::size_t d = 0; d < k; ++d) os << "design_" << (d + 1) << ",";
  os << "utility\n";
  for (const SpsaTraceRow& row : result.trace) {
    os << row.iteration << ",";
    for (std::size_t d = 0; d < k; ++d) {
      os << format_double(row.iterate[d]) << ",";
    }
    os << format_double(row.utility) << "\n";
  }
}

void write_inference_csv(std::ostream& os, const InferenceStudy& study) {
  if (study.trials.empty()) {
    throw std::invalid_argument("write_inference_csv: no trials");
  }
  const std::size_t p = study.trials.front().theta_true.size();
  os << "trial";
  for (std::size_t d = 0; d < p; ++d) os << ",theta_true_" << (d + 1);
  for (std::size_t d = 0; d < p; ++d) os << ",post_mean_" << (d + 1);
  os << "\n";
  for (std::size_t i = 0; i < study.trials.size(); ++i) {
    os << i;
    for (std::size_t d = 0; d < p; ++d) {
      os << "," << format_double(study.trials[i].theta_true[d]);
    }
    for (std::size_t d = 0; d < p; ++d) {
      os << "," << format_double(study.trials[i].posterior_mean[d]);
    }
    os << "\n";
  }
  os << "# mse:";
  for (std::size_t d = 0; d < p; ++d) {
    os << (d ? "," : " ") << format_double(study.mse[d]);
  }
  os << "\n";
}

}  // namespace lbkld
