#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "randopt/types.hpp"

namespace randopt {

/// One iteration of a line-search or ARC run.
///
/// Line-search records describe iteration k from the incumbent x^k; ARC records
/// additionally carry sigma, rho and the trial-point quantities. Radius-shrink
/// steps of the gated variants have `is_shrink` set and no step data.
struct IterationRecord {
  std::size_t k = 0;
  double alpha = 0.0;  // alpha_k, or 1 / sigma_k for ARC
  std::optional<double> sigma;
  double f = 0.0;
  double grad_norm = 0.0;
  double model_grad_norm = 0.0;
  std::optional<double> step_norm;
  std::optional<bool> is_true;
  bool is_successful = false;
  bool is_shrink = false;
  std::optional<double> xi;
  std::optional<double> rho;
  std::optional<double> f_trial;
  std::optional<double> model_decrease;
  std::optional<double> trial_grad_norm;
  // Fully-linear / fully-quadratic accuracy on the sampling ball (gated variants only).
  std::optional<bool> fully_accurate;
  // 1 - Lambda_k; left empty by the algorithms and set by annotate_below_c.
  std::optional<bool> below_C;
};

struct Trace {
  std::string algorithm;
  std::vector<IterationRecord> records;
  std::optional<std::size_t> hitting_index;
  bool capped = false;  // stopped at max_iters without hitting
  Vector x_final;
  double f_final = 0.0;

  // Step-size schedule, needed to interpret the alpha column.
  double alpha0 = 0.0;
  double alpha_max = 0.0;
  double gamma = 0.0;
};

/// Which event defines the hitting time of a line-search run.
enum class HittingEvent { gradient_norm, function_gap };

struct StoppingRule {
  double eps = 1e-3;
  HittingEvent event = HittingEvent::gradient_norm;
  std::optional<std::size_t> max_iters;  // overrides the algorithm's cap when set
};

/// Shortest decimal string that round-trips to the same double; "nan"/"inf" for
/// non-finite values.
std::string format_number(double v);

inline constexpr const char* kTraceCsvHeader =
    "k,alpha_or_inv_sigma,sigma,f,grad_norm,step_norm,is_true,is_successful,xi,rho";

void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace randopt
