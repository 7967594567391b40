#include "wsim/model.hpp"

#include <cmath>
#include <stdexcept>

namespace wsim {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

void ModelParams::validate() const {
  require(c > 0, "model params: c must be positive");
  require(c_prime > 0, "model params: c' must be positive");
  require(rule_slope > 0, "model params: rule slope must be positive");
  require(accept_factor > 1, "model params: accept factor must exceed 1");
}

double predict_makespan_classic(double total_work, double num_procs, double c) {
  require(total_work >= 1 && num_procs >= 1 && c > 0,
          "classic makespan: need W >= 1, p >= 1, c > 0");
  return total_work / num_procs + c * std::log2(total_work);
}

double expected_steals_classic(double total_work, double num_procs, double c) {
  require(total_work >= 1 && num_procs >= 1 && c > 0,
          "classic steal count: need W >= 1, p >= 1, c > 0");
  return c * num_procs * std::log2(total_work);
}

double predict_makespan(double total_work, double num_procs, double latency, double c_prime) {
  require(total_work >= 1 && num_procs >= 1 && latency >= 1 && c_prime > 0,
          "makespan model: need W >= 1, p >= 1, lambda >= 1, c' > 0");
  if (!(total_work > 2 * latency))
    throw std::domain_error("makespan model: requires W > 2*lambda");
  return total_work / num_procs +
         2.0 * latency * c_prime * std::log2(total_work / (2.0 * latency));
}

double accuracy_ratio(double measured_makespan, double total_work, double num_procs,
                      double latency, double c_prime) {
  return measured_makespan / predict_makespan(total_work, num_procs, latency, c_prime);
}

double limit_latency(double total_work, double num_procs, double c_prime, double accept_factor) {
  require(total_work > 2 && num_procs >= 1 && c_prime > 0 && accept_factor > 1,
          "limit latency: need W > 2, p >= 1, c' > 0, accept factor > 1");
  const double target = (accept_factor - 1.0) * total_work / num_procs;
  const auto overhead = [&](double lambda) {
    return 2.0 * c_prime * lambda * std::log2(total_work / (2.0 * lambda));
  };
  // The overhead rises from zero up to lambda = W/(2e) and falls back
  // afterwards; the acceptability boundary is the root on the rising branch.
  double lo = 1.0;
  double hi = total_work / (2.0 * std::exp(1.0));
  if (hi <= lo || overhead(lo) > target || overhead(hi) < target)
    throw std::runtime_error("limit latency: no solution on the rising branch");
  while (hi - lo > 1e-3) {
    const double mid = (lo + hi) / 2.0;
    (overhead(mid) < target ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

std::uint64_t max_processors(double total_work, double latency, double rule_slope) {
  require(total_work >= 1 && latency >= 1 && rule_slope > 0,
          "max processors: need W >= 1, lambda >= 1, positive slope");
  const double quotient = total_work / (rule_slope * latency);
  if (quotient < 1.0) return 1;
  return static_cast<std::uint64_t>(quotient);
}

double fit_cprime(std::span<const FitPoint> points) {
  if (points.empty()) throw std::invalid_argument("fit: empty dataset");
  double sum_xy = 0;
  double sum_xx = 0;
  for (const auto& point : points) {
    require(point.total_work >= 1 && point.num_procs >= 1 && point.latency >= 1,
            "fit: invalid row");
    if (!(point.total_work > 2 * point.latency))
      throw std::domain_error("fit: row outside the model domain (W <= 2*lambda)");
    const double x =
        2.0 * point.latency * std::log2(point.total_work / (2.0 * point.latency));
    const double y = point.measured_makespan - point.total_work / point.num_procs;
    sum_xy += x * y;
    sum_xx += x * x;
  }
  if (sum_xx == 0) throw std::runtime_error("fit: degenerate dataset, no latency signal");
  return sum_xy / sum_xx;
}

}  // namespace wsim
