#pragma once

#include <cstdint>
#include <span>

namespace wsim {

// Constants of the analytic makespan expressions.
struct ModelParams {
  double c = 1.0;              // latency-free constant, caller supplied
  double c_prime = 1.8;        // latency-aware constant, fitted
  double accept_factor = 1.1;  // makespan <= accept_factor * W/p counts as acceptable
  double rule_slope = 470.0;   // rule of thumb W/p = rule_slope * lambda

  void validate() const;  // all fields positive, accept_factor > 1
};

// Latency-free expectation W/p + c*log2(W). The constant-order tail term is
// dropped. Throws std::invalid_argument on nonpositive inputs.
double predict_makespan_classic(double total_work, double num_procs, double c);

// Expected number of steal requests without latency: c * log2(W) * p.
double expected_steals_classic(double total_work, double num_procs, double c);

// Latency-aware expectation W/p + 2*lambda*c'*log2(W/(2*lambda)). Only
// defined for W > 2*lambda; throws std::domain_error outside that.
double predict_makespan(double total_work, double num_procs, double latency,
                        double c_prime = 1.8);

// measured / predicted.
double accuracy_ratio(double measured_makespan, double total_work, double num_procs,
                      double latency, double c_prime = 1.8);

// Largest latency still yielding an acceptable makespan: the root of
//   (accept_factor - 1) * W/p = 2*c'*lambda*log2(W/(2*lambda))
// on the branch where the right side rises from zero (lambda <= W/(2e)).
// Bisection to 1e-3 absolute; throws std::runtime_error when the bracket
// holds no root.
double limit_latency(double total_work, double num_procs, double c_prime = 1.8,
                     double accept_factor = 1.1);

// floor(W / (rule_slope * lambda)), clamped to at least 1.
std::uint64_t max_processors(double total_work, double latency, double rule_slope = 470.0);

struct FitPoint {
  double total_work = 0;
  double num_procs = 0;
  double latency = 0;
  double measured_makespan = 0;  // mean across replications
};

// Through-origin least squares for c' in
//   measured - W/p = c' * (2*lambda*log2(W/(2*lambda))).
// Every row must satisfy W > 2*lambda.
double fit_cprime(std::span<const FitPoint> points);

}  // namespace wsim
