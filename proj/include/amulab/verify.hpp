#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "amulab/numkernel.hpp"
#include "amulab/tuples.hpp"

namespace amulab::verify {

using tuples::OperatorTuple;

// Outcome of one named check over an ensemble. Margin is bound minus
// observed, so positive means the inequality held with room; failures
// carry the seeds that reproduce a violation.
struct CheckResult {
  std::string name;
  int instances = 0;
  double worst_margin = 0.0;
  std::vector<std::uint64_t> failures;
  double elapsed_ms = 0.0;

  bool pass() const { return failures.empty() && worst_margin > 0.0; }
};

nlohmann::json check_result_to_json(const CheckResult& r);

// Unconditional resolvent norm bounds: for every tuple,
// ||h_j (1+d)^{-1/2}|| <= 1, ||h_j (1+d)^{-1}|| <= 1,
// ||e_M(d^{1/2}) h_j|| <= M and ||2 (1+d)^{-1/2} h_j (1+d)^{-1/2}|| <= 1,
// plus 0 <= d(1+d)^{-1} <= 1. Run over random tuples, a scalar sweep and
// large-norm instances; the bounds are scale-free.
CheckResult check_linqx(int ensemble, const std::vector<Eigen::Index>& dims,
                        std::uint64_t seed);

// Commutator transfer through the bounded transform: tuples generated at
// max commutator 0.9*eta/(6n) must satisfy ||[a, b_j]|| < eta,
// ||b_j - b_j*|| < eta, ||[b_i, b_j]|| < eta and
// ||tilde h_j - bar h_j|| < eta/3.
CheckResult check_commutator_transfer(double eta, int n, int ensemble,
                                      std::uint64_t seed);

// Reparametrization H_i = h_i (1 + s h_i^2)^{-1}: ||[H_i, H_j]|| < 4*delta
// and ||[H_i, (1 + s h_j^2)^{-1}]|| < 4*delta*sqrt(s) for each s.
CheckResult check_reparam(double delta, const std::vector<double>& s_values,
                          int ensemble, std::uint64_t seed);

// Empirical functional-calculus transfer: worst ||[f(h_i), g(h_j)]|| over
// the ensemble is nonincreasing along the delta sweep and ends below 1e-2.
CheckResult check_functional_transfer(const std::vector<double>& delta_sweep,
                                      int ensemble, std::uint64_t seed);

// Lipschitz bound for T -> (1+TT*)^{-1/2} T: perturbations of norm < delta
// move the transform by < 2*delta.
CheckResult check_transform_lipschitz(double delta, Eigen::Index dim,
                                      int ensemble, std::uint64_t seed);

// Set inclusions between the spherical and Euclidean synthetic spectra,
// with sigma = max{eta, F_M(eta) + sigma_1} and
// gamma = max{delta, G_M(delta) + delta_1}. Left-side balls are sampled
// point by point (the sphere maps are bijections off the north pole, so
// membership tests are exact); each sample must land in the right side.
CheckResult check_spectrum_inclusions(const std::vector<OperatorTuple>& fixtures,
                                      double M, double eta, double delta,
                                      std::size_t threads = 0);

// ---- acceptance suite ----

struct AcceptanceConfig {
  std::set<int> criteria;  // empty = all
  std::uint64_t seed = 1;
  std::size_t threads = 0;

  static AcceptanceConfig from_json(const nlohmann::json& j);
};

struct CriterionResult {
  int id = 0;
  std::string criterion;
  std::string status;  // "pass" | "fail"
  double margin = 0.0;
  std::vector<std::uint64_t> seeds_failed;
  double runtime_ms = 0.0;

  bool pass() const { return status == "pass"; }
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool all_pass = true;
};

AcceptanceReport run_acceptance(const AcceptanceConfig& config);

nlohmann::json acceptance_report_to_json(const AcceptanceReport& report);
std::string acceptance_report_to_csv(const AcceptanceReport& report);

}  // namespace amulab::verify
