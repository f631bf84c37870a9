#pragma once

#include <vector>

#include "amulab/numkernel.hpp"
#include "amulab/spectrum.hpp"
#include "amulab/tuples.hpp"

namespace amulab::amu {

using numkernel::HermitianMatrix;
using numkernel::Vector;
using tuples::OperatorTuple;

// Certified dispersion data for one unit vector at one target point.
struct AmuWitness {
  Eigen::VectorXd lambda;
  Vector vector;                    // unit norm
  Eigen::VectorXd residuals;        // ||(h_i - lambda_i) v||
  double max_residual = 0.0;
  Eigen::VectorXd expectation_gap;  // |<h_i v, v> - lambda_i|, <= residuals
};

// Q(lambda) = sum_i (h_i - lambda_i)^2; PSD, and <Q v, v> is the sum of
// squared residuals for any unit v.
HermitianMatrix residual_operator(const OperatorTuple& t,
                                  const Eigen::VectorXd& lambda);

// Globally optimal witness for the squared-residual objective: the bottom
// eigenvector of Q(lambda). max <= sqrt(sum) converts the certificate to
// the per-coordinate bound.
AmuWitness find_amu_state(const OperatorTuple& t, const Eigen::VectorXd& lambda);

// Membership in the self-centered AMU set: lambda_j = <h_j v, v> and
// every residual is < sigma.
bool is_amu_member(const OperatorTuple& t, const Vector& v, double sigma);

struct ScanResult {
  std::vector<AmuWitness> witnesses;    // one per accepted center, in order
  std::vector<std::size_t> failing;     // indices with max_residual >= epsilon
  double epsilon = 0.0;
  bool all_pass() const { return failing.empty(); }
};

// One witness per accepted center of the spectrum. Centers failing the
// epsilon bound are flagged, never dropped.
ScanResult scan_amu(const OperatorTuple& t,
                    const spectrum::SyntheticSpectrum& s, double epsilon,
                    std::size_t threads = 0);

}  // namespace amulab::amu
