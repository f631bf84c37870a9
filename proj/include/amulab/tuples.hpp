#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amulab/numkernel.hpp"

namespace amulab::tuples {

using numkernel::ComplexMatrix;
using numkernel::HermitianMatrix;
using numkernel::Matrix;

// Finite truncation of an n-tuple of self-adjoint operators on a common
// space. interior_dim, when present, marks the leading subspace on which
// identities of the underlying infinite-dimensional model hold exactly;
// the top basis rows of a truncation are not faithful.
class OperatorTuple {
public:
  OperatorTuple(std::vector<HermitianMatrix> ops, std::string label = {},
                std::optional<Eigen::Index> interior_dim = std::nullopt);

  int n() const { return static_cast<int>(ops_.size()); }
  Eigen::Index dim() const { return ops_.front().dim(); }
  const std::string& label() const { return label_; }
  std::optional<Eigen::Index> interior_dim() const { return interior_dim_; }
  const HermitianMatrix& op(int i) const;
  const std::vector<HermitianMatrix>& ops() const { return ops_; }

private:
  std::vector<HermitianMatrix> ops_;
  std::string label_;
  std::optional<Eigen::Index> interior_dim_;
};

struct CommutatorReport {
  Eigen::MatrixXd pairwise_norms;  // symmetric, zero diagonal
  double max_delta = 0.0;
  bool restricted_to_interior = false;
};

// h_i h_j - h_j h_i; anti-Hermitian up to roundoff.
ComplexMatrix commutator(const OperatorTuple& t, int i, int j);

// Pairwise commutator norms on the full truncation, or on the compression
// to the leading interior_dim coordinates when requested.
CommutatorReport commutator_report(const OperatorTuple& t,
                                   bool restrict_to_interior = false);

// Test ensemble generator: commuting diagonal tuple D (entries uniform in
// [-1,1]) plus Hermitian perturbations scaled so the max pairwise
// commutator norm lands in (0.8*delta, delta]. Deterministic in seed;
// every operator has norm <= 2.
OperatorTuple random_almost_commuting(int n, Eigen::Index dim, double delta,
                                      std::uint64_t seed);

// d = sum_j h_j^2, positive semidefinite.
HermitianMatrix sum_of_squares(const OperatorTuple& t);

}  // namespace amulab::tuples
