#include "amulab/amu.hpp"

#include <cmath>

#include "amulab/parallel.hpp"

namespace amulab::amu {

using numkernel::Matrix;
using numkernel::smallest_eigpair;
using numkernel::tolerances;

HermitianMatrix residual_operator(const OperatorTuple& t,
                                  const Eigen::VectorXd& lambda) {
  if (lambda.size() != t.n())
    throw ValidationError("residual_operator: lambda dimension mismatch");
  const Eigen::Index d = t.dim();
  Matrix q = Matrix::Zero(d, d);
  for (int i = 0; i < t.n(); ++i) {
    const Matrix shifted =
        t.op(i).mat() - lambda(i) * Matrix::Identity(d, d);
    q += shifted * shifted;
  }
  return HermitianMatrix::symmetrized(q);
}

namespace {

AmuWitness witness_from_vector(const OperatorTuple& t,
                               const Eigen::VectorXd& lambda, Vector v) {
  v /= v.norm();
  AmuWitness w;
  w.lambda = lambda;
  w.residuals.resize(t.n());
  w.expectation_gap.resize(t.n());
  for (int i = 0; i < t.n(); ++i) {
    const Vector hv = t.op(i).mat() * v;
    w.residuals(i) = (hv - lambda(i) * v).norm();
    w.expectation_gap(i) = std::abs(std::real(v.dot(hv)) - lambda(i));
  }
  w.max_residual = t.n() > 0 ? w.residuals.maxCoeff() : 0.0;
  w.vector = std::move(v);
  return w;
}

}  // namespace

AmuWitness find_amu_state(const OperatorTuple& t, const Eigen::VectorXd& lambda) {
  const HermitianMatrix q = residual_operator(t, lambda);
  return witness_from_vector(t, lambda, smallest_eigpair(q).vector);
}

bool is_amu_member(const OperatorTuple& t, const Vector& v, double sigma) {
  if (v.size() != t.dim())
    throw ValidationError("is_amu_member: vector dimension mismatch");
  if (std::abs(v.norm() - 1.0) > tolerances().eig_tol)
    throw ValidationError("is_amu_member: v must be a unit vector");
  Eigen::VectorXd lambda(t.n());
  for (int i = 0; i < t.n(); ++i)
    lambda(i) = std::real(v.dot(t.op(i).mat() * v));
  const AmuWitness w = witness_from_vector(t, lambda, v);
  return w.max_residual < sigma;
}

ScanResult scan_amu(const OperatorTuple& t, const spectrum::SyntheticSpectrum& s,
                    double epsilon, std::size_t threads) {
  if (s.grid.n != t.n())
    throw ValidationError("scan_amu: spectrum/tuple dimension mismatch");
  ScanResult result;
  result.epsilon = epsilon;
  result.witnesses.resize(s.accepted.size());
  parallel_for(
      s.accepted.size(),
      [&](std::size_t i) {
        result.witnesses[i] = find_amu_state(t, s.accepted[i].center);
      },
      threads);
  for (std::size_t i = 0; i < result.witnesses.size(); ++i)
    if (result.witnesses[i].max_residual >= epsilon) result.failing.push_back(i);
  return result;
}

}  // namespace amulab::amu
