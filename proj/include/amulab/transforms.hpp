#pragma once

#include <string>
#include <vector>

#include "amulab/numkernel.hpp"
#include "amulab/tuples.hpp"

namespace amulab::transforms {

using numkernel::ComplexMatrix;
using numkernel::HermitianMatrix;
using numkernel::Matrix;
using numkernel::ScalarFunction;
using tuples::OperatorTuple;

// Sphere-relation pair (a, b_1..b_n) with a = (d-1)(1+d)^{-1} and
// b_j = 2 h_j (1+d)^{-1}, d = sum h_j^2. Satisfies
// sum b_j* b_j + a^2 = 1 exactly in exact arithmetic; the realized
// residual is stored for diagnostics.
struct BoundedTransform {
  HermitianMatrix a;
  std::vector<ComplexMatrix> b;
  std::string source_label;
  double identity_residual = 0.0;    // ||sum b*b + a^2 - 1||
  double max_b_asymmetry = 0.0;      // max_j ||b_j - b_j*||, surfaced, not symmetrized away
};

BoundedTransform bounded_transform(const OperatorTuple& t);

// tilde h_j = h_j (1+d)^{-1}; contraction, generally non-Hermitian at
// finite commutator size.
std::vector<ComplexMatrix> tilde_transform(const OperatorTuple& t);

// bar h_j = (1+d)^{-1/2} h_j (1+d)^{-1/2}; Hermitian by construction,
// ||2 bar h_j|| <= 1.
std::vector<HermitianMatrix> bar_transform(const OperatorTuple& t);

// Plateau cutoff e_M evaluated on d^{1/2} by spectral calculus:
// e_M(s) = 1 for |s| <= M, 0 for |s| > M+1, linear between.
HermitianMatrix cutoff(const HermitianMatrix& dsqrt_source, double M);
ScalarFunction cutoff_function(double M);

// Point of S^n stored as (r, x_1..x_n) with r^2 + sum x_j^2 = 1.
class SpherePoint {
public:
  explicit SpherePoint(Eigen::VectorXd coords);
  int n() const { return static_cast<int>(coords_.size()) - 1; }
  double r() const { return coords_(0); }
  const Eigen::VectorXd& coords() const { return coords_; }

private:
  Eigen::VectorXd coords_;
};

// Inverse stereographic map R^n -> S^n \ {north pole}:
// r = (|p|^2-1)/(|p|^2+1), x_j = 2 p_j/(|p|^2+1).
SpherePoint stereographic_forward(const Eigen::VectorXd& p);

// Stereographic projection, p_j = x_j/(1-r). Undefined at the north pole.
Eigen::VectorXd stereographic_inverse(const SpherePoint& s);

// Linear moduli of continuity for the sphere maps. F_M dominates the
// distortion of the inverse map on the bowl {1-r >= 2/(M^2+1)}; G_M
// dominates the squared distortion of the forward map on the M-ball.
double modulus_F(double M, double t);
double modulus_G(double M, double t);

// H_i = h_i (1 + s h_i^2)^{-1}, single-operator calculus so each H_i is
// exactly Hermitian; ||H_i|| <= 1/(2 sqrt(s)).
OperatorTuple resolvent_reparam(const OperatorTuple& t, double s);

// Continuous phi with plateaus such that phi inverts x -> x/(1+ramp x^2)
// on [-(M+1), M+1]. For f supported in [-M, M] and spectra inside
// (-1/(ramp*M), 1/(ramp*M)), f(phi(h(1+ramp h^2)^{-1})) = f(h); beyond
// that range the reparametrized map conflates conjugate points and no
// phi can separate them.
ScalarFunction build_phi(double support_bound, double ramp);

}  // namespace amulab::transforms
