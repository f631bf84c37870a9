#pragma once

#include <string>
#include <vector>

#include "amulab/numkernel.hpp"
#include "amulab/transforms.hpp"
#include "amulab/tuples.hpp"

namespace amulab::spectrum {

using numkernel::HermitianMatrix;
using numkernel::Matrix;
using numkernel::ScalarFunction;
using numkernel::Vector;
using tuples::OperatorTuple;

// Finite eta-dense grid in the closed M-ball: the lattice of pitch
// eta/sqrt(n) intersected with the ball, ordered lexicographically.
// Dyadic refinements of eta nest.
struct GridSpec {
  int n = 0;
  double M = 0.0;
  double eta = 0.0;
  std::vector<Eigen::VectorXd> points;
};

GridSpec make_grid(int n, double M, double eta);

// Plateau bump: 1 within 3*eta/4 of center, 0 beyond eta, linear ramps.
ScalarFunction theta(double center, double eta);

// ||theta_{xi_1,eta}(h_1) ... theta_{xi_n,eta}(h_n)|| with factors in
// ascending index order. Value in [0, 1].
double theta_product_norm(const OperatorTuple& t, const Eigen::VectorXd& xi,
                          double eta);

enum class Variant { Euclidean, Spherical };

struct AcceptedCenter {
  Eigen::VectorXd center;         // R^n coordinates (pullback for spherical)
  double norm = 0.0;              // realized Theta-norm
  Eigen::VectorXd sphere_center;  // (n+1) coords, spherical variant only
};

// Union of closed radius-balls around the accepted centers. The radius is
// eta, measured in R^n for the Euclidean variant and in the ambient
// R^{n+1} metric on the sphere for the spherical one.
struct SyntheticSpectrum {
  GridSpec grid;
  Variant variant = Variant::Euclidean;
  double radius = 0.0;
  std::vector<AcceptedCenter> accepted;
  std::string source_label;
};

// Accepted = grid points whose Theta-norm is >= 1 - eta. Grid-point
// evaluations run concurrently; results merge in grid index order.
SyntheticSpectrum euclidean_synthetic_spectrum(const OperatorTuple& t, double M,
                                               double eta,
                                               std::size_t threads = 0);

// Same test on (a, 2 bar h_1, ..., 2 bar h_n) at the forward-mapped grid,
// accepted centers pulled back through the stereographic projection.
SyntheticSpectrum spherical_synthetic_spectrum(const OperatorTuple& t, double M,
                                               double eta,
                                               std::size_t threads = 0);

struct WitnessTestResult {
  bool passes = false;
  double value = 0.0;  // Re <Theta x, x>
};

// Single-vector membership test: passing certifies the Theta-norm from
// below without computing it.
WitnessTestResult witness_test(const OperatorTuple& t, const Eigen::VectorXd& xi,
                               double eta, const Vector& x);

// Diagnostic for the fixed-order convention: max and min of the
// Theta-norm over a handful of factor permutations.
struct OrderSensitivity {
  double ascending = 0.0;
  double min_over_permutations = 0.0;
  double max_over_permutations = 0.0;
};
OrderSensitivity theta_order_sensitivity(const OperatorTuple& t,
                                         const Eigen::VectorXd& xi, double eta);

}  // namespace amulab::spectrum
