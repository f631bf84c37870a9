#pragma once

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "amulab/errors.hpp"

namespace amulab::numkernel {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Central tolerance knobs. Downstream modules read these instead of
// hardcoding their own thresholds; overrides come in only through the
// verify config path.
struct ToleranceConfig {
  double hermitian_tol = 1e-12;  // max-entry asymmetry accepted at construction
  double eig_tol = 1e-10;        // relative slack for spectral contracts
};

const ToleranceConfig& tolerances();
void set_tolerances(const ToleranceConfig& cfg);

// Dense complex matrix with finite entries. Wire format is row-major
// {"rows", "cols", "entries": [[re, im], ...]}; see io.hpp.
class ComplexMatrix {
public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(Matrix m);

  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  const Matrix& mat() const { return m_; }

private:
  Matrix m_;
};

// Self-adjoint matrix. Construction verifies the asymmetry budget and
// stores (H + H*)/2, so downstream spectral calculus sees an exactly
// Hermitian value.
class HermitianMatrix {
public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& m);

  // For expressions that are self-adjoint by algebra (S h S, V f V*, ...)
  // and carry only roundoff asymmetry. Symmetrizes without the strict
  // entrywise check.
  static HermitianMatrix symmetrized(const Matrix& m);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }

private:
  struct trusted_tag {};
  HermitianMatrix(Matrix m, trusted_tag) : m_(std::move(m)) {}
  Matrix m_;
};

// Real scalar map with an explicit domain, so spectral calculus can fail
// loudly instead of extrapolating. An empty domain predicate means the
// whole real line.
struct ScalarFunction {
  std::string name;
  std::function<double(double)> fn;
  std::function<bool(double)> domain;

  double operator()(double t) const { return fn(t); }
  bool defined_at(double t) const { return !domain || domain(t); }
};

ScalarFunction identity_function();

struct EigDecomposition {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns matched to eigenvalues
};

struct EigPair {
  double value;
  Vector vector;  // unit norm
};

// Full Hermitian eigendecomposition, eigenvalues ascending.
EigDecomposition hermitian_eig(const HermitianMatrix& H);

// Largest singular value. Zero iff the matrix is zero.
double operator_norm(const ComplexMatrix& A);
double operator_norm(const Matrix& A);

// f(H) = V f(Lambda) V*. Throws DomainError naming the offending
// eigenvalue when f is undefined there.
HermitianMatrix apply_scalar_function(const HermitianMatrix& H,
                                      const ScalarFunction& f);

// Minimal eigenvalue with a unit eigenvector. Any minimizer is valid for
// degenerate spectra; contracts downstream are stated via residuals.
EigPair smallest_eigpair(const HermitianMatrix& H);

}  // namespace amulab::numkernel
