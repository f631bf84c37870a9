#include "amulab/numkernel.hpp"

#include <cmath>
#include <sstream>

namespace amulab::numkernel {

namespace {

ToleranceConfig g_tolerances{};

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
        return false;
  return true;
}

double max_abs_asymmetry(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

const ToleranceConfig& tolerances() { return g_tolerances; }

void set_tolerances(const ToleranceConfig& cfg) {
  if (cfg.hermitian_tol <= 0 || cfg.eig_tol <= 0)
    throw ValidationError("tolerances must be positive");
  g_tolerances = cfg;
}

ComplexMatrix::ComplexMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() <= 0 || m_.cols() <= 0)
    throw ValidationError("ComplexMatrix: dimensions must be positive");
  if (!all_finite(m_))
    throw ValidationError("ComplexMatrix: non-finite entry");
}

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() <= 0 || m.rows() != m.cols())
    throw ValidationError("HermitianMatrix: square positive dimension required");
  if (!all_finite(m)) throw ValidationError("HermitianMatrix: non-finite entry");
  const double asym = max_abs_asymmetry(m);
  if (asym > tolerances().hermitian_tol) {
    std::ostringstream os;
    os << "HermitianMatrix: asymmetry " << asym << " exceeds hermitian_tol "
       << tolerances().hermitian_tol;
    throw ValidationError(os.str());
  }
  m_ = 0.5 * (m + m.adjoint().eval());
}

HermitianMatrix HermitianMatrix::symmetrized(const Matrix& m) {
  if (m.rows() <= 0 || m.rows() != m.cols())
    throw ValidationError("HermitianMatrix: square positive dimension required");
  if (!all_finite(m)) throw ValidationError("HermitianMatrix: non-finite entry");
  return HermitianMatrix(0.5 * (m + m.adjoint().eval()), trusted_tag{});
}

ScalarFunction identity_function() {
  return {"identity", [](double t) { return t; }, nullptr};
}

EigDecomposition hermitian_eig(const HermitianMatrix& H) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(H.mat());
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "hermitian_eig: no convergence at dim " << H.dim()
       << " (max|entry| " << H.mat().cwiseAbs().maxCoeff() << ")";
    throw NumericalError(os.str());
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double operator_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  // sigma_max via the top eigenvalue of A*A; accurate for the largest
  // singular value and cheaper than a full SVD on the hot paths.
  const Eigen::Index r = A.rows(), c = A.cols();
  Matrix gram = (r >= c) ? Matrix(A.adjoint() * A) : Matrix(A * A.adjoint());
  gram = 0.5 * (gram + gram.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("operator_norm: eigensolver non-convergence");
  const double top = solver.eigenvalues().maxCoeff();
  return top > 0 ? std::sqrt(top) : 0.0;
}

double operator_norm(const ComplexMatrix& A) { return operator_norm(A.mat()); }

HermitianMatrix apply_scalar_function(const HermitianMatrix& H,
                                      const ScalarFunction& f) {
  const EigDecomposition eig = hermitian_eig(H);
  RealVector mapped(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lambda = eig.eigenvalues(i);
    if (!f.defined_at(lambda)) {
      std::ostringstream os;
      os << "apply_scalar_function: '" << f.name
         << "' undefined at eigenvalue " << lambda;
      throw DomainError(os.str());
    }
    const double value = f(lambda);
    if (!std::isfinite(value)) {
      std::ostringstream os;
      os << "apply_scalar_function: '" << f.name
         << "' non-finite at eigenvalue " << lambda;
      throw DomainError(os.str());
    }
    mapped(i) = value;
  }
  const Matrix result = eig.eigenvectors * mapped.asDiagonal() *
                        eig.eigenvectors.adjoint();
  return HermitianMatrix::symmetrized(result);
}

EigPair smallest_eigpair(const HermitianMatrix& H) {
  const EigDecomposition eig = hermitian_eig(H);
  Vector v = eig.eigenvectors.col(0);
  v /= v.norm();
  return {eig.eigenvalues(0), v};
}

}  // namespace amulab::numkernel
