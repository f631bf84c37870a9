#include "amulab/models.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "amulab/errors.hpp"

namespace amulab::models {

using numkernel::apply_scalar_function;
using numkernel::Complex;
using numkernel::HermitianMatrix;

namespace {

constexpr double kCoherentTailBudget = 1e-8;

}  // namespace

OperatorTuple from_descriptor(const ModelDescriptor& d) {
  switch (d.kind) {
    case ModelKind::HermiteXP:
      return hermite_position_momentum(d.N, d.hbar);
    case ModelKind::AngularMomentum:
      return angular_momentum_block(d.j, d.hbar);
    case ModelKind::CommutingDiagonal:
      return commuting_diagonal_model(d.points, d.dim);
  }
  throw ValidationError("from_descriptor: unknown model kind");
}

OperatorTuple hermite_position_momentum(int N, double hbar) {
  if (N < 8) throw ValidationError("hermite_position_momentum: N >= 8 required");
  if (hbar == 0.0)
    throw ValidationError("hermite_position_momentum: hbar != 0 required");
  const double ah = std::abs(hbar);
  const double sign = hbar > 0 ? 1.0 : -1.0;
  Matrix s1 = Matrix::Zero(N, N);
  Matrix sh = Matrix::Zero(N, N);
  for (int k = 0; k + 1 < N; ++k) {
    const double c = std::sqrt(ah * (k + 1) / 2.0);
    s1(k, k + 1) = c;
    s1(k + 1, k) = c;
    sh(k, k + 1) = Complex(0.0, -sign * c);
    sh(k + 1, k) = Complex(0.0, sign * c);
  }
  std::ostringstream label;
  label << "hermite_xp(N=" << N << ",hbar=" << hbar << ")";
  std::vector<HermitianMatrix> ops;
  ops.push_back(HermitianMatrix::symmetrized(s1));
  ops.push_back(HermitianMatrix::symmetrized(sh));
  return OperatorTuple(std::move(ops), label.str(), N - 1);
}

ComplexMatrix t_hbar_operator(int N, double hbar) {
  const OperatorTuple xp = hermite_position_momentum(N, hbar);
  return ComplexMatrix(
      Matrix(xp.op(0).mat() + Complex(0.0, 1.0) * xp.op(1).mat()));
}

ComplexMatrix bounded_L(const ComplexMatrix& T) {
  if (T.rows() != T.cols()) throw ValidationError("bounded_L: square T required");
  const HermitianMatrix tt =
      HermitianMatrix::symmetrized(T.mat() * T.mat().adjoint());
  const numkernel::ScalarFunction inv_sqrt{
      "(1+t)^-1/2",
      [](double t) { return 1.0 / std::sqrt(1.0 + std::max(t, 0.0)); },
      nullptr};
  const HermitianMatrix r = apply_scalar_function(tt, inv_sqrt);
  return ComplexMatrix(Matrix(r.mat() * T.mat()));
}

IndexReport fredholm_index(const ComplexMatrix& T, double svd_threshold_ratio,
                           Rectangularization rect) {
  if (!(svd_threshold_ratio > 1.0))
    throw ValidationError("fredholm_index: threshold ratio > 1 required");

  Matrix m = T.mat();
  Rectangularization applied = rect;
  if (rect == Rectangularization::Auto) {
    if (m.rows() != m.cols())
      applied = Rectangularization::None;  // caller already rectangularized
    else {
      const double last_row = m.row(m.rows() - 1).norm();
      const double last_col = m.col(m.cols() - 1).norm();
      applied = last_row <= last_col ? Rectangularization::DropTopRow
                                     : Rectangularization::DropTopColumn;
    }
  }
  switch (applied) {
    case Rectangularization::DropTopRow:
      if (m.rows() < 2) throw ValidationError("fredholm_index: matrix too small");
      m = m.topRows(m.rows() - 1).eval();
      break;
    case Rectangularization::DropTopColumn:
      if (m.cols() < 2) throw ValidationError("fredholm_index: matrix too small");
      m = m.leftCols(m.cols() - 1).eval();
      break;
    default:
      break;
  }

  Eigen::BDCSVD<Matrix> svd(m);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double cut = sigma_max / svd_threshold_ratio;

  int rank = 0;
  double smallest_kept = std::numeric_limits<double>::infinity();
  double largest_discarded = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cut && sigma(i) > 0.0) {
      ++rank;
      smallest_kept = std::min(smallest_kept, sigma(i));
    } else {
      largest_discarded = std::max(largest_discarded, sigma(i));
    }
  }

  IndexReport report;
  report.kernel_dim = static_cast<int>(m.cols()) - rank;
  report.cokernel_dim = static_cast<int>(m.rows()) - rank;
  report.index = report.kernel_dim - report.cokernel_dim;
  report.singular_gap = largest_discarded > 0.0
                            ? smallest_kept / largest_discarded
                            : std::numeric_limits<double>::infinity();
  report.conclusive = report.singular_gap >= 10.0;
  switch (applied) {
    case Rectangularization::DropTopRow: report.note = "dropped top output row"; break;
    case Rectangularization::DropTopColumn: report.note = "dropped top input column"; break;
    default: report.note = "square map"; break;
  }
  if (!report.conclusive) report.note += "; inconclusive (singular gap < 10)";
  return report;
}

OperatorTuple angular_momentum_block(double j, double hbar) {
  const double two_j = 2.0 * j;
  if (j < 0 || std::abs(two_j - std::round(two_j)) > 1e-12)
    throw ValidationError("angular_momentum_block: j must be a half-integer >= 0");
  if (hbar == 0.0)
    throw ValidationError("angular_momentum_block: hbar != 0 required");
  const int dim = static_cast<int>(std::lround(two_j)) + 1;

  // basis ordered m = j, j-1, ..., -j
  Matrix lz = Matrix::Zero(dim, dim);
  Matrix lplus = Matrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    const double m = j - k;
    lz(k, k) = hbar * m;
    if (k > 0) {
      // <m+1| L+ |m> with m = j-k
      lplus(k - 1, k) = hbar * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    }
  }
  const Matrix lminus = lplus.adjoint();
  const Matrix lx = 0.5 * (lplus + lminus);
  const Matrix ly = Complex(0.0, -0.5) * (lplus - lminus);

  std::ostringstream label;
  label << "angular_momentum(j=" << j << ",hbar=" << hbar << ")";
  std::vector<HermitianMatrix> ops;
  ops.push_back(HermitianMatrix::symmetrized(lx));
  ops.push_back(HermitianMatrix::symmetrized(ly));
  ops.push_back(HermitianMatrix::symmetrized(lz));
  // the block realizes the algebra exactly; the whole space is faithful
  return OperatorTuple(std::move(ops), label.str(), dim);
}

Vector coherent_state(int N, double hbar, double lambda1, double lambda2) {
  if (N < 8) throw ValidationError("coherent_state: N >= 8 required");
  if (hbar == 0.0) throw ValidationError("coherent_state: hbar != 0 required");
  const double ah = std::abs(hbar);
  const double sign = hbar > 0 ? 1.0 : -1.0;
  const Complex alpha =
      Complex(lambda1, sign * lambda2) / std::sqrt(2.0 * ah);

  Vector v(N);
  Complex c = std::exp(Complex(-0.5 * std::norm(alpha), 0.0));
  double captured = 0.0;
  for (int k = 0; k < N; ++k) {
    v(k) = c;
    captured += std::norm(c);
    c *= alpha / std::sqrt(static_cast<double>(k + 1));
  }
  const double tail = 1.0 - captured;
  if (tail > kCoherentTailBudget) {
    std::ostringstream os;
    os << "coherent_state: truncated tail " << tail << " exceeds "
       << kCoherentTailBudget << "; increase N (got " << N << ")";
    throw ValidationError(os.str());
  }
  return v / v.norm();
}

OperatorTuple commuting_diagonal_model(const std::vector<Eigen::VectorXd>& points,
                                       Eigen::Index dim) {
  if (points.empty())
    throw ValidationError("commuting_diagonal_model: needs at least one point");
  const Eigen::Index n = points.front().size();
  if (n < 1) throw ValidationError("commuting_diagonal_model: empty point");
  for (const auto& p : points)
    if (p.size() != n)
      throw ValidationError("commuting_diagonal_model: inconsistent point sizes");
  if (dim < static_cast<Eigen::Index>(points.size()))
    throw ValidationError("commuting_diagonal_model: dim >= #points required");

  std::vector<HermitianMatrix> ops;
  ops.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    Matrix h = Matrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k)
      h(k, k) = points[static_cast<std::size_t>(k) % points.size()](i);
    ops.push_back(HermitianMatrix::symmetrized(h));
  }
  std::ostringstream label;
  label << "commuting_diagonal(" << points.size() << " points,dim=" << dim << ")";
  return OperatorTuple(std::move(ops), label.str(), dim);
}

}  // namespace amulab::models
