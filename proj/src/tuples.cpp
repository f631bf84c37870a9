#include "amulab/tuples.hpp"

#include <cmath>
#include <sstream>

#include "amulab/rng.hpp"

namespace amulab::tuples {

using numkernel::operator_norm;

OperatorTuple::OperatorTuple(std::vector<HermitianMatrix> ops, std::string label,
                             std::optional<Eigen::Index> interior_dim)
    : ops_(std::move(ops)), label_(std::move(label)), interior_dim_(interior_dim) {
  if (ops_.empty()) throw ValidationError("OperatorTuple: needs n >= 1 operators");
  const Eigen::Index d = ops_.front().dim();
  for (const auto& op : ops_)
    if (op.dim() != d)
      throw ValidationError("OperatorTuple: operators must share one dimension");
  if (interior_dim_ && (*interior_dim_ <= 0 || *interior_dim_ > d))
    throw ValidationError("OperatorTuple: interior_dim out of range");
}

const HermitianMatrix& OperatorTuple::op(int i) const {
  if (i < 0 || i >= n()) {
    std::ostringstream os;
    os << "OperatorTuple: index " << i << " out of range for n=" << n();
    throw ValidationError(os.str());
  }
  return ops_[static_cast<std::size_t>(i)];
}

ComplexMatrix commutator(const OperatorTuple& t, int i, int j) {
  const Matrix& a = t.op(i).mat();
  const Matrix& b = t.op(j).mat();
  return ComplexMatrix(a * b - b * a);
}

CommutatorReport commutator_report(const OperatorTuple& t,
                                   bool restrict_to_interior) {
  const int n = t.n();
  Eigen::Index d = t.dim();
  if (restrict_to_interior) {
    if (!t.interior_dim())
      throw ValidationError("commutator_report: tuple has no interior_dim");
    d = *t.interior_dim();
  }
  CommutatorReport report;
  report.pairwise_norms = Eigen::MatrixXd::Zero(n, n);
  report.restricted_to_interior = restrict_to_interior;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Matrix c = commutator(t, i, j).mat().topLeftCorner(d, d);
      const double norm = operator_norm(c);
      report.pairwise_norms(i, j) = norm;
      report.pairwise_norms(j, i) = norm;
      report.max_delta = std::max(report.max_delta, norm);
    }
  }
  return report;
}

namespace {

double max_pairwise_commutator(const std::vector<Matrix>& h) {
  double worst = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j)
      worst = std::max(worst, operator_norm(Matrix(h[i] * h[j] - h[j] * h[i])));
  return worst;
}

}  // namespace

OperatorTuple random_almost_commuting(int n, Eigen::Index dim, double delta,
                                      std::uint64_t seed) {
  if (n < 1) throw ValidationError("random_almost_commuting: n >= 1 required");
  if (dim < 1) throw ValidationError("random_almost_commuting: dim >= 1 required");
  if (delta < 0) throw ValidationError("random_almost_commuting: delta >= 0");

  Rng rng(seed);
  std::vector<Matrix> diag(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd entries(dim);
    for (Eigen::Index k = 0; k < dim; ++k) entries(k) = rng.uniform(-1.0, 1.0);
    diag[static_cast<std::size_t>(i)] =
        entries.cast<numkernel::Complex>().asDiagonal();
  }
  std::vector<Matrix> pert(n);
  for (int i = 0; i < n; ++i) {
    Matrix e = rng.hermitian(dim);
    const double norm = operator_norm(e);
    if (norm > 0) e /= norm;
    pert[static_cast<std::size_t>(i)] = e;
  }

  std::ostringstream label;
  label << "random_almost_commuting(n=" << n << ",dim=" << dim
        << ",delta=" << delta << ",seed=" << seed << ")";

  auto assemble = [&](double s) {
    std::vector<Matrix> h(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(i);
      h[k] = diag[k] + s * pert[k];
    }
    return h;
  };

  double s = 0.0;
  if (delta > 0 && n > 1 && dim > 1) {
    // First-order scale guess, then calibrate so the realized max
    // commutator sits in (0.8*delta, delta]; the quadratic cross term
    // keeps this from being exact in one shot.
    double linear = 0.0, quadratic = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const auto ki = static_cast<std::size_t>(i);
        const auto kj = static_cast<std::size_t>(j);
        const Matrix cross = diag[ki] * pert[kj] - pert[kj] * diag[ki] +
                             pert[ki] * diag[kj] - diag[kj] * pert[ki];
        linear = std::max(linear, operator_norm(cross));
        quadratic = std::max(
            quadratic, operator_norm(Matrix(pert[ki] * pert[kj] -
                                            pert[kj] * pert[ki])));
      }
    const double denom = linear + quadratic;
    s = denom > 0 ? std::min(1.0, delta / denom) : 1.0;
    for (int iter = 0; iter < 24; ++iter) {
      const double m = max_pairwise_commutator(assemble(s));
      if ((m > 0.8 * delta && m <= delta) || (s >= 1.0 && m <= delta)) break;
      if (m <= 0) break;
      s = std::min(1.0, s * std::min(2.0, 0.9 * delta / m));
    }
    while (s > 0 && max_pairwise_commutator(assemble(s)) > delta) s *= 0.95;
  } else if (delta > 0) {
    s = std::min(1.0, delta);  // single op or 1x1: commutators vanish anyway
  }

  std::vector<HermitianMatrix> ops;
  ops.reserve(static_cast<std::size_t>(n));
  for (auto& h : assemble(s)) ops.push_back(HermitianMatrix::symmetrized(h));
  return OperatorTuple(std::move(ops), label.str());
}

HermitianMatrix sum_of_squares(const OperatorTuple& t) {
  Matrix d = Matrix::Zero(t.dim(), t.dim());
  for (const auto& op : t.ops()) d += op.mat() * op.mat();
  return HermitianMatrix::symmetrized(d);
}

}  // namespace amulab::tuples
