#include "amulab/transforms.hpp"

#include <cmath>
#include <sstream>

namespace amulab::transforms {

using numkernel::apply_scalar_function;
using numkernel::hermitian_eig;
using numkernel::operator_norm;
using numkernel::tolerances;
using tuples::sum_of_squares;

namespace {

ScalarFunction resolvent_function() {
  return {"(1+t)^-1", [](double t) { return 1.0 / (1.0 + t); }, nullptr};
}

ScalarFunction inv_sqrt_resolvent_function() {
  return {"(1+t)^-1/2",
          [](double t) { return 1.0 / std::sqrt(1.0 + t); },
          [](double t) { return t > -1.0; }};
}

}  // namespace

BoundedTransform bounded_transform(const OperatorTuple& t) {
  const HermitianMatrix d = sum_of_squares(t);
  const HermitianMatrix resolvent = apply_scalar_function(d, resolvent_function());
  const ScalarFunction a_fn{"(t-1)/(t+1)",
                            [](double s) { return (s - 1.0) / (s + 1.0); },
                            nullptr};
  BoundedTransform bt;
  bt.a = apply_scalar_function(d, a_fn);
  bt.source_label = t.label();
  bt.b.reserve(static_cast<std::size_t>(t.n()));

  Matrix residual = bt.a.mat() * bt.a.mat();
  for (int j = 0; j < t.n(); ++j) {
    Matrix bj = 2.0 * t.op(j).mat() * resolvent.mat();
    residual += bj.adjoint() * bj;
    bt.max_b_asymmetry =
        std::max(bt.max_b_asymmetry, operator_norm(Matrix(bj - bj.adjoint())));
    bt.b.emplace_back(std::move(bj));
  }
  residual -= Matrix::Identity(t.dim(), t.dim());
  bt.identity_residual = operator_norm(residual);
  return bt;
}

std::vector<ComplexMatrix> tilde_transform(const OperatorTuple& t) {
  const HermitianMatrix resolvent =
      apply_scalar_function(sum_of_squares(t), resolvent_function());
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(t.n()));
  for (int j = 0; j < t.n(); ++j)
    out.emplace_back(Matrix(t.op(j).mat() * resolvent.mat()));
  return out;
}

std::vector<HermitianMatrix> bar_transform(const OperatorTuple& t) {
  const HermitianMatrix s =
      apply_scalar_function(sum_of_squares(t), inv_sqrt_resolvent_function());
  std::vector<HermitianMatrix> out;
  out.reserve(static_cast<std::size_t>(t.n()));
  for (int j = 0; j < t.n(); ++j)
    out.push_back(
        HermitianMatrix::symmetrized(s.mat() * t.op(j).mat() * s.mat()));
  return out;
}

ScalarFunction cutoff_function(double M) {
  if (M <= 0) throw ValidationError("cutoff: M > 0 required");
  std::ostringstream name;
  name << "e_" << M;
  return {name.str(),
          [M](double s) {
            const double a = std::abs(s);
            if (a <= M) return 1.0;
            if (a >= M + 1.0) return 0.0;
            return M + 1.0 - a;
          },
          nullptr};
}

HermitianMatrix cutoff(const HermitianMatrix& dsqrt_source, double M) {
  const ScalarFunction e_M = cutoff_function(M);
  // e_M(d^{1/2}): clamp the tiny negative eigenvalues a PSD d picks up in
  // floating point before the square root.
  ScalarFunction composed{
      e_M.name + "(sqrt)",
      [e_M](double lambda) { return e_M(std::sqrt(std::max(lambda, 0.0))); },
      nullptr};
  return apply_scalar_function(dsqrt_source, composed);
}

SpherePoint::SpherePoint(Eigen::VectorXd coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2)
    throw ValidationError("SpherePoint: needs at least (r, x_1)");
  const double err = std::abs(coords_.squaredNorm() - 1.0);
  if (err > 8 * tolerances().hermitian_tol)
    throw ValidationError("SpherePoint: coordinates off the unit sphere");
}

SpherePoint stereographic_forward(const Eigen::VectorXd& p) {
  const double q = p.squaredNorm();
  Eigen::VectorXd coords(p.size() + 1);
  coords(0) = (q - 1.0) / (q + 1.0);
  coords.tail(p.size()) = (2.0 / (q + 1.0)) * p;
  return SpherePoint(std::move(coords));
}

Eigen::VectorXd stereographic_inverse(const SpherePoint& s) {
  const double denom = 1.0 - s.r();
  if (denom <= 1e-14)
    throw DomainError("stereographic_inverse: undefined at the north pole");
  return s.coords().tail(s.n()) / denom;
}

double modulus_F(double M, double t) {
  if (M <= 1) throw ValidationError("modulus_F: M > 1 required");
  if (t < 0 || t > 2) throw DomainError("modulus_F: t must lie in [0, 2]");
  const double c = (M * M + 1.0) * (M * M + 1.0) / 2.0;
  return c * t;
}

double modulus_G(double M, double t) {
  if (M <= 1) throw ValidationError("modulus_G: M > 1 required");
  if (t < 0 || t > 2 * M)
    throw DomainError("modulus_G: t must lie in [0, 2M]");
  return (2.0 + 2.0 * M) * t;
}

OperatorTuple resolvent_reparam(const OperatorTuple& t, double s) {
  if (!(s > 0.0) || s > 1.0)
    throw ValidationError("resolvent_reparam: s must lie in (0, 1]");
  ScalarFunction reparam{"t/(1+s t^2)",
                         [s](double x) { return x / (1.0 + s * x * x); },
                         nullptr};
  std::vector<HermitianMatrix> ops;
  ops.reserve(static_cast<std::size_t>(t.n()));
  for (const auto& h : t.ops()) ops.push_back(apply_scalar_function(h, reparam));
  return OperatorTuple(std::move(ops), t.label() + "|reparam", t.interior_dim());
}

ScalarFunction build_phi(double support_bound, double ramp) {
  const double M = support_bound;
  if (M <= 0) throw ValidationError("build_phi: support_bound > 0 required");
  if (!(ramp > 0.0) || ramp >= 1.0 / ((M + 2.0) * (M + 2.0)))
    throw ValidationError("build_phi: ramp must lie in (0, 1/(M+2)^2)");
  const double edge = M + 1.0;
  const double lo = -edge / (1.0 + ramp * edge * edge);  // g(-(M+1))
  const double hi = edge / (1.0 + ramp * edge * edge);   //  g(M+1)
  // Exact inverse of g(x) = x/(1+ramp x^2) on [-(M+1), M+1], written to
  // stay finite at y = 0, plus constant plateaus beyond the edge values.
  std::ostringstream name;
  name << "phi(M=" << M << ",ramp=" << ramp << ")";
  return {name.str(),
          [lo, hi, edge, ramp](double y) {
            if (y >= hi) return edge;
            if (y <= lo) return -edge;
            const double disc = 1.0 - 4.0 * ramp * y * y;
            return 2.0 * y / (1.0 + std::sqrt(std::max(disc, 0.0)));
          },
          nullptr};
}

}  // namespace amulab::transforms
