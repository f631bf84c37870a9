#include "amulab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "amulab/parallel.hpp"
#include "amulab/rng.hpp"

namespace amulab::spectrum {

using numkernel::EigDecomposition;
using numkernel::hermitian_eig;
using numkernel::operator_norm;
using numkernel::tolerances;
using transforms::bar_transform;
using transforms::stereographic_forward;
using transforms::stereographic_inverse;

ScalarFunction theta(double center, double eta) {
  if (!(eta > 0)) throw ValidationError("theta: eta > 0 required");
  std::ostringstream name;
  name << "theta(" << center << "," << eta << ")";
  return {name.str(),
          [center, eta](double t) {
            const double d = std::abs(t - center);
            if (d <= 0.75 * eta) return 1.0;
            if (d >= eta) return 0.0;
            return (eta - d) / (0.25 * eta);
          },
          nullptr};
}

namespace {

// Shared machinery for Theta-products: each factor is a bump in one fixed
// Hermitian operator, so we diagonalize every operator once and reduce
// the product by unitary invariance,
//   ||f_1(A_1) ... f_m(A_m)|| = ||D_1 X_1 D_2 X_2 ... D_m||,
// with X_k = V_k^* V_{k+1} precomputed and D_k = diag f_k(Lambda_k).
// Rows/columns where a bump vanishes are dropped; that is an exact
// restriction to the support, not an approximation.
class ProductEvaluator {
public:
  explicit ProductEvaluator(const std::vector<HermitianMatrix>& factors) {
    eig_.reserve(factors.size());
    for (const auto& f : factors) eig_.push_back(hermitian_eig(f));
    cross_.reserve(factors.size() - 1);
    for (std::size_t k = 0; k + 1 < factors.size(); ++k)
      cross_.emplace_back(eig_[k].eigenvectors.adjoint() *
                          eig_[k + 1].eigenvectors);
  }

  double norm(const Eigen::VectorXd& centers, double eta) const {
    const std::size_t m = eig_.size();
    std::vector<std::vector<Eigen::Index>> support(m);
    std::vector<Eigen::VectorXd> values(m);
    for (std::size_t k = 0; k < m; ++k) {
      const ScalarFunction bump = theta(centers(static_cast<Eigen::Index>(k)), eta);
      const auto& lambda = eig_[k].eigenvalues;
      Eigen::VectorXd vals(lambda.size());
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        vals(i) = bump(lambda(i));
        if (vals(i) != 0.0) support[k].push_back(i);
      }
      if (support[k].empty()) return 0.0;
      values[k] = std::move(vals);
    }
    if (m == 1) {
      double top = 0.0;
      for (const Eigen::Index i : support[0])
        top = std::max(top, std::abs(values[0](i)));
      return std::clamp(top, 0.0, 1.0);
    }
    // D_1 X_1 D_2 X_2 ... D_m restricted to the bump supports
    Matrix chain = restrict(cross_[0], support[0], support[1]);
    for (std::size_t r = 0; r < support[0].size(); ++r)
      chain.row(static_cast<Eigen::Index>(r)) *= values[0](support[0][r]);
    for (std::size_t k = 1; k < m; ++k) {
      for (std::size_t c = 0; c < support[k].size(); ++c)
        chain.col(static_cast<Eigen::Index>(c)) *= values[k](support[k][c]);
      if (k + 1 < m)
        chain = chain * restrict(cross_[k], support[k], support[k + 1]);
    }
    const double n = operator_norm(chain);
    return std::clamp(n, 0.0, 1.0);
  }

  // Theta x through matvecs, right-to-left.
  Vector apply(const Eigen::VectorXd& centers, double eta, Vector x) const {
    for (std::size_t k = eig_.size(); k-- > 0;) {
      const ScalarFunction bump = theta(centers(static_cast<Eigen::Index>(k)), eta);
      Vector y = eig_[k].eigenvectors.adjoint() * x;
      for (Eigen::Index i = 0; i < y.size(); ++i)
        y(i) *= bump(eig_[k].eigenvalues(i));
      x = eig_[k].eigenvectors * y;
    }
    return x;
  }

private:
  static Matrix restrict(const Matrix& X, const std::vector<Eigen::Index>& rows,
                         const std::vector<Eigen::Index>& cols) {
    Matrix out(static_cast<Eigen::Index>(rows.size()),
               static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows.size(); ++i)
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            X(rows[i], cols[j]);
    return out;
  }

  std::vector<EigDecomposition> eig_;
  std::vector<Matrix> cross_;
};

std::vector<HermitianMatrix> euclidean_factors(const OperatorTuple& t) {
  return t.ops();
}

// (a, 2 bar h_1, ..., 2 bar h_n) for the spherical test.
std::vector<HermitianMatrix> spherical_factors(const OperatorTuple& t) {
  const HermitianMatrix d = tuples::sum_of_squares(t);
  const ScalarFunction a_fn{"(t-1)/(t+1)",
                            [](double s) { return (s - 1.0) / (s + 1.0); },
                            nullptr};
  std::vector<HermitianMatrix> factors;
  factors.reserve(static_cast<std::size_t>(t.n()) + 1);
  factors.push_back(numkernel::apply_scalar_function(d, a_fn));
  for (auto& bar : bar_transform(t))
    factors.push_back(HermitianMatrix::symmetrized(2.0 * bar.mat()));
  return factors;
}

void check_grid_args(int n, double M, double eta) {
  if (n < 1) throw ValidationError("make_grid: n >= 1 required");
  if (!(M > 0)) throw ValidationError("make_grid: M > 0 required");
  if (!(eta > 0)) throw ValidationError("make_grid: eta > 0 required");
}

}  // namespace

GridSpec make_grid(int n, double M, double eta) {
  check_grid_args(n, M, eta);
  GridSpec grid{n, M, eta, {}};
  const double pitch = eta / std::sqrt(static_cast<double>(n));
  const long K = static_cast<long>(std::floor(M / pitch));
  std::vector<long> idx(static_cast<std::size_t>(n), -K);
  if (K >= 0) {
    for (;;) {
      Eigen::VectorXd p(n);
      for (int i = 0; i < n; ++i)
        p(i) = static_cast<double>(idx[static_cast<std::size_t>(i)]) * pitch;
      if (p.norm() <= M) grid.points.push_back(std::move(p));
      int axis = n - 1;
      while (axis >= 0) {
        if (++idx[static_cast<std::size_t>(axis)] <= K) break;
        idx[static_cast<std::size_t>(axis)] = -K;
        --axis;
      }
      if (axis < 0) break;
    }
  }
  if (grid.points.empty())
    grid.points.emplace_back(Eigen::VectorXd::Zero(n));

  // Density self-check on a fixed sample: the componentwise
  // floor-toward-zero lattice point stays inside the ball and within eta.
  Rng rng(0x9e3779b97f4a7c15ULL);
  for (int s = 0; s < 100; ++s) {
    Eigen::VectorXd x(n);
    do {
      for (int i = 0; i < n; ++i) x(i) = rng.uniform(-M, M);
    } while (x.norm() > M);
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c(i) = std::trunc(x(i) / pitch) * pitch;
    if ((x - c).norm() >= eta || c.norm() > M + 1e-12)
      throw NumericalError("make_grid: density self-check failed");
  }
  return grid;
}

double theta_product_norm(const OperatorTuple& t, const Eigen::VectorXd& xi,
                          double eta) {
  if (xi.size() != t.n())
    throw ValidationError("theta_product_norm: xi dimension mismatch");
  if (!(eta > 0)) throw ValidationError("theta_product_norm: eta > 0 required");
  return ProductEvaluator(euclidean_factors(t)).norm(xi, eta);
}

namespace {

SyntheticSpectrum scan(const OperatorTuple& t, double M, double eta,
                       std::size_t threads, Variant variant) {
  GridSpec grid = make_grid(t.n(), M, eta);
  const std::vector<HermitianMatrix> factors = variant == Variant::Euclidean
                                                   ? euclidean_factors(t)
                                                   : spherical_factors(t);
  const ProductEvaluator evaluator(factors);

  std::vector<double> norms(grid.points.size(), 0.0);
  parallel_for(
      grid.points.size(),
      [&](std::size_t i) {
        if (variant == Variant::Euclidean) {
          norms[i] = evaluator.norm(grid.points[i], eta);
        } else {
          const auto sp = stereographic_forward(grid.points[i]);
          norms[i] = evaluator.norm(sp.coords(), eta);
        }
      },
      threads);

  SyntheticSpectrum out;
  out.variant = variant;
  out.radius = eta;
  out.source_label = t.label();
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    if (norms[i] >= 1.0 - eta) {
      AcceptedCenter ac;
      ac.norm = norms[i];
      if (variant == Variant::Euclidean) {
        ac.center = grid.points[i];
      } else {
        const auto sp = stereographic_forward(grid.points[i]);
        ac.sphere_center = sp.coords();
        ac.center = stereographic_inverse(sp);
      }
      out.accepted.push_back(std::move(ac));
    }
  }
  out.grid = std::move(grid);
  return out;
}

}  // namespace

SyntheticSpectrum euclidean_synthetic_spectrum(const OperatorTuple& t, double M,
                                               double eta, std::size_t threads) {
  return scan(t, M, eta, threads, Variant::Euclidean);
}

SyntheticSpectrum spherical_synthetic_spectrum(const OperatorTuple& t, double M,
                                               double eta, std::size_t threads) {
  return scan(t, M, eta, threads, Variant::Spherical);
}

WitnessTestResult witness_test(const OperatorTuple& t, const Eigen::VectorXd& xi,
                               double eta, const Vector& x) {
  if (xi.size() != t.n())
    throw ValidationError("witness_test: xi dimension mismatch");
  if (x.size() != t.dim())
    throw ValidationError("witness_test: vector dimension mismatch");
  if (std::abs(x.norm() - 1.0) > tolerances().eig_tol)
    throw ValidationError("witness_test: x must be a unit vector");
  const ProductEvaluator evaluator(euclidean_factors(t));
  const Vector tx = evaluator.apply(xi, eta, x);
  const double value = std::real(x.dot(tx));
  return {value > 1.0 - eta, value};
}

OrderSensitivity theta_order_sensitivity(const OperatorTuple& t,
                                         const Eigen::VectorXd& xi, double eta) {
  if (xi.size() != t.n())
    throw ValidationError("theta_order_sensitivity: xi dimension mismatch");
  const int n = t.n();
  std::vector<Matrix> factors(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    factors[static_cast<std::size_t>(i)] =
        numkernel::apply_scalar_function(t.op(i), theta(xi(i), eta)).mat();

  auto product_norm = [&](const std::vector<int>& order) {
    Matrix p = factors[static_cast<std::size_t>(order[0])];
    for (std::size_t k = 1; k < order.size(); ++k)
      p = p * factors[static_cast<std::size_t>(order[k])];
    return std::clamp(operator_norm(p), 0.0, 1.0);
  };

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  OrderSensitivity result;
  result.ascending = product_norm(order);
  result.min_over_permutations = result.ascending;
  result.max_over_permutations = result.ascending;
  // ascending, descending and all rotations; enough to expose order effects
  std::vector<std::vector<int>> variants;
  std::vector<int> rev(order.rbegin(), order.rend());
  variants.push_back(rev);
  for (int r = 1; r < n; ++r) {
    std::vector<int> rot = order;
    std::rotate(rot.begin(), rot.begin() + r, rot.end());
    variants.push_back(std::move(rot));
  }
  for (const auto& v : variants) {
    const double norm = product_norm(v);
    result.min_over_permutations = std::min(result.min_over_permutations, norm);
    result.max_over_permutations = std::max(result.max_over_permutations, norm);
  }
  return result;
}

}  // namespace amulab::spectrum
