#include <doctest.h>

#include <cmath>

#include "amulab/models.hpp"
#include "amulab/rng.hpp"
#include "amulab/spectrum.hpp"
#include "amulab/transforms.hpp"
#include "amulab/tuples.hpp"
#include "oracles.hpp"

using namespace amulab;
using namespace amulab::numkernel;
using namespace amulab::spectrum;
using tuples::OperatorTuple;
using tuples::random_almost_commuting;

namespace {

std::vector<Matrix> raw_ops(const OperatorTuple& t) {
  std::vector<Matrix> out;
  for (const auto& op : t.ops()) out.push_back(op.mat());
  return out;
}

// accepted set predicted straight from the diagonal joint eigenvalues
std::vector<Eigen::VectorXd> diagonal_oracle(const OperatorTuple& t,
                                             const GridSpec& grid, double eta) {
  std::vector<Eigen::VectorXd> accepted;
  for (const auto& xi : grid.points) {
    double best = 0.0;
    for (Eigen::Index k = 0; k < t.dim(); ++k) {
      double prod = 1.0;
      for (int i = 0; i < t.n(); ++i)
        prod *= oracles::bump(xi(i), eta, t.op(i).mat()(k, k).real());
      best = std::max(best, prod);
    }
    if (best >= 1.0 - eta) accepted.push_back(xi);
  }
  return accepted;
}

}  // namespace

TEST_CASE("theta plateau, ramp and support") {
  const double eta = 0.4;
  const auto f = theta(0.0, eta);
  CHECK(f(0.0) == 1.0);
  CHECK(f(0.75 * eta) == 1.0);
  CHECK(f(7.0 * eta / 8.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f(eta) == 0.0);
  CHECK(f(-eta) == 0.0);
  for (double t = -1.0; t <= 1.0; t += 0.01) {
    CHECK(f(t) >= 0.0);
    CHECK(f(t) <= 1.0);
  }
  CHECK_THROWS_AS(theta(0.0, 0.0), ValidationError);
}

TEST_CASE("theta_product_norm on commuting tuples") {
  Eigen::VectorXd p1(2), p2(2);
  p1 << 0.5, -0.25;
  p2 << -1.0, 1.0;
  const auto t = models::commuting_diagonal_model({p1, p2}, 4);
  CHECK(theta_product_norm(t, p1, 0.3) == doctest::Approx(1.0));
  Eigen::VectorXd far(2);
  far << 3.0, 3.0;
  CHECK(theta_product_norm(t, far, 0.3) == 0.0);
}

TEST_CASE("theta_product_norm matches the dense oracle on random tuples") {
  Rng rng(61);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto t = random_almost_commuting(3, 20, 0.05, seed);
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd xi(3);
      for (int i = 0; i < 3; ++i) xi(i) = rng.uniform(-1.2, 1.2);
      const double expected = oracles::dense_theta_norm(raw_ops(t), xi, 0.35);
      CHECK(theta_product_norm(t, xi, 0.35) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("make_grid produces the documented lattices") {
  SUBCASE("one dimension, pitch eta") {
    const auto grid = make_grid(1, 1.5, 1.0);
    REQUIRE(grid.points.size() == 3);
    CHECK(grid.points[0](0) == doctest::Approx(-1.0));
    CHECK(grid.points[1](0) == doctest::Approx(0.0));
    CHECK(grid.points[2](0) == doctest::Approx(1.0));
  }
  SUBCASE("degenerate density collapses to the origin") {
    const auto grid = make_grid(2, 1.2, 2.5);  // eta >= 2M
    REQUIRE(grid.points.size() == 1);
    CHECK(grid.points[0].norm() == 0.0);
  }
  SUBCASE("all points stay in the ball, deterministically ordered") {
    const auto grid = make_grid(3, 1.4, 0.45);
    const auto again = make_grid(3, 1.4, 0.45);
    REQUIRE(grid.points.size() == again.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      CHECK(grid.points[i].norm() <= 1.4);
      CHECK((grid.points[i] - again.points[i]).norm() == 0.0);
    }
  }
  SUBCASE("parameter validation") {
    CHECK_THROWS_AS(make_grid(0, 1.5, 0.2), ValidationError);
    CHECK_THROWS_AS(make_grid(2, -1.0, 0.2), ValidationError);
    CHECK_THROWS_AS(make_grid(2, 1.5, 0.0), ValidationError);
  }
}

TEST_CASE("euclidean spectrum equals the joint-eigenvalue oracle") {
  Rng rng(67);
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const double M = 1.2 + 0.3 * (seed % 3);
    const double eta = 0.2 + 0.05 * (seed % 4);
    std::vector<Eigen::VectorXd> points;
    for (int p = 0; p < 3; ++p) {
      Eigen::VectorXd pt(n);
      for (int i = 0; i < n; ++i) pt(i) = rng.uniform(-0.6 * M, 0.6 * M);
      points.push_back(pt);
    }
    const auto t = models::commuting_diagonal_model(points, 6);
    const auto spec = euclidean_synthetic_spectrum(t, M, eta);
    const auto expected = diagonal_oracle(t, spec.grid, eta);
    REQUIRE(spec.accepted.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
      CHECK((spec.accepted[i].center - expected[i]).norm() == 0.0);
    CHECK(spec.radius == eta);
    for (const auto& ac : spec.accepted) CHECK(ac.norm >= 1.0 - eta);
  }
}

TEST_CASE("exactly commuting generator output matches the oracle too") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto t = random_almost_commuting(2, 8, 0.0, seed);
    const auto spec = euclidean_synthetic_spectrum(t, 1.3, 0.25);
    const auto expected = diagonal_oracle(t, spec.grid, 0.25);
    REQUIRE(spec.accepted.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
      CHECK((spec.accepted[i].center - expected[i]).norm() == 0.0);
  }
}

TEST_CASE("euclidean spectrum of the position/momentum pair is nonempty") {
  const auto t = models::hermite_position_momentum(128, 0.01);
  const auto spec = euclidean_synthetic_spectrum(t, 2.0, 0.2);
  REQUIRE_FALSE(spec.accepted.empty());
  double best = 1e9;
  for (const auto& ac : spec.accepted) best = std::min(best, ac.center.norm());
  CHECK(best <= 0.2);  // a center within eta of the phase-space origin
}

TEST_CASE("spectrum is empty once the tuple outruns the ball") {
  Eigen::VectorXd p(2);
  p << 40.0, 40.0;  // d^{1/2} far beyond M + eta
  const auto t = models::commuting_diagonal_model({p}, 4);
  const auto spec = euclidean_synthetic_spectrum(t, 1.5, 0.3);
  CHECK(spec.accepted.empty());
}

TEST_CASE("spherical spectrum matches a joint-diagonalization oracle") {
  Eigen::VectorXd p1(2), p2(2);
  p1 << 0.3, -0.2;
  p2 << -0.5, 0.4;
  const auto t = models::commuting_diagonal_model({p1, p2}, 4);
  const double M = 1.3, eta = 0.25;
  const auto spec = spherical_synthetic_spectrum(t, M, eta);

  // oracle: transformed joint eigenvalues sit at Phi(p_k) exactly
  const auto grid = make_grid(2, M, eta);
  std::vector<Eigen::VectorXd> expected;
  for (const auto& xi : grid.points) {
    const auto sp = transforms::stereographic_forward(xi);
    double best = 0.0;
    for (const auto& p : {p1, p2}) {
      const auto jp = transforms::stereographic_forward(p);
      double prod = 1.0;
      for (int c = 0; c < 3; ++c)
        prod *= oracles::bump(sp.coords()(c), eta, jp.coords()(c));
      best = std::max(best, prod);
    }
    if (best >= 1.0 - eta) expected.push_back(xi);
  }
  REQUIRE(spec.accepted.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK((spec.accepted[i].center - expected[i]).norm() <= 1e-12);
    CHECK(spec.accepted[i].sphere_center.size() == 3);
    CHECK(std::abs(spec.accepted[i].sphere_center.squaredNorm() - 1.0) < 1e-12);
  }
}

TEST_CASE("spherical spectrum of the position/momentum pair is nonempty") {
  const auto t = models::hermite_position_momentum(128, 0.005);
  const auto spec = spherical_synthetic_spectrum(t, 1.25, 0.25);
  CHECK_FALSE(spec.accepted.empty());
}

TEST_CASE("accepted euclidean centers map close to accepted spherical ones") {
  // pushed through the forward map, euclidean centers land within the
  // gamma = max{delta, G_M(delta) + delta_1} reach of spherical centers
  const auto t = models::hermite_position_momentum(128, 0.005);
  const double M = 1.25, delta = 0.2;
  const double g = transforms::modulus_G(M, delta);
  const double gamma = std::max(delta, g + std::min(delta / 4, g / 4));
  const auto left = euclidean_synthetic_spectrum(t, M, delta);
  const auto right = spherical_synthetic_spectrum(t, M, gamma);
  REQUIRE_FALSE(left.accepted.empty());
  REQUIRE_FALSE(right.accepted.empty());
  for (const auto& ac : left.accepted) {
    const auto fwd = transforms::stereographic_forward(ac.center);
    double best = 1e9;
    for (const auto& rc : right.accepted)
      best = std::min(best, (fwd.coords() - rc.sphere_center).norm());
    CHECK(best <= gamma);
  }
}

TEST_CASE("witness_test certifies membership from one vector") {
  Eigen::VectorXd p1(2), p2(2);
  p1 << 0.5, -0.25;
  p2 << -1.0, 1.0;
  const auto t = models::commuting_diagonal_model({p1, p2}, 4);
  Vector joint = Vector::Zero(4);
  joint(0) = 1.0;  // eigenvector carrying p1
  const auto hit = witness_test(t, p1, 0.3, joint);
  CHECK(hit.passes);
  CHECK(hit.value == doctest::Approx(1.0));

  // soundness: a passing witness lower-bounds the product norm
  CHECK(theta_product_norm(t, p1, 0.3) >= hit.value - 1e-10);

  Eigen::VectorXd far(2);
  far << 3.0, -3.0;
  const auto miss = witness_test(t, far, 0.3, joint);
  CHECK_FALSE(miss.passes);
  CHECK(miss.value == doctest::Approx(0.0));

  Vector not_unit = Vector::Zero(4);
  not_unit(0) = 0.5;
  CHECK_THROWS_AS(witness_test(t, p1, 0.3, not_unit), ValidationError);
}

TEST_CASE("hermite ground state passes the witness test at the origin") {
  const double hbar = 0.01;
  const auto t = models::hermite_position_momentum(128, hbar);
  Vector ground = Vector::Zero(128);
  ground(0) = 1.0;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);
  const auto result = witness_test(t, origin, 0.2, ground);
  CHECK(result.passes);
  CHECK(result.value > 0.9);  // Gaussian dispersion sqrt(hbar/2) << plateau
}

TEST_CASE("acceptance is monotone along nested dyadic grids") {
  // centers shared by the eta and 2*eta lattices stay accepted as the
  // resolution coarsens
  auto run = [](const OperatorTuple& t, double M, double eta) {
    const auto fine = euclidean_synthetic_spectrum(t, M, eta);
    const auto coarse = euclidean_synthetic_spectrum(t, M, 2 * eta);
    const double coarse_pitch = 2 * eta / std::sqrt(double(t.n()));
    for (const auto& ac : fine.accepted) {
      bool on_coarse = true;
      for (Eigen::Index i = 0; i < ac.center.size(); ++i) {
        const double q = ac.center(i) / coarse_pitch;
        if (std::abs(q - std::round(q)) > 1e-9) on_coarse = false;
      }
      if (!on_coarse) continue;
      bool found = false;
      for (const auto& cc : coarse.accepted)
        if ((cc.center - ac.center).norm() <= 1e-12) found = true;
      CHECK(found);
    }
  };
  Eigen::VectorXd p1(2), p2(2);
  p1 << 0.4, 0.1;
  p2 << -0.3, -0.6;
  run(models::commuting_diagonal_model({p1, p2}, 4), 1.4, 0.2);
  run(random_almost_commuting(2, 16, 0.01, 71), 1.4, 0.2);
}

TEST_CASE("thread count never changes a spectrum") {
  const auto t = random_almost_commuting(2, 24, 0.05, 91);
  const auto one = euclidean_synthetic_spectrum(t, 1.4, 0.25, 1);
  const auto four = euclidean_synthetic_spectrum(t, 1.4, 0.25, 4);
  REQUIRE(one.accepted.size() == four.accepted.size());
  for (std::size_t i = 0; i < one.accepted.size(); ++i) {
    CHECK((one.accepted[i].center - four.accepted[i].center).norm() == 0.0);
    CHECK(one.accepted[i].norm == four.accepted[i].norm);
  }
}

TEST_CASE("factor order sensitivity stays a diagnostic") {
  const auto t = random_almost_commuting(3, 16, 0.05, 81);
  Eigen::VectorXd xi(3);
  xi << 0.2, -0.1, 0.4;
  const auto sens = theta_order_sensitivity(t, xi, 0.4);
  CHECK(sens.min_over_permutations <= sens.ascending + 1e-12);
  CHECK(sens.ascending <= sens.max_over_permutations + 1e-12);
  CHECK(sens.ascending ==
        doctest::Approx(theta_product_norm(t, xi, 0.4)).epsilon(1e-10));

  // commuting factors are order-free
  Eigen::VectorXd p(2);
  p << 0.25, -0.5;
  const auto diag = models::commuting_diagonal_model({p}, 3);
  const auto flat = theta_order_sensitivity(diag, p, 0.3);
  CHECK(flat.max_over_permutations ==
        doctest::Approx(flat.min_over_permutations).epsilon(1e-12));
}
