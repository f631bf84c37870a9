#include <doctest.h>

#include "amulab/models.hpp"
#include "amulab/numkernel.hpp"
#include "amulab/rng.hpp"
#include "amulab/tuples.hpp"

using namespace amulab;
using namespace amulab::numkernel;
using namespace amulab::tuples;

namespace {

OperatorTuple pauli_xy() {
  Matrix sx = Matrix::Zero(2, 2), sy = Matrix::Zero(2, 2);
  sx(0, 1) = 1.0;
  sx(1, 0) = 1.0;
  sy(0, 1) = Complex(0.0, -1.0);
  sy(1, 0) = Complex(0.0, 1.0);
  return OperatorTuple({HermitianMatrix(sx), HermitianMatrix(sy)}, "pauli");
}

}  // namespace

TEST_CASE("commutator of a commuting diagonal pair vanishes") {
  Eigen::VectorXd p1(2), p2(2);
  p1 << 0.5, -1.0;
  p2 << -0.25, 0.75;
  const auto t = models::commuting_diagonal_model({p1, p2}, 4);
  CHECK(operator_norm(commutator(t, 0, 1)) == 0.0);
}

TEST_CASE("commutator of the Pauli pair is 2i sigma_z") {
  const auto t = pauli_xy();
  Matrix expected = Matrix::Zero(2, 2);  // 2i*sigma_z, by hand
  expected(0, 0) = Complex(0.0, 2.0);
  expected(1, 1) = Complex(0.0, -2.0);
  CHECK(operator_norm(Matrix(commutator(t, 0, 1).mat() - expected)) < 1e-14);
}

TEST_CASE("commutator is anti-Hermitian and antisymmetric") {
  const auto t = random_almost_commuting(3, 12, 0.3, 5);
  for (int i = 0; i < 3; ++i) {
    CHECK(operator_norm(commutator(t, i, i)) < 1e-14);
    for (int j = 0; j < 3; ++j) {
      const Matrix c = commutator(t, i, j).mat();
      CHECK(operator_norm(Matrix(c + c.adjoint())) < 1e-12);
      CHECK(operator_norm(Matrix(c + commutator(t, j, i).mat())) < 1e-14);
    }
  }
  CHECK_THROWS_AS(commutator(t, 0, 3), ValidationError);
}

TEST_CASE("hermite pair has interior commutator i*hbar*I") {
  const double hbar = 0.01;
  const auto t = models::hermite_position_momentum(64, hbar);
  REQUIRE(t.interior_dim());
  const Eigen::Index d = *t.interior_dim();
  CHECK(d == 63);
  const Matrix c = commutator(t, 0, 1).mat().topLeftCorner(d, d);
  const Matrix expected = Complex(0.0, hbar) * Matrix::Identity(d, d);
  CHECK(operator_norm(Matrix(c - expected)) < 1e-12);
}

TEST_CASE("commutator_report on commuting and near-commuting tuples") {
  Eigen::VectorXd p(3);
  p << 0.1, 0.2, 0.3;
  const auto diag = models::commuting_diagonal_model({p}, 4);
  const auto zero_report = commutator_report(diag);
  CHECK(zero_report.max_delta == 0.0);
  CHECK(zero_report.pairwise_norms.cwiseAbs().maxCoeff() == 0.0);

  const auto t = random_almost_commuting(3, 16, 0.01, 11);
  const auto report = commutator_report(t);
  CHECK(report.max_delta <= 0.01);
  CHECK(report.max_delta > 0.0);
  CHECK(report.pairwise_norms.diagonal().cwiseAbs().maxCoeff() == 0.0);
  CHECK((report.pairwise_norms - report.pairwise_norms.transpose())
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(report.max_delta == report.pairwise_norms.maxCoeff());
  CHECK_FALSE(report.restricted_to_interior);
}

TEST_CASE("commutator_report on the spin-1 block at hbar = 0.1") {
  // ||[L_x, L_y]|| = hbar * ||L_z|| = 0.1 * 0.1 = 0.01
  const auto t = models::angular_momentum_block(1.0, 0.1);
  const auto report = commutator_report(t);
  CHECK(report.pairwise_norms(0, 1) == doctest::Approx(0.01).epsilon(1e-12));
  const auto interior = commutator_report(t, true);
  CHECK(interior.restricted_to_interior);
  CHECK(interior.max_delta == doctest::Approx(report.max_delta));
}

TEST_CASE("random_almost_commuting honors its contracts") {
  SUBCASE("delta = 0 gives an exactly commuting diagonal tuple") {
    const auto t = random_almost_commuting(3, 8, 0.0, 42);
    CHECK(commutator_report(t).max_delta == 0.0);
    for (const auto& op : t.ops()) {
      Matrix off = op.mat();
      off.diagonal().setZero();
      CHECK(off.cwiseAbs().maxCoeff() == 0.0);
    }
  }
  SUBCASE("commutator budget is met and nearly saturated") {
    const auto t = random_almost_commuting(2, 16, 0.05, 7);
    const double delta = commutator_report(t).max_delta;
    CHECK(delta <= 0.05);
    CHECK(delta > 0.8 * 0.05);  // calibration target, deterministic in seed
  }
  SUBCASE("operators stay bounded by 2") {
    const auto t = random_almost_commuting(4, 12, 1.0, 9);
    for (const auto& op : t.ops()) CHECK(operator_norm(op.mat()) <= 2.0 + 1e-12);
  }
  SUBCASE("same seed reproduces bit-identical tuples") {
    const auto a = random_almost_commuting(3, 10, 0.02, 123);
    const auto b = random_almost_commuting(3, 10, 0.02, 123);
    for (int i = 0; i < 3; ++i)
      CHECK((a.op(i).mat() - b.op(i).mat()).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("negative delta is rejected") {
    CHECK_THROWS_AS(random_almost_commuting(2, 8, -0.1, 1), ValidationError);
  }
}

TEST_CASE("sum_of_squares basics") {
  Matrix h(2, 2);
  h << 1, 0, 0, -2;
  const OperatorTuple single({HermitianMatrix(h)}, "single");
  const Matrix d = sum_of_squares(single).mat();
  CHECK(d(0, 0).real() == doctest::Approx(1.0));
  CHECK(d(1, 1).real() == doctest::Approx(4.0));

  const Matrix d_pauli = sum_of_squares(pauli_xy()).mat();
  CHECK(operator_norm(Matrix(d_pauli - 2.0 * Matrix::Identity(2, 2))) < 1e-14);
}

TEST_CASE("sum_of_squares of the hermite pair has oscillator spectrum") {
  const double hbar = 0.01;
  const auto t = models::hermite_position_momentum(128, hbar);
  const auto eig = hermitian_eig(sum_of_squares(t));
  for (int k = 0; k < 10; ++k) {
    const double expected = (2.0 * k + 1.0) * hbar;
    CHECK(std::abs(eig.eigenvalues(k) - expected) <= 1e-8 * expected);
  }
  // the first quarter of the truncation stays within 1e-6 relative
  for (int k = 10; k < 32; ++k) {
    const double expected = (2.0 * k + 1.0) * hbar;
    CHECK(std::abs(eig.eigenvalues(k) - expected) <= 1e-6 * expected);
  }
}

TEST_CASE("sum_of_squares is PSD for random tuples") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto t = random_almost_commuting(3, 12, 0.5, seed);
    const auto d = sum_of_squares(t);
    const auto eig = hermitian_eig(d);
    CHECK(eig.eigenvalues.minCoeff() >=
          -tolerances().eig_tol * (1.0 + operator_norm(d.mat())));
  }
}

TEST_CASE("tuple construction validates shapes") {
  Matrix a = Matrix::Identity(2, 2), b = Matrix::Identity(3, 3);
  CHECK_THROWS_AS(OperatorTuple({HermitianMatrix(a), HermitianMatrix(b)}, "x"),
                  ValidationError);
  CHECK_THROWS_AS(OperatorTuple({HermitianMatrix(a)}, "x", 5), ValidationError);
  CHECK_THROWS_AS(OperatorTuple({}, "empty"), ValidationError);
}
