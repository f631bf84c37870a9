#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace amulab {

// Deterministic random source. All draws go through the explicit
// uint64 -> double mapping below so that a seed reproduces the same
// stream bit-for-bit regardless of standard-library distribution
// internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit mantissa.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  std::complex<double> complex_in_disk() {
    return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
  }

  // Hermitian matrix with entries of order `scale`.
  Eigen::MatrixXcd hermitian(Eigen::Index dim, double scale = 1.0) {
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      m(i, i) = scale * uniform(-1.0, 1.0);
      for (Eigen::Index j = i + 1; j < dim; ++j) {
        const std::complex<double> z = scale * complex_in_disk();
        m(i, j) = z;
        m(j, i) = std::conj(z);
      }
    }
    return m;
  }

  Eigen::MatrixXcd general(Eigen::Index rows, Eigen::Index cols,
                           double scale = 1.0) {
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = scale * complex_in_disk();
    return m;
  }

  // Unit vector, uniform-ish direction.
  Eigen::VectorXcd unit_vector(Eigen::Index dim) {
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex_in_disk();
    const double n = v.norm();
    return n > 0 ? Eigen::VectorXcd(v / n) : unit_vector(dim);
  }

private:
  std::mt19937_64 gen_;
};

}  // namespace amulab
