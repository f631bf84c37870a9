#pragma once

#include <string>
#include <vector>

#include "amulab/numkernel.hpp"
#include "amulab/tuples.hpp"

namespace amulab::models {

using numkernel::ComplexMatrix;
using numkernel::Matrix;
using numkernel::Vector;
using tuples::OperatorTuple;

enum class ModelKind { HermiteXP, AngularMomentum, CommutingDiagonal };

// Parameters that reconstruct a named physical model.
struct ModelDescriptor {
  ModelKind kind = ModelKind::HermiteXP;
  int N = 0;          // hermite truncation size
  double hbar = 0.0;  // hermite / angular
  double j = 0.0;     // angular: half-integer spin
  std::vector<Eigen::VectorXd> points;  // commuting_diagonal joint eigenvalues
  int dim = 0;                          // commuting_diagonal truncation
};

OperatorTuple from_descriptor(const ModelDescriptor& d);

// Position/momentum pair in the oscillator eigenbasis. Ladder matrix
// elements are exact, so the compressed commutator on the leading N-1
// coordinates equals i*hbar*I to machine precision and d = S1^2 + Shbar^2
// has low-lying eigenvalues (2k+1)|hbar|.
OperatorTuple hermite_position_momentum(int N, double hbar);

// T_hbar = S1 + i*Shbar; a scaled ladder operator, annihilation-like for
// hbar > 0 and creation-like for hbar < 0.
ComplexMatrix t_hbar_operator(int N, double hbar);

// L = (1 + T T*)^{-1/2} T. Satisfies 1 - L L* = (1 + T T*)^{-1}.
ComplexMatrix bounded_L(const ComplexMatrix& T);

enum class Rectangularization { None, DropTopRow, DropTopColumn, Auto };

struct IndexReport {
  long index = 0;
  int kernel_dim = 0;
  int cokernel_dim = 0;
  double singular_gap = 0.0;  // smallest kept / largest discarded sigma
  bool conclusive = false;    // singular_gap >= 10
  std::string note;
};

// Numerical Fredholm index by singular value thresholding. On truncated
// band operators the square matrix always balances kernel and cokernel;
// dropping the unfaithful edge row (annihilation-like) or column
// (creation-like) restores the honest finite section. Auto picks the
// side whose edge slice carries less mass.
IndexReport fredholm_index(const ComplexMatrix& T, double svd_threshold_ratio,
                           Rectangularization rect = Rectangularization::Auto);

// (L_x, L_y, L_z) on the irreducible spin-j block, scaled by hbar:
// [L_x, L_y] = i hbar L_z and cyclic, L^2 = j(j+1) hbar^2 * I.
OperatorTuple angular_momentum_block(double j, double hbar);

// Displaced oscillator ground state with <S1> = lambda1, <Shbar> = lambda2;
// per-coordinate dispersion sqrt(|hbar|/2). Fails when the truncated
// tail exceeds the checked budget.
Vector coherent_state(int N, double hbar, double lambda1, double lambda2);

// Diagonal tuple whose joint eigenvalues are exactly the given points,
// padded cyclically to dim. Ground-truth oracle for spectra and AMU.
OperatorTuple commuting_diagonal_model(const std::vector<Eigen::VectorXd>& points,
                                       Eigen::Index dim);

}  // namespace amulab::models
