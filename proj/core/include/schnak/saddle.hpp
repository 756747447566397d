// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_SADDLE_HPP
#define SCHNAK_SADDLE_HPP

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "schnak/chebyshev.hpp"
#include "schnak/fem.hpp"
#include "schnak/linear_operator.hpp"
#include "schnak/multigrid.hpp"
#include "schnak/sparse.hpp"
#include "schnak/trajectory.hpp"

namespace schnak
{

//
// 2x2 block of scalar FE matrices acting on [x1; x2]. Every sub-block is symmetric, so the
// transpose swaps the off-diagonal blocks. An empty sub-block (zero rows) is zero.
//
struct Block2
{
  CsrMatrix m11, m12, m21, m22;

  // [y1; y2] (+)= s * X [x1; x2], or X^T with transpose = true.
  void AddMult(const double *x1, const double *x2, double *y1, double *y2, double s = 1.0,
               bool transpose = false) const;
  Eigen::SparseMatrix<double, Eigen::ColMajor, Index> ToEigen(Index n) const;
};

//
// Linearized all-at-once system of one SQP step,
//
//   [ A   B^T ] [ -p ]   [ d ]
//   [ B   -C  ] [  u ] = [ -c ],
//
// for nb time blocks. The first block row holds the linearized state equations and the
// second the adjoint equations. Unknowns are ordered variable-major: the adjoint half
// [p_0..p_{nb-1}, q_0..q_{nb-1}] and the state half [u_0..u_{nb-1}, v_0..v_{nb-1}]. B is
// block upper bidiagonal in time with diagonal blocks G_r (rows u_r, v_r; columns p_r, q_r)
// and super-diagonal blocks E_r coupling u_r to p_{r+1}. A = blkdiag(a1 M, a2 M) and C is
// block diagonal with symmetric 2x2 blocks. d1, d2 are the per-block weights of the
// matched term D = blkdiag(d1_r M, d2_r M) in the Schur approximation.
//
struct SaddleSystem
{
  Scheme scheme = Scheme::kStormerVerlet;
  std::shared_ptr<const P1Space> space;
  Index nx = 0;
  int nb = 0;
  double tau = 0.0;
  double a1 = 0.0, a2 = 0.0;
  std::vector<Block2> G, E;  // E has nb - 1 entries.
  std::vector<Block2> C;     // m21 equals m12.
  std::vector<double> d1, d2;
  // Mass shifts applied to the diagonal blocks of G_r + D_r before building multigrid. They are
  // nonzero only when a nodal bound cannot exclude an indefinite block, which happens for
  // iterates far from the solution.
  std::vector<double> shift1, shift2;
  Vector rhs;

  // Decoupled boundary equations solved after the saddle solve. For Stormer-Verlet,
  // init_block couples (p^0, q^0) to the first half step through
  // M [p^0; q^0] = init_rhs - init_block [p^{1/2}; q^{1/2}]. For backward Euler,
  // init_block [p^0; q^0] = init_rhs + M [p^1; q^1] and
  // final_block [u^N; v^N] = final_rhs + M [u^{N-1}; v^{N-1}].
  Block2 init_block, final_block;
  Vector init_rhs, final_rhs;

  Index size() const { return 4 * nx * nb; }
  Index half() const { return 2 * nx * nb; }
  // Offsets of the four variable families inside the full vector.
  Index p_offset(int r) const { return static_cast<Index>(r) * nx; }
  Index q_offset(int r) const { return (static_cast<Index>(nb) + r) * nx; }
  Index u_offset(int r) const { return half() + static_cast<Index>(r) * nx; }
  Index v_offset(int r) const { return half() + (static_cast<Index>(nb) + r) * nx; }

  void Apply(const Vector &w, Vector &y) const;
  LinearOperator AsOperator() const;

  // Dense assembly of the full matrix (small problems only).
  Eigen::MatrixXd ToDense() const;
  // Dense D in the state-half ordering.
  Eigen::MatrixXd DenseMatched() const;
};

// y = K w for the saddle operator.
void ApplySaddle(const SaddleSystem &sys, const Vector &w, Vector &y);

struct PreconditionerOptions
{
  int chebyshev_iterations = 20;
  MgOptions mg;
};

//
// Block-diagonal preconditioner blkdiag(A_hat, S_hat) with A_hat^{-1} from Chebyshev mass
// solves and S_hat = (B + D) A^{-1} (B + D)^T. S_hat^{-1} runs a backward block substitution
// with B + D, a mass multiply with A, then the transposed forward substitution. Each
// diagonal block G_r + D_r is inverted approximately by one block Gauss-Seidel sweep with
// multigrid on its two scalar blocks (built on the shifted blocks when shift1/shift2 are
// nonzero), and the forward substitution uses the exact transpose of that sweep so the
// preconditioner is symmetric.
//
class MatchedPreconditioner
{
public:
  MatchedPreconditioner(const SaddleSystem &sys, std::shared_ptr<const MgTransfer> transfer,
                        const PreconditionerOptions &options = {});

  void Apply(const Vector &z, Vector &y) const;
  LinearOperator AsOperator() const;

  // A_hat^{-1} on the adjoint half and S_hat^{-1} on the state half.
  void ApplyAInverse(const double *z, double *y) const;
  void ApplySchurInverse(const double *z, double *y) const;

private:
  // [x1; x2] = H_r [b1; b2] (one lower block Gauss-Seidel sweep) or H_r^T.
  void BlockSolve(int r, const double *b1, const double *b2, double *x1, double *x2,
                  bool transpose) const;

  const SaddleSystem &sys_;
  ChebyshevMassSolver mass_solver_;
  std::vector<Block2> X_;  // G_r + D_r
  std::vector<std::unique_ptr<MgHierarchy>> mg11_, mg22_;
};

// Packs [-p; u] of a trajectory into the saddle unknown ordering, skipping boundary steps.
Vector PackSaddle(const SaddleSystem &sys, const Trajectory &traj);

}  // namespace schnak

#endif  // SCHNAK_SADDLE_HPP
