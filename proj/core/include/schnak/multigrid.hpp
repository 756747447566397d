// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_MULTIGRID_HPP
#define SCHNAK_MULTIGRID_HPP

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "schnak/mesh.hpp"
#include "schnak/sparse.hpp"

namespace schnak
{

enum class MgSmoother
{
  // x += omega D^{-1} (b - A x), identical pre and post sweeps.
  kDampedJacobi,
  // Forward Gauss-Seidel sweeps before the coarse correction and backward sweeps after it.
  kGaussSeidel,
};

struct MgOptions
{
  int cycles = 6;
  MgSmoother smoother = MgSmoother::kGaussSeidel;
  int pre_smooth = 2;
  int post_smooth = 2;
  double omega = 2.0 / 3.0;
  // Coarsening stops once a level has at most this many nodes.
  Index max_coarse = 50;
};

//
// Geometric transfer chain over structured meshes n_0 > n_1 > ... with
// n_{l+1} = ceil(n_l / 2). P[l] interpolates level l+1 values to level l. Built once per
// fine mesh and shared by every hierarchy on that mesh.
//
class MgTransfer
{
public:
  MgTransfer(const MeshP1 &fine, Index max_coarse = MgOptions{}.max_coarse);

  int num_levels() const { return static_cast<int>(sizes_.size()); }
  Index size(int level) const { return sizes_[level]; }
  const std::vector<Eigen::SparseMatrix<double, Eigen::RowMajor, Index>> &interpolation() const
  {
    return P_;
  }

private:
  std::vector<Index> sizes_;
  std::vector<Eigen::SparseMatrix<double, Eigen::RowMajor, Index>> P_;
};

//
// Multigrid hierarchy for a symmetric matrix with Galerkin coarse operators P^T A P, a
// smoother whose post sweeps are the adjoint of its pre sweeps (a symmetric V-cycle), and a dense
// factorization on the coarsest level. Convergence needs A SPD; for an indefinite A with
// nonzero diagonal the cycle is still a fixed symmetric operator. Apply runs a fixed number of V-cycles from a zero
// initial guess, so it is a fixed symmetric linear operator.
//
class MgHierarchy
{
public:
  MgHierarchy(const CsrMatrix &A, std::shared_ptr<const MgTransfer> transfer,
              const MgOptions &options = {});

  int num_levels() const { return static_cast<int>(levels_.size()); }
  Index size() const { return levels_.front().A.rows(); }
  const MgOptions &options() const { return options_; }
  const CsrMatrix &level_matrix(int l) const { return levels_[l].A; }

  void Apply(const Vector &b, Vector &x) const;
  Vector Apply(const Vector &b) const
  {
    Vector x;
    Apply(b, x);
    return x;
  }

private:
  struct Level
  {
    CsrMatrix A;
    Vector inv_diag;
    mutable Vector r, x, b;
  };

  void VCycle(int l) const;
  void Smooth(const Level &lev, int sweeps, bool forward, bool zero_start) const;

  std::shared_ptr<const MgTransfer> transfer_;
  MgOptions options_;
  std::vector<Level> levels_;
  Eigen::FullPivLU<Eigen::MatrixXd> coarse_;
};

// Convenience builder for a single matrix on a mesh.
MgHierarchy MgBuild(const CsrMatrix &A, const MeshP1 &mesh, const MgOptions &options = {});

}  // namespace schnak

#endif  // SCHNAK_MULTIGRID_HPP
