// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/multigrid.hpp"

#include <cmath>
#include <string>

#include "schnak/errors.hpp"

namespace schnak
{

MgTransfer::MgTransfer(const MeshP1 &fine, Index max_coarse)
{
  if (max_coarse < 1)
  {
    throw InvalidArgument("multigrid: max_coarse must be >= 1");
  }
  MeshP1 current = fine;
  sizes_.push_back(current.num_nodes());
  while (current.num_nodes() > max_coarse && current.n() > 1)
  {
    MeshP1 coarse((current.n() + 1) / 2);
    P_.push_back(InterpolationMatrix(coarse, current).ToEigen());
    sizes_.push_back(coarse.num_nodes());
    current = coarse;
  }
}

MgHierarchy::MgHierarchy(const CsrMatrix &A, std::shared_ptr<const MgTransfer> transfer,
                         const MgOptions &options)
  : transfer_(std::move(transfer)), options_(options)
{
  if (!transfer_ || A.rows() != transfer_->size(0) || A.cols() != A.rows())
  {
    throw InvalidArgument("multigrid: matrix does not match the transfer chain");
  }
  if (options.cycles < 1 || options.pre_smooth < 0 || options.post_smooth != options.pre_smooth)
  {
    throw InvalidArgument("multigrid: need cycles >= 1 and equal pre/post smoothing");
  }
  const int nl = transfer_->num_levels();
  levels_.resize(nl);
  levels_[0].A = A;
  for (int l = 0; l < nl; ++l)
  {
    Level &lev = levels_[l];
    if (l > 0)
    {
      const auto &P = transfer_->interpolation()[l - 1];
      const auto Af = levels_[l - 1].A.ToEigen();
      Eigen::SparseMatrix<double, Eigen::RowMajor, Index> AP = Af * P;
      Eigen::SparseMatrix<double, Eigen::RowMajor, Index> Ac = P.transpose() * AP;
      lev.A = CsrMatrix::FromEigen(Ac);
    }
    const Vector d = lev.A.Diagonal();
    if (!(d.cwiseAbs().minCoeff() > 0.0) || !d.allFinite())
    {
      throw SolverError("multigrid: zero diagonal on level " + std::to_string(l));
    }
    lev.inv_diag = d.cwiseInverse();
    const Index n = lev.A.rows();
    lev.r.resize(n);
    lev.x.resize(n);
    lev.b.resize(n);
  }
  const Eigen::MatrixXd Ad = levels_.back().A.ToDense();
  coarse_.setThreshold(1e-13);
  coarse_.compute(Ad);
  if (!coarse_.isInvertible())
  {
    throw SolverError("multigrid: singular coarse matrix");
  }
}

void MgHierarchy::Smooth(const Level &lev, int sweeps, bool forward, bool zero_start) const
{
  if (zero_start)
  {
    lev.x.setZero();
  }
  if (options_.smoother == MgSmoother::kDampedJacobi)
  {
    for (int s = 0; s < sweeps; ++s)
    {
      lev.A.Mult(lev.x.data(), lev.r.data());
      lev.x += options_.omega * lev.inv_diag.cwiseProduct(lev.b - lev.r);
    }
    return;
  }
  const auto &pat = lev.A.pattern();
  const auto &vals = lev.A.values();
  const Index n = pat.rows;
  for (int s = 0; s < sweeps; ++s)
  {
    for (Index k = 0; k < n; ++k)
    {
      const Index i = forward ? k : n - 1 - k;
      double sum = lev.b[i];
      for (Index p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p)
      {
        sum -= vals[p] * lev.x[pat.col_idx[p]];
      }
      lev.x[i] += sum * lev.inv_diag[i];
    }
  }
}

// Solves levels_[l].A x = b approximately, starting from x = 0.
void MgHierarchy::VCycle(int l) const
{
  const Level &lev = levels_[l];
  if (l + 1 == num_levels())
  {
    lev.x = coarse_.solve(lev.b);
    return;
  }
  Smooth(lev, options_.pre_smooth, true, true);

  lev.A.Mult(lev.x.data(), lev.r.data());
  lev.r = lev.b - lev.r;
  const auto &P = transfer_->interpolation()[l];
  const Level &next = levels_[l + 1];
  next.b = P.transpose() * lev.r;
  VCycle(l + 1);
  lev.x += P * next.x;

  Smooth(lev, options_.post_smooth, false, options_.pre_smooth == 0);
}

void MgHierarchy::Apply(const Vector &b, Vector &x) const
{
  const Level &top = levels_.front();
  if (b.size() != top.A.rows())
  {
    throw InvalidArgument("multigrid: vector length mismatch");
  }
  Vector sol = Vector::Zero(b.size());
  Vector res = b;
  for (int c = 0; c < options_.cycles; ++c)
  {
    if (c > 0)
    {
      top.A.Mult(sol.data(), res.data());
      res = b - res;
    }
    top.b = res;
    VCycle(0);
    sol += top.x;
  }
  x = std::move(sol);
}

MgHierarchy MgBuild(const CsrMatrix &A, const MeshP1 &mesh, const MgOptions &options)
{
  return MgHierarchy(A, std::make_shared<MgTransfer>(mesh, options.max_coarse), options);
}

}  // namespace schnak
