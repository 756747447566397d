// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/saddle.hpp"

#include "schnak/errors.hpp"

namespace schnak
{

namespace
{

using ConstMap = Eigen::Map<const Vector>;
using MutMap = Eigen::Map<Vector>;

void AddIf(const CsrMatrix &A, const double *x, double *y, double s)
{
  if (A.rows() > 0)
  {
    A.AddMult(x, y, s);
  }
}

void AddBlockToDense(Eigen::MatrixXd &K, Index r0, Index c0, const CsrMatrix &A, double s)
{
  if (A.rows() == 0)
  {
    return;
  }
  const auto &pat = A.pattern();
  for (Index i = 0; i < pat.rows; ++i)
  {
    for (Index k = pat.row_ptr[i]; k < pat.row_ptr[i + 1]; ++k)
    {
      K(r0 + i, c0 + pat.col_idx[k]) += s * A.values()[k];
    }
  }
}

}  // namespace

void Block2::AddMult(const double *x1, const double *x2, double *y1, double *y2, double s,
                     bool transpose) const
{
  const CsrMatrix &b12 = transpose ? m21 : m12;
  const CsrMatrix &b21 = transpose ? m12 : m21;
  AddIf(m11, x1, y1, s);
  AddIf(b12, x2, y1, s);
  AddIf(b21, x1, y2, s);
  AddIf(m22, x2, y2, s);
}

Eigen::SparseMatrix<double, Eigen::ColMajor, Index> Block2::ToEigen(Index n) const
{
  std::vector<Eigen::Triplet<double, Index>> trip;
  auto add = [&](const CsrMatrix &A, Index r0, Index c0)
  {
    if (A.rows() == 0)
    {
      return;
    }
    const auto &pat = A.pattern();
    for (Index i = 0; i < pat.rows; ++i)
    {
      for (Index k = pat.row_ptr[i]; k < pat.row_ptr[i + 1]; ++k)
      {
        trip.emplace_back(r0 + i, c0 + pat.col_idx[k], A.values()[k]);
      }
    }
  };
  add(m11, 0, 0);
  add(m12, 0, n);
  add(m21, n, 0);
  add(m22, n, n);
  Eigen::SparseMatrix<double, Eigen::ColMajor, Index> S(2 * n, 2 * n);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

void SaddleSystem::Apply(const Vector &w, Vector &y) const
{
  if (w.size() != size())
  {
    throw InvalidArgument("saddle apply: dimension mismatch");
  }
  y.setZero(size());
  const CsrMatrix &M = space->mass();
  const double *x = w.data();
  double *o = y.data();
  for (int r = 0; r < nb; ++r)
  {
    // State rows: A (-p) + B^T u.
    M.AddMult(x + p_offset(r), o + p_offset(r), a1);
    M.AddMult(x + q_offset(r), o + q_offset(r), a2);
    G[r].AddMult(x + u_offset(r), x + v_offset(r), o + p_offset(r), o + q_offset(r), 1.0, true);
    if (r > 0)
    {
      E[r - 1].AddMult(x + u_offset(r - 1), x + v_offset(r - 1), o + p_offset(r),
                       o + q_offset(r), 1.0, true);
    }
    // Adjoint rows: B (-p) - C u.
    G[r].AddMult(x + p_offset(r), x + q_offset(r), o + u_offset(r), o + v_offset(r));
    if (r + 1 < nb)
    {
      E[r].AddMult(x + p_offset(r + 1), x + q_offset(r + 1), o + u_offset(r), o + v_offset(r));
    }
    C[r].AddMult(x + u_offset(r), x + v_offset(r), o + u_offset(r), o + v_offset(r), -1.0);
  }
}

void ApplySaddle(const SaddleSystem &sys, const Vector &w, Vector &y) { sys.Apply(w, y); }

LinearOperator SaddleSystem::AsOperator() const
{
  return LinearOperator(size(), [this](const Vector &x, Vector &y) { Apply(x, y); });
}

Eigen::MatrixXd SaddleSystem::ToDense() const
{
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(size(), size());
  const CsrMatrix &M = space->mass();
  auto add_block2 = [&](const Block2 &X, Index r1, Index r2, Index c1, Index c2, double s)
  {
    AddBlockToDense(K, r1, c1, X.m11, s);
    AddBlockToDense(K, r1, c2, X.m12, s);
    AddBlockToDense(K, r2, c1, X.m21, s);
    AddBlockToDense(K, r2, c2, X.m22, s);
  };
  for (int r = 0; r < nb; ++r)
  {
    AddBlockToDense(K, p_offset(r), p_offset(r), M, a1);
    AddBlockToDense(K, q_offset(r), q_offset(r), M, a2);
    add_block2(G[r], u_offset(r), v_offset(r), p_offset(r), q_offset(r), 1.0);
    if (r + 1 < nb)
    {
      add_block2(E[r], u_offset(r), v_offset(r), p_offset(r + 1), q_offset(r + 1), 1.0);
    }
    add_block2(C[r], u_offset(r), v_offset(r), u_offset(r), v_offset(r), -1.0);
  }
  // The state rows couple through the transpose of the adjoint-row block.
  const Index h = half();
  K.topRightCorner(h, h) = K.bottomLeftCorner(h, h).transpose();
  return K;
}

Eigen::MatrixXd SaddleSystem::DenseMatched() const
{
  const Index h = half();
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(h, h);
  const CsrMatrix &M = space->mass();
  for (int r = 0; r < nb; ++r)
  {
    AddBlockToDense(D, p_offset(r), p_offset(r), M, d1[r]);
    AddBlockToDense(D, q_offset(r), q_offset(r), M, d2[r]);
  }
  return D;
}

MatchedPreconditioner::MatchedPreconditioner(const SaddleSystem &sys,
                                             std::shared_ptr<const MgTransfer> transfer,
                                             const PreconditionerOptions &options)
  : sys_(sys), mass_solver_(sys.space->mass(), options.chebyshev_iterations)
{
  if (static_cast<int>(sys.G.size()) != sys.nb || static_cast<int>(sys.d1.size()) != sys.nb ||
      static_cast<int>(sys.d2.size()) != sys.nb)
  {
    throw InvalidArgument("matched preconditioner: inconsistent block counts");
  }
  const CsrMatrix &M = sys.space->mass();
  X_.resize(sys.nb);
  mg11_.resize(sys.nb);
  mg22_.resize(sys.nb);
  for (int r = 0; r < sys.nb; ++r)
  {
    X_[r] = sys.G[r];
    X_[r].m11.Axpby(1.0, sys.d1[r], M);
    X_[r].m22.Axpby(1.0, sys.d2[r], M);
    const double s1 = r < static_cast<int>(sys.shift1.size()) ? sys.shift1[r] : 0.0;
    const double s2 = r < static_cast<int>(sys.shift2.size()) ? sys.shift2[r] : 0.0;
    mg11_[r] = std::make_unique<MgHierarchy>(s1 > 0.0 ? Combine(1.0, X_[r].m11, s1, M) : X_[r].m11,
                                             transfer, options.mg);
    mg22_[r] = std::make_unique<MgHierarchy>(s2 > 0.0 ? Combine(1.0, X_[r].m22, s2, M) : X_[r].m22,
                                             transfer, options.mg);
  }
}

void MatchedPreconditioner::BlockSolve(int r, const double *b1, const double *b2, double *x1,
                                       double *x2, bool transpose) const
{
  const Index n = sys_.nx;
  const CsrMatrix &X21 = X_[r].m21;
  Vector in(n), out;
  if (!transpose)
  {
    in = ConstMap(b1, n);
    mg11_[r]->Apply(in, out);
    MutMap(x1, n) = out;
    in = ConstMap(b2, n);
    AddIf(X21, x1, in.data(), -1.0);
    mg22_[r]->Apply(in, out);
    MutMap(x2, n) = out;
  }
  else
  {
    in = ConstMap(b2, n);
    mg22_[r]->Apply(in, out);
    MutMap(x2, n) = out;
    in = ConstMap(b1, n);
    AddIf(X21, x2, in.data(), -1.0);
    mg11_[r]->Apply(in, out);
    MutMap(x1, n) = out;
  }
}

void MatchedPreconditioner::ApplyAInverse(const double *z, double *y) const
{
  const Index n = sys_.nx;
  Vector in(n), out;
  for (int r = 0; r < sys_.nb; ++r)
  {
    in = ConstMap(z + sys_.p_offset(r), n);
    mass_solver_.Apply(in, out);
    MutMap(y + sys_.p_offset(r), n) = out / sys_.a1;
    in = ConstMap(z + sys_.q_offset(r), n);
    mass_solver_.Apply(in, out);
    MutMap(y + sys_.q_offset(r), n) = out / sys_.a2;
  }
}

void MatchedPreconditioner::ApplySchurInverse(const double *z, double *y) const
{
  // Offsets below are relative to the start of a half vector.
  const Index n = sys_.nx;
  const int nb = sys_.nb;
  const CsrMatrix &M = sys_.space->mass();
  auto o1 = [&](int r) { return sys_.p_offset(r); };
  auto o2 = [&](int r) { return sys_.q_offset(r); };

  // Backward substitution (B + D) m = z.
  Vector m(sys_.half()), t1(n), t2(n);
  for (int r = nb - 1; r >= 0; --r)
  {
    t1 = ConstMap(z + o1(r), n);
    t2 = ConstMap(z + o2(r), n);
    if (r + 1 < nb)
    {
      sys_.E[r].AddMult(m.data() + o1(r + 1), m.data() + o2(r + 1), t1.data(), t2.data(), -1.0);
    }
    BlockSolve(r, t1.data(), t2.data(), m.data() + o1(r), m.data() + o2(r), false);
  }

  // s = A m, then forward substitution (B + D)^T y = s.
  Vector s(sys_.half());
  for (int r = 0; r < nb; ++r)
  {
    M.Mult(m.data() + o1(r), s.data() + o1(r));
    M.Mult(m.data() + o2(r), s.data() + o2(r));
    MutMap(s.data() + o1(r), n) *= sys_.a1;
    MutMap(s.data() + o2(r), n) *= sys_.a2;
  }
  for (int r = 0; r < nb; ++r)
  {
    t1 = ConstMap(s.data() + o1(r), n);
    t2 = ConstMap(s.data() + o2(r), n);
    if (r > 0)
    {
      sys_.E[r - 1].AddMult(y + o1(r - 1), y + o2(r - 1), t1.data(), t2.data(), -1.0, true);
    }
    BlockSolve(r, t1.data(), t2.data(), y + o1(r), y + o2(r), true);
  }
}

void MatchedPreconditioner::Apply(const Vector &z, Vector &y) const
{
  if (z.size() != sys_.size())
  {
    throw InvalidArgument("matched preconditioner: dimension mismatch");
  }
  y.resize(sys_.size());
  ApplyAInverse(z.data(), y.data());
  ApplySchurInverse(z.data() + sys_.half(), y.data() + sys_.half());
}

LinearOperator MatchedPreconditioner::AsOperator() const
{
  return LinearOperator(sys_.size(), [this](const Vector &x, Vector &y) { Apply(x, y); });
}

Vector PackSaddle(const SaddleSystem &sys, const Trajectory &traj)
{
  if (static_cast<int>(traj.u.size()) < sys.nb + 1 || traj.nx() != sys.nx)
  {
    throw InvalidArgument("pack saddle: trajectory does not match the system");
  }
  Vector w(sys.size());
  const Index n = sys.nx;
  for (int r = 0; r < sys.nb; ++r)
  {
    w.segment(sys.p_offset(r), n) = -traj.p[r + 1];
    w.segment(sys.q_offset(r), n) = -traj.q[r + 1];
    w.segment(sys.u_offset(r), n) = traj.u[r + 1];
    w.segment(sys.v_offset(r), n) = traj.v[r + 1];
  }
  return w;
}

}  // namespace schnak
