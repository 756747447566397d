// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/bwe_system.hpp"

#include <cmath>

#include <Eigen/SparseLU>

#include "linearization.hpp"
#include "schnak/errors.hpp"

namespace schnak
{

namespace
{

Vector SolveBlock(const Block2 &X, Index nx, const Vector &rhs)
{
  Eigen::SparseMatrix<double, Eigen::ColMajor, Index> A = X.ToEigen(nx);
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double, Eigen::ColMajor, Index>> lu(A);
  if (lu.info() != Eigen::Success)
  {
    throw SolverError("bwe boundary: sparse LU factorization failed");
  }
  Vector x = lu.solve(rhs);
  if (lu.info() != Eigen::Success)
  {
    throw SolverError("bwe boundary: sparse LU solve failed");
  }
  return x;
}

}  // namespace

SaddleSystem AssembleBwe(const SchnakenbergParams &params, std::shared_ptr<const P1Space> space,
                         const Trajectory &lin, const ProblemData &data)
{
  params.Validate();
  if (!space)
  {
    throw InvalidArgument("bwe assembly: missing FE space");
  }
  const int nt = params.N_t;
  const Index nx = space->size();
  if (nt < 2)
  {
    throw InvalidArgument("bwe assembly: need N_t >= 2");
  }
  if (lin.scheme != Scheme::kBackwardEuler || lin.nt != nt || lin.nx() != nx)
  {
    throw InvalidArgument("bwe assembly: linearization does not match the discretization");
  }
  lin.Validate();
  data.Validate(nt, nx);

  const double tau = params.tau();
  const double g = params.gamma;
  const CsrMatrix &M = space->mass();

  std::vector<detail::StepLinearization> st;
  st.reserve(nt + 1);
  for (int i = 0; i <= nt; ++i)
  {
    st.push_back(detail::LinearizeStep(*space, params, lin.u[i], lin.v[i]));
  }

  // Adjoint-row blocks G_i (rows u^i, v^i; columns p^i, q^i).
  auto coupling = [&](int i)
  {
    Block2 X;
    X.m11 = Combine(1.0, M, 2.0 * tau, st[i].l1);
    X.m12 = st[i].muv;
    X.m12.Scale(2.0 * tau * g);
    X.m21 = st[i].mu2;
    X.m21.Scale(-tau * g);
    X.m22 = Combine(1.0, M, 2.0 * tau, st[i].l2);
    return X;
  };
  // Second-derivative blocks and loads at step i.
  auto hessian_terms = [&](int i, CsrMatrix &A1, CsrMatrix &A12, Vector &c, Vector &h)
  {
    const NodalField w = lin.q[i] - lin.p[i];
    A1 = space->WeightedMass({&lin.v[i], &w});
    A1.Scale(2.0 * g);
    A12 = space->WeightedMass({&lin.u[i], &w});
    A12.Scale(2.0 * g);
    c = 4.0 * g * space->ProductLoad({&lin.u[i], &lin.v[i], &w});
    h = 2.0 * g * space->ProductLoad({&lin.u[i], &lin.u[i], &w});
  };

  const int nb = nt - 1;
  SaddleSystem sys;
  sys.scheme = Scheme::kBackwardEuler;
  sys.space = space;
  sys.nx = nx;
  sys.nb = nb;
  sys.tau = tau;
  sys.a1 = tau * g * g / params.beta1;
  sys.a2 = tau * g * g / params.beta2;
  sys.G.resize(nb);
  sys.E.resize(nb - 1);
  sys.C.resize(nb);
  sys.d1.assign(nb, tau * g * std::sqrt(params.alpha1 / params.beta1));
  sys.d2.assign(nb, tau * g * std::sqrt(params.alpha2 / params.beta2));
  sys.shift1.resize(nb);
  sys.shift2.assign(nb, 0.0);
  sys.rhs.setZero(sys.size());

  Block2 minus_mass;
  minus_mass.m11 = M;
  minus_mass.m11.Scale(-1.0);
  minus_mass.m22 = minus_mass.m11;

  CsrMatrix A1, A12;
  Vector c, h;
  for (int r = 0; r < nb; ++r)
  {
    const int i = r + 1;
    sys.G[r] = coupling(i);
    // M + 2 tau L1 + d1 M >= (1 + d1 + tau gamma - 2 tau gamma max(uv)) M.
    sys.shift1[r] = detail::SpdShift(1.0 + sys.d1[r] + tau * g -
                                     2.0 * tau * g *
                                         detail::MaxProduct(space->mesh(), lin.u[i], lin.v[i]));
    if (r + 1 < nb)
    {
      sys.E[r] = minus_mass;
    }
    hessian_terms(i, A1, A12, c, h);
    Block2 &C = sys.C[r];
    C.m11 = Combine(tau * params.alpha1, M, tau, A1);
    C.m12 = A12;
    C.m12.Scale(tau);
    C.m21 = C.m12;
    C.m22 = M;
    C.m22.Scale(tau * params.alpha2);

    auto du = sys.rhs.segment(sys.p_offset(r), nx);
    auto dv = sys.rhs.segment(sys.q_offset(r), nx);
    du = -tau * st[i].d;
    dv = tau * st[i].d;
    if (data.has_sources())
    {
      du += tau * (M * data.f[i]);
      dv += tau * (M * data.g[i]);
    }
    if (r == 0)
    {
      du += M * data.u0;
      dv += M * data.v0;
    }

    auto cu = sys.rhs.segment(sys.u_offset(r), nx);
    auto cv = sys.rhs.segment(sys.v_offset(r), nx);
    cu = -tau * (params.alpha1 * (M * data.u_hat[i]) + c);
    cv = -tau * (params.alpha2 * (M * data.v_hat[i]) + h);
  }

  // Adjoint equation at step 0.
  sys.init_block = coupling(0);
  hessian_terms(0, A1, A12, c, h);
  sys.init_rhs.resize(2 * nx);
  sys.init_rhs.head(nx) = tau * (params.alpha1 * (M * (data.u_hat[0] - data.u0)) + c) -
                          tau * (A1 * data.u0) - tau * (A12 * data.v0);
  sys.init_rhs.tail(nx) = tau * (params.alpha2 * (M * (data.v_hat[0] - data.v0)) + h) -
                          tau * (A12 * data.u0);

  // State equation of the last step.
  const Block2 GN = coupling(nt);
  sys.final_block.m11 = GN.m11;
  sys.final_block.m12 = GN.m21;
  sys.final_block.m21 = GN.m12;
  sys.final_block.m22 = GN.m22;
  sys.final_rhs.resize(2 * nx);
  sys.final_rhs.head(nx) = -tau * st[nt].d;
  sys.final_rhs.tail(nx) = tau * st[nt].d;
  if (data.has_sources())
  {
    sys.final_rhs.head(nx) += tau * (M * data.f[nt]);
    sys.final_rhs.tail(nx) += tau * (M * data.g[nt]);
  }
  return sys;
}

void RecoverBweBoundary(const SaddleSystem &sys, Trajectory &traj)
{
  const Index nx = sys.nx;
  const int nt = traj.nt;
  const CsrMatrix &M = sys.space->mass();
  Vector rhs = sys.init_rhs;
  rhs.head(nx) += M * traj.p[1];
  rhs.tail(nx) += M * traj.q[1];
  Vector x = SolveBlock(sys.init_block, nx, rhs);
  traj.p[0] = x.head(nx);
  traj.q[0] = x.tail(nx);

  rhs = sys.final_rhs;
  rhs.head(nx) += M * traj.u[nt - 1];
  rhs.tail(nx) += M * traj.v[nt - 1];
  x = SolveBlock(sys.final_block, nx, rhs);
  traj.u[nt] = x.head(nx);
  traj.v[nt] = x.tail(nx);
}

Trajectory UnpackBwe(const SaddleSystem &sys, const SchnakenbergParams &params,
                     const ProblemData &data, const Vector &w)
{
  if (w.size() != sys.size())
  {
    throw InvalidArgument("bwe unpack: dimension mismatch");
  }
  const Index nx = sys.nx;
  Trajectory t = Trajectory::Zeros(Scheme::kBackwardEuler, sys.nb + 1, params.T, nx);
  t.u[0] = data.u0;
  t.v[0] = data.v0;
  for (int r = 0; r < sys.nb; ++r)
  {
    t.p[r + 1] = -w.segment(sys.p_offset(r), nx);
    t.q[r + 1] = -w.segment(sys.q_offset(r), nx);
    t.u[r + 1] = w.segment(sys.u_offset(r), nx);
    t.v[r + 1] = w.segment(sys.v_offset(r), nx);
  }
  RecoverBweBoundary(sys, t);
  RecoverControls(t, params);
  return t;
}

}  // namespace schnak
