// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/sv_system.hpp"

#include <cmath>

#include "linearization.hpp"
#include "schnak/chebyshev.hpp"
#include "schnak/errors.hpp"

namespace schnak
{

SaddleSystem AssembleSv(const SchnakenbergParams &params, std::shared_ptr<const P1Space> space,
                        const Trajectory &lin, const ProblemData &data)
{
  params.Validate();
  if (!space)
  {
    throw InvalidArgument("sv assembly: missing FE space");
  }
  const int nt = params.N_t;
  const Index nx = space->size();
  if (lin.scheme != Scheme::kStormerVerlet || lin.nt != nt || lin.nx() != nx)
  {
    throw InvalidArgument("sv assembly: linearization does not match the discretization");
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
  // (q - p) at half step j + 1/2.
  std::vector<NodalField> w(nt);
  for (int j = 0; j < nt; ++j)
  {
    w[j] = lin.q[j + 1] - lin.p[j + 1];
  }

  // Adjoint-row coefficients at integer step i: the second-derivative blocks A1, A12
  // and the loads c, h, each averaged over the adjacent half steps.
  auto hessian_terms = [&](int i, CsrMatrix &A1, CsrMatrix &A12, Vector &c, Vector &h)
  {
    A1 = space->Zero();
    A12 = space->Zero();
    c.setZero(nx);
    h.setZero(nx);
    for (int j : {i - 1, i})
    {
      if (j < 0 || j >= nt)
      {
        continue;
      }
      A1.Axpby(1.0, g, space->WeightedMass({&lin.v[i], &w[j]}));
      A12.Axpby(1.0, g, space->WeightedMass({&lin.u[i], &w[j]}));
      c += 2.0 * g * space->ProductLoad({&lin.u[i], &lin.v[i], &w[j]});
      h += g * space->ProductLoad({&lin.u[i], &lin.u[i], &w[j]});
    }
  };

  SaddleSystem sys;
  sys.scheme = Scheme::kStormerVerlet;
  sys.space = space;
  sys.nx = nx;
  sys.nb = nt;
  sys.tau = tau;
  sys.a1 = tau * g * g / params.beta1;
  sys.a2 = tau * g * g / params.beta2;
  sys.G.resize(nt);
  sys.E.resize(nt - 1);
  sys.C.resize(nt);
  sys.d1.resize(nt);
  sys.d2.resize(nt);
  sys.shift1.resize(nt);
  sys.shift2.resize(nt);
  sys.rhs.setZero(sys.size());

  auto coupling = [&](const detail::StepLinearization &s, double mass_sign)
  {
    Block2 X;
    X.m11 = Combine(mass_sign, M, tau, s.l1);
    X.m12 = s.muv;
    X.m12.Scale(tau * g);
    X.m21 = s.mu2;
    X.m21.Scale(-0.5 * tau * g);
    X.m22 = Combine(mass_sign, M, tau, s.l2);
    return X;
  };

  CsrMatrix A1, A12;
  Vector c, h;
  for (int r = 0; r < nt; ++r)
  {
    const int i = r + 1;
    const double s = i < nt ? 1.0 : 0.5;
    sys.G[r] = coupling(st[i], 1.0);
    if (r + 1 < nt)
    {
      sys.E[r] = coupling(st[i], -1.0);
    }
    hessian_terms(i, A1, A12, c, h);
    Block2 &C = sys.C[r];
    C.m11 = Combine(tau * s * params.alpha1, M, tau, A1);
    C.m12 = A12;
    C.m12.Scale(tau);
    C.m21 = C.m12;
    C.m22 = M;
    C.m22.Scale(tau * s * params.alpha2);
    sys.d1[r] = tau * g * std::sqrt(s * params.alpha1 / params.beta1);
    sys.d2[r] = tau * g * std::sqrt(s * params.alpha2 / params.beta2);
    // M + tau L1 + d1 M >= (1 + d1 + tau gamma / 2 - tau gamma max(uv)) M; the v block is SPD.
    sys.shift1[r] = detail::SpdShift(1.0 + sys.d1[r] + 0.5 * tau * g -
                                     tau * g * detail::MaxProduct(space->mesh(), lin.u[i], lin.v[i]));
    sys.shift2[r] = 0.0;

    // State rows of step r -> r + 1 (trapezoidal reaction and source terms).
    auto du = sys.rhs.segment(sys.p_offset(r), nx);
    auto dv = sys.rhs.segment(sys.q_offset(r), nx);
    du = -0.5 * tau * (st[r].d + st[r + 1].d);
    dv = 0.5 * tau * (st[r].d + st[r + 1].d);
    if (data.has_sources())
    {
      du += 0.5 * tau * (M * (data.f[r] + data.f[r + 1]));
      dv += 0.5 * tau * (M * (data.g[r] + data.g[r + 1]));
    }
    if (r == 0)
    {
      const Block2 X0 = coupling(st[0], -1.0);
      X0.AddMult(data.u0.data(), data.v0.data(), du.data(), dv.data(), -1.0, true);
    }

    // Adjoint rows at step i.
    auto cu = sys.rhs.segment(sys.u_offset(r), nx);
    auto cv = sys.rhs.segment(sys.v_offset(r), nx);
    cu = -(tau * s * params.alpha1 * (M * data.u_hat[i]) + tau * c);
    cv = -(tau * s * params.alpha2 * (M * data.v_hat[i]) + tau * h);
  }

  // Adjoint equation at t = 0 with its one-sided terms moved to the right-hand side.
  sys.init_block = coupling(st[0], -1.0);
  hessian_terms(0, A1, A12, c, h);
  sys.init_rhs.resize(2 * nx);
  const double s0 = 0.5 * tau;
  sys.init_rhs.head(nx) = s0 * params.alpha1 * (M * (data.u_hat[0] - data.u0)) + tau * c -
                          tau * (A1 * data.u0) - tau * (A12 * data.v0);
  sys.init_rhs.tail(nx) = s0 * params.alpha2 * (M * (data.v_hat[0] - data.v0)) + tau * h -
                          tau * (A12 * data.u0);
  return sys;
}

void RecoverBoundaryAdjoints(const SaddleSystem &sys, Trajectory &traj)
{
  const Index nx = sys.nx;
  Vector rp = sys.init_rhs.head(nx);
  Vector rq = sys.init_rhs.tail(nx);
  sys.init_block.AddMult(traj.p[1].data(), traj.q[1].data(), rp.data(), rq.data(), -1.0);
  const ChebyshevMassSolver solver(sys.space->mass());
  traj.p[0] = solver.Apply(rp);
  traj.q[0] = solver.Apply(rq);
}

Trajectory UnpackSv(const SaddleSystem &sys, const SchnakenbergParams &params,
                    const ProblemData &data, const Vector &w)
{
  if (w.size() != sys.size())
  {
    throw InvalidArgument("sv unpack: dimension mismatch");
  }
  const Index nx = sys.nx;
  Trajectory t = Trajectory::Zeros(Scheme::kStormerVerlet, sys.nb, params.T, nx);
  t.u[0] = data.u0;
  t.v[0] = data.v0;
  for (int r = 0; r < sys.nb; ++r)
  {
    t.p[r + 1] = -w.segment(sys.p_offset(r), nx);
    t.q[r + 1] = -w.segment(sys.q_offset(r), nx);
    t.u[r + 1] = w.segment(sys.u_offset(r), nx);
    t.v[r + 1] = w.segment(sys.v_offset(r), nx);
  }
  RecoverBoundaryAdjoints(sys, t);
  RecoverControls(t, params);
  return t;
}

}  // namespace schnak
