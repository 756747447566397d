// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/trajectory.hpp"

#include "schnak/errors.hpp"

namespace schnak
{

std::string SchemeName(Scheme s) { return s == Scheme::kStormerVerlet ? "sv" : "bwe"; }

Scheme ParseScheme(const std::string &name)
{
  if (name == "sv")
  {
    return Scheme::kStormerVerlet;
  }
  if (name == "bwe")
  {
    return Scheme::kBackwardEuler;
  }
  throw InvalidArgument("unknown scheme '" + name + "' (expected sv or bwe)");
}

Trajectory Trajectory::Zeros(Scheme scheme, int nt, double T, Index nx)
{
  if (nt < 1 || nx < 1 || !(T > 0.0))
  {
    throw InvalidArgument("trajectory: need nt >= 1, nx >= 1, T > 0");
  }
  Trajectory t;
  t.scheme = scheme;
  t.nt = nt;
  t.T = T;
  const NodalField z = NodalField::Zero(nx);
  t.u.assign(nt + 1, z);
  t.v.assign(nt + 1, z);
  t.p.assign(nt + 1, z);
  t.q.assign(nt + 1, z);
  t.a.assign(nt + 1, z);
  t.b.assign(nt + 1, z);
  return t;
}

double Trajectory::AdjointTime(int k) const
{
  if (scheme == Scheme::kBackwardEuler || k == 0)
  {
    return k * tau();
  }
  return (k - 0.5) * tau();
}

void Trajectory::Validate() const
{
  const std::size_t n = static_cast<std::size_t>(nt) + 1;
  if (nt < 1 || u.size() != n || v.size() != n || p.size() != n || q.size() != n ||
      a.size() != n || b.size() != n)
  {
    throw InvalidArgument("trajectory: expected nt + 1 entries per field");
  }
  const Index m = nx();
  for (const auto *fam : {&u, &v, &p, &q, &a, &b})
  {
    for (const auto &f : *fam)
    {
      if (f.size() != m)
      {
        throw InvalidArgument("trajectory: inconsistent field lengths");
      }
    }
  }
}

void RecoverControls(Trajectory &traj, const SchnakenbergParams &params)
{
  const double s1 = params.gamma / params.beta1;
  const double s2 = params.gamma / params.beta2;
  traj.a.resize(traj.p.size());
  traj.b.resize(traj.q.size());
  for (std::size_t k = 0; k < traj.p.size(); ++k)
  {
    traj.a[k] = s1 * traj.p[k];
    traj.b[k] = s2 * traj.q[k];
  }
}

void ProblemData::Validate(int nt, Index nx) const
{
  const std::size_t n = static_cast<std::size_t>(nt) + 1;
  if (u_hat.size() != n || v_hat.size() != n)
  {
    throw InvalidArgument("problem data: targets need nt + 1 time points");
  }
  if (!f.empty() && (f.size() != n || g.size() != n))
  {
    throw InvalidArgument("problem data: sources need nt + 1 time points");
  }
  if (u0.size() != nx || v0.size() != nx)
  {
    throw InvalidArgument("problem data: initial data length mismatch");
  }
  for (const auto *fam : {&u_hat, &v_hat, &f, &g})
  {
    for (const auto &x : *fam)
    {
      if (x.size() != nx)
      {
        throw InvalidArgument("problem data: field length mismatch");
      }
    }
  }
}

}  // namespace schnak
