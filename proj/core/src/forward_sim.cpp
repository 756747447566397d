// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/forward_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "schnak/errors.hpp"
#include "schnak/model.hpp"

namespace schnak
{

namespace
{

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;
using Ldlt = Eigen::SimplicialLDLT<SpMat>;

constexpr double kBlowUp = 1e6;

void Factorize(Ldlt &solver, const CsrMatrix &A)
{
  SpMat S = A.ToEigen();
  solver.compute(S);
  if (solver.info() != Eigen::Success)
  {
    throw SolverError("forward: factorization of the implicit operator failed");
  }
}

Snapshot Record(double t, const NodalField &u, const NodalField &v, const CsrMatrix &M)
{
  Snapshot s;
  s.t = t;
  s.u = u;
  s.v = v;
  const Vector one = Vector::Ones(u.size());
  s.mass_u = one.dot(M * u);
  s.mass_v = one.dot(M * v);
  return s;
}

}  // namespace

void ForwardConfig::Validate() const
{
  if (!(gamma > 0.0 && D_u > 0.0 && D_v > 0.0 && T > 0.0 && dt > 0.0))
  {
    throw InvalidArgument("forward: gamma, D_u, D_v, T and dt must be positive");
  }
  if (n < 1)
  {
    throw InvalidArgument("forward: n must be >= 1");
  }
  if (!(dt * gamma < 1.0))
  {
    throw InvalidArgument("forward: dt * gamma must be below 1 for the explicit reaction");
  }
  if (a + b > 0.0)
  {
    // Spatially constant perturbations of the steady state must not grow.
    const auto [us, vs] = SteadyState(a, b);
    const double g = dt * gamma;
    Eigen::Matrix2d amp;
    amp << (1.0 + 2.0 * g * us * vs) / (1.0 + g), g * us * us / (1.0 + g), -2.0 * g * us * vs,
      1.0 - g * us * us;
    if (amp.eigenvalues().cwiseAbs().maxCoeff() >= 1.0)
    {
      throw InvalidArgument("forward: dt too large, the homogeneous mode is unstable");
    }
  }
  for (double t : snapshot_times)
  {
    if (!(t >= 0.0 && t <= T))
    {
      throw InvalidArgument("forward: snapshot time outside [0, T]");
    }
  }
}

std::pair<NodalField, NodalField> GarvieInit(const ForwardConfig &cfg, const MeshP1 &mesh)
{
  const auto [us, vs] = SteadyState(cfg.a, cfg.b);
  NodalField u = InterpolateNodal(mesh,
                                  [&](double x1, double x2)
                                  {
                                    const double r2 = (x1 - cfg.cx) * (x1 - cfg.cx) +
                                                      (x2 - cfg.cy) * (x2 - cfg.cy);
                                    return us + cfg.amplitude * std::exp(-cfg.width * r2);
                                  });
  NodalField v = NodalField::Constant(mesh.num_nodes(), vs);
  return {std::move(u), std::move(v)};
}

ForwardResult Simulate(const ForwardConfig &cfg, const P1Space &space, const NodalField &u0,
                       const NodalField &v0)
{
  cfg.Validate();
  const Index nx = space.size();
  if (u0.size() != nx || v0.size() != nx)
  {
    throw InvalidArgument("forward: initial data does not match the mesh");
  }
  const CsrMatrix &M = space.mass();
  const CsrMatrix &K = space.stiffness();
  Ldlt solve_u, solve_v;
  Factorize(solve_u, Combine(1.0 + cfg.dt * cfg.gamma, M, cfg.dt * cfg.D_u, K));
  Factorize(solve_v, Combine(1.0, M, cfg.dt * cfg.D_v, K));

  std::vector<double> times = cfg.snapshot_times;
  std::sort(times.begin(), times.end());
  const long steps = std::lround(std::ceil(cfg.T / cfg.dt - 1e-9));
  const double dt = cfg.T / static_cast<double>(steps);

  ForwardResult out;
  out.steps = steps;
  NodalField u = u0, v = v0;
  std::size_t next = 0;
  auto record_due = [&](long k)
  {
    const double t = k * dt;
    while (next < times.size() && times[next] <= t + 0.5 * dt)
    {
      if (times[next] < cfg.T - 0.5 * dt)
      {
        out.snapshots.push_back(Record(times[next], u, v, M));
      }
      ++next;
    }
  };
  record_due(0);

  NodalField ru(nx), rv(nx);
  for (long k = 1; k <= steps; ++k)
  {
    for (Index i = 0; i < nx; ++i)
    {
      const double u2v = u[i] * u[i] * v[i];
      ru[i] = u[i] + dt * cfg.gamma * (cfg.a + u2v);
      rv[i] = v[i] + dt * cfg.gamma * (cfg.b - u2v);
    }
    u = solve_u.solve(M * ru);
    v = solve_v.solve(M * rv);
    const double peak = std::max(u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff());
    if (!std::isfinite(peak) || peak > kBlowUp)
    {
      throw DivergedError("forward: solution blew up at step " + std::to_string(k), k);
    }
    record_due(k);
  }
  out.snapshots.push_back(Record(cfg.T, u, v, M));
  return out;
}

ForwardResult Simulate(const ForwardConfig &cfg, const P1Space &space)
{
  const auto [u0, v0] = GarvieInit(cfg, space.mesh());
  return Simulate(cfg, space, u0, v0);
}

std::vector<NodalField> BuildTargets(const NodalField &snapshot, int nt)
{
  if (nt < 1)
  {
    throw InvalidArgument("build_targets: nt must be >= 1");
  }
  std::vector<NodalField> out;
  out.reserve(nt + 1);
  for (int i = 0; i <= nt; ++i)
  {
    out.push_back((static_cast<double>(i) / nt) * snapshot);
  }
  out.back() = snapshot;
  return out;
}

}  // namespace schnak
