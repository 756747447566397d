// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/sqp_driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "schnak/bwe_system.hpp"
#include "schnak/errors.hpp"
#include "schnak/sv_system.hpp"

namespace schnak
{

namespace
{

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double FamilyNorm(const std::vector<NodalField> &f)
{
  double s = 0.0;
  for (const auto &x : f)
  {
    s += x.squaredNorm();
  }
  return std::sqrt(s);
}

double FamilyChange(const std::vector<NodalField> &next, const std::vector<NodalField> &prev)
{
  double s = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i)
  {
    s += (next[i] - prev[i]).squaredNorm();
  }
  return std::sqrt(s) / std::max(FamilyNorm(prev), 1e-30);
}

// Time points of the adjoint fields including the final condition at T.
std::vector<double> AdjointGrid(const Trajectory &t, bool append_final)
{
  std::vector<double> g;
  for (int k = 0; k <= t.nt; ++k)
  {
    g.push_back(t.AdjointTime(k));
  }
  if (append_final)
  {
    g.push_back(t.T);
  }
  return g;
}

// Piecewise-linear interpolation of samples (times[k], values[k]) at time s.
NodalField InterpolateInTime(const std::vector<double> &times,
                             const std::vector<NodalField> &values, double s)
{
  const auto it = std::upper_bound(times.begin(), times.end(), s);
  std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  k = std::min(k, times.size() - 2);
  const double w = (s - times[k]) / (times[k + 1] - times[k]);
  if (w <= 0.0)
  {
    return values[k];
  }
  if (w >= 1.0)
  {
    return values[k + 1];
  }
  return (1.0 - w) * values[k] + w * values[k + 1];
}

}  // namespace

void SqpConfig::Validate() const
{
  if (!(tol_sqp > 0.0) || !(tol_minres > 0.0) || max_sqp_iters < 1 || max_minres_iters < 1 ||
      !(continuation_scale > 0.0) || !(bwe_guess_scale > 0.0))
  {
    throw InvalidArgument("sqp config: tolerances, scales and iteration limits must be positive");
  }
}

double SqpStats::mean_minres() const
{
  if (iterations.empty())
  {
    return 0.0;
  }
  double s = 0.0;
  for (const auto &it : iterations)
  {
    s += it.minres_iterations;
  }
  return s / static_cast<double>(iterations.size());
}

double SqpStats::seconds() const
{
  double s = 0.0;
  for (const auto &it : iterations)
  {
    s += it.seconds;
  }
  return s;
}

SaddleSystem AssembleSaddle(const SchnakenbergParams &params, std::shared_ptr<const P1Space> space,
                            const Trajectory &lin, const ProblemData &data)
{
  return lin.scheme == Scheme::kStormerVerlet ? AssembleSv(params, std::move(space), lin, data)
                                              : AssembleBwe(params, std::move(space), lin, data);
}

Trajectory UnpackSaddle(const SaddleSystem &sys, const SchnakenbergParams &params,
                        const ProblemData &data, const Vector &w)
{
  return sys.scheme == Scheme::kStormerVerlet ? UnpackSv(sys, params, data, w)
                                              : UnpackBwe(sys, params, data, w);
}

double RelativeChange(const Trajectory &next, const Trajectory &prev)
{
  return std::max({FamilyChange(next.u, prev.u), FamilyChange(next.v, prev.v),
                   FamilyChange(next.p, prev.p), FamilyChange(next.q, prev.q)});
}

SqpResult RunSqp(const SchnakenbergParams &params, std::shared_ptr<const P1Space> space,
                 const Trajectory &initial, const ProblemData &data, const SqpConfig &cfg,
                 std::shared_ptr<const MgTransfer> transfer, const SqpObserver &observer)
{
  cfg.Validate();
  params.Validate();
  if (!space)
  {
    throw InvalidArgument("sqp: missing FE space");
  }
  if (!transfer)
  {
    transfer = std::make_shared<MgTransfer>(space->mesh(), cfg.precond.mg.max_coarse);
  }
  SqpResult out;
  out.solution = initial;
  Trajectory &lin = out.solution;
  lin.Validate();
  data.Validate(lin.nt, lin.nx());
  for (const auto *family : {&lin.u, &lin.v, &lin.p, &lin.q})
  {
    for (const auto &f : *family)
    {
      if (!f.allFinite())
      {
        throw InvalidArgument("sqp: initial trajectory is not finite");
      }
    }
  }
  lin.u[0] = data.u0;
  lin.v[0] = data.v0;

  MinresOptions mopt;
  mopt.tol = cfg.tol_minres;
  mopt.max_iterations = cfg.max_minres_iters;

  for (int k = 1; k <= cfg.max_sqp_iters; ++k)
  {
    SqpIteration rec;
    const auto t0 = Clock::now();
    const SaddleSystem sys = AssembleSaddle(params, space, lin, data);
    const MatchedPreconditioner P(sys, transfer, cfg.precond);
    const Vector x0 = PackSaddle(sys, lin);
    MinresResult res = Minres(sys.AsOperator(), P.AsOperator(), sys.rhs, mopt, &x0);
    rec.seconds = Seconds(t0);
    rec.minres_iterations = res.iterations;
    rec.minres_residual = res.relative_residual;
    rec.minres_status = res.status;
    rec.residual_history = std::move(res.residual_history);
    if (!res.x.allFinite())
    {
      throw DivergedError("sqp: non-finite iterate", k);
    }
    if (res.status != MinresStatus::kConverged)
    {
      out.stats.minres_failures = true;
    }

    Trajectory next = UnpackSaddle(sys, params, data, res.x);
    rec.change = RelativeChange(next, lin);
    lin = std::move(next);
    out.stats.iterations.push_back(std::move(rec));
    if (observer)
    {
      observer(k, out.stats.iterations.back());
    }
    if (out.stats.iterations.back().change <= cfg.tol_sqp)
    {
      out.stats.converged = true;
      break;
    }
  }
  return out;
}

Trajectory ContinuationGuess(const Trajectory &prev, const MeshP1 &coarse, const MeshP1 &fine,
                             int fine_nt, double scale)
{
  prev.Validate();
  if (prev.nx() != coarse.num_nodes())
  {
    throw InvalidArgument("continuation: trajectory does not live on the coarse mesh");
  }
  if (fine.n() % coarse.n() != 0 || fine_nt < prev.nt || fine_nt % prev.nt != 0)
  {
    throw InvalidArgument("continuation: grids are not nested");
  }
  auto prolong_all = [&](const std::vector<NodalField> &f)
  {
    std::vector<NodalField> out;
    out.reserve(f.size() + 1);
    for (const auto &x : f)
    {
      out.push_back(Prolong(coarse, fine, x));
    }
    return out;
  };

  Trajectory t = Trajectory::Zeros(prev.scheme, fine_nt, prev.T, fine.num_nodes());
  std::vector<double> state_times;
  for (int i = 0; i <= prev.nt; ++i)
  {
    state_times.push_back(prev.StateTime(i));
  }
  // Stormer-Verlet adjoints end at the last half step; append the final condition p(T) = 0.
  const bool sv = prev.scheme == Scheme::kStormerVerlet;
  const std::vector<double> adj_times = AdjointGrid(prev, sv);

  const auto u = prolong_all(prev.u), v = prolong_all(prev.v);
  auto p = prolong_all(prev.p), q = prolong_all(prev.q);
  if (sv)
  {
    p.push_back(NodalField::Zero(fine.num_nodes()));
    q.push_back(NodalField::Zero(fine.num_nodes()));
  }
  for (int i = 0; i <= fine_nt; ++i)
  {
    t.u[i] = scale * InterpolateInTime(state_times, u, t.StateTime(i));
    t.v[i] = scale * InterpolateInTime(state_times, v, t.StateTime(i));
    t.p[i] = scale * InterpolateInTime(adj_times, p, t.AdjointTime(i));
    t.q[i] = scale * InterpolateInTime(adj_times, q, t.AdjointTime(i));
  }
  auto a = prolong_all(prev.a), b = prolong_all(prev.b);
  if (sv)
  {
    a.push_back(NodalField::Zero(fine.num_nodes()));
    b.push_back(NodalField::Zero(fine.num_nodes()));
  }
  for (int i = 0; i <= fine_nt; ++i)
  {
    t.a[i] = scale * InterpolateInTime(adj_times, a, t.AdjointTime(i));
    t.b[i] = scale * InterpolateInTime(adj_times, b, t.AdjointTime(i));
  }
  return t;
}

Trajectory CoarsestGuess(Scheme scheme, const ProblemData &data, double T, double bwe_scale)
{
  const int nt = static_cast<int>(data.u_hat.size()) - 1;
  if (nt < 1)
  {
    throw InvalidArgument("coarsest guess: need at least two target time points");
  }
  Trajectory t = Trajectory::Zeros(scheme, nt, T, data.u_hat.front().size());
  const double s = scheme == Scheme::kBackwardEuler ? bwe_scale : 1.0;
  for (int i = 0; i <= nt; ++i)
  {
    t.u[i] = s * data.u_hat[i];
    t.v[i] = s * data.v_hat[i];
  }
  return t;
}

}  // namespace schnak
