// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/harness.hpp"

#include <cmath>
#include <ostream>

#include "schnak/errors.hpp"

namespace schnak
{

namespace
{

std::vector<double> Times(const Trajectory &t, bool adjoint)
{
  std::vector<double> out(t.nt + 1);
  for (int k = 0; k <= t.nt; ++k)
  {
    out[k] = adjoint ? t.AdjointTime(k) : t.StateTime(k);
  }
  return out;
}

double Mean(const NodalField &f, const CsrMatrix &M)
{
  // The domain is the unit square, so the integral is the mean.
  return Vector::Ones(f.size()).dot(M * f);
}

SchnakenbergParams LevelParams(const ExperimentConfig &cfg, int nt)
{
  SchnakenbergParams prm;
  prm.gamma = cfg.gamma;
  prm.beta1 = cfg.beta;
  prm.beta2 = cfg.beta;
  prm.T = cfg.T;
  prm.N_t = nt;
  return prm;
}

}  // namespace

LevelGrid GridForLevel(Scheme scheme, int level, double T)
{
  if (level < 1 || level > 12)
  {
    throw InvalidArgument("level must lie in 1..12");
  }
  if (!(T > 0.0))
  {
    throw InvalidArgument("T must be positive");
  }
  LevelGrid g;
  g.level = level;
  g.n = 10 << (level - 1);
  const double h = 1.0 / g.n;
  const double tau = scheme == Scheme::kStormerVerlet ? h / 5.0 : 2.0 * h * h;
  const double steps = T / tau;
  g.nt = static_cast<int>(std::lround(steps));
  if (g.nt < 1 || std::abs(steps - g.nt) > 1e-9 * steps)
  {
    throw InvalidArgument("T is not a multiple of the level time step");
  }
  return g;
}

long DegreesOfFreedom(Scheme scheme, int nt, Index nx)
{
  const long blocks = scheme == Scheme::kStormerVerlet ? nt : nt - 1;
  return 4L * blocks * static_cast<long>(nx);
}

ProblemData ManufacturedData(const ManufacturedCase &mc, const MeshP1 &mesh, int nt)
{
  const double tau = mc.params().T / nt;
  ProblemData d;
  for (int i = 0; i <= nt; ++i)
  {
    const double t = i * tau;
    d.u_hat.push_back(
      InterpolateNodal(mesh, [&](double x, double y) { return mc.Targets(t, x, y).first; }));
    d.v_hat.push_back(
      InterpolateNodal(mesh, [&](double x, double y) { return mc.Targets(t, x, y).second; }));
    d.f.push_back(
      InterpolateNodal(mesh, [&](double x, double y) { return mc.Sources(t, x, y).first; }));
    d.g.push_back(
      InterpolateNodal(mesh, [&](double x, double y) { return mc.Sources(t, x, y).second; }));
  }
  d.u0 = InterpolateNodal(mesh, [&](double x, double y) { return mc.Eval(0.0, x, y).u; });
  d.v0 = InterpolateNodal(mesh, [&](double x, double y) { return mc.Eval(0.0, x, y).v; });
  return d;
}

double WeightedError(const std::vector<NodalField> &field, const std::vector<double> &times,
                     const std::function<double(double, double, double)> &exact,
                     const MeshP1 &mesh, int first)
{
  if (field.size() != times.size())
  {
    throw InvalidArgument("weighted error: field and time counts differ");
  }
  double err = 0.0;
  for (std::size_t k = std::max(first, 0); k < field.size(); ++k)
  {
    const double t = times[k];
    const NodalField e =
      InterpolateNodal(mesh, [&](double x, double y) { return exact(t, x, y); });
    if (field[k].size() != e.size())
    {
      throw InvalidArgument("weighted error: field does not match the mesh");
    }
    err = std::max(err, mesh.h() * (field[k] - e).norm());
  }
  return err;
}

FieldErrors ManufacturedErrors(const Trajectory &traj, const ManufacturedCase &mc,
                               const MeshP1 &mesh)
{
  const auto ts = Times(traj, false), ta = Times(traj, true);
  FieldErrors e;
  e.u = WeightedError(traj.u, ts, [&](double t, double x, double y)
                      { return mc.Eval(t, x, y).u; }, mesh);
  e.v = WeightedError(traj.v, ts, [&](double t, double x, double y)
                      { return mc.Eval(t, x, y).v; }, mesh);
  e.p = WeightedError(traj.p, ta, [&](double t, double x, double y)
                      { return mc.Eval(t, x, y).p; }, mesh, 1);
  e.q = WeightedError(traj.q, ta, [&](double t, double x, double y)
                      { return mc.Eval(t, x, y).q; }, mesh, 1);
  return e;
}

CostTerms ComputeCostTerms(const Trajectory &traj, const ProblemData &data,
                           const P1Space &space)
{
  traj.Validate();
  data.Validate(traj.nt, traj.nx());
  const CsrMatrix &M = space.mass();
  const double tau = traj.tau();
  auto sq = [&](const NodalField &x) { return x.dot(M * x); };
  CostTerms c;
  for (int i = 0; i <= traj.nt; ++i)
  {
    const double w = (i == 0 || i == traj.nt) ? 0.5 * tau : tau;
    c.misfit_u += w * sq(traj.u[i] - data.u_hat[i]);
    c.misfit_v += w * sq(traj.v[i] - data.v_hat[i]);
  }
  for (int k = 1; k <= traj.nt; ++k)
  {
    c.control_a += tau * sq(traj.a[k]);
    c.control_b += tau * sq(traj.b[k]);
  }
  return c;
}

ControlMeans ComputeControlMeans(const Trajectory &traj, const P1Space &space)
{
  ControlMeans m;
  for (int k = 1; k <= traj.nt; ++k)
  {
    m.t.push_back(traj.AdjointTime(k));
    m.a.push_back(Mean(traj.a[k], space.mass()));
    m.b.push_back(Mean(traj.b[k], space.mass()));
  }
  return m;
}

void ExperimentConfig::Validate() const
{
  if (levels.empty())
  {
    throw InvalidArgument("experiment: no levels");
  }
  for (std::size_t i = 1; i < levels.size(); ++i)
  {
    if (levels[i] <= levels[i - 1])
    {
      throw InvalidArgument("experiment: levels must be ascending");
    }
  }
  if (!(beta > 0.0 && gamma > 0.0 && T > 0.0 && sv_guess_scale > 0.0))
  {
    throw InvalidArgument("experiment: beta, gamma, T and the guess scale must be positive");
  }
  sqp.Validate();
}

std::vector<LevelStats> ConvergenceStudy(const ExperimentConfig &cfg,
                                         const LevelObserver &on_level,
                                         const IterationObserver &on_iteration)
{
  cfg.Validate();
  std::vector<LevelStats> rows;
  std::shared_ptr<const P1Space> prev_space;
  Trajectory prev;
  for (int level : cfg.levels)
  {
    const LevelGrid grid = GridForLevel(cfg.scheme, level, cfg.T);
    const SchnakenbergParams prm = LevelParams(cfg, grid.nt);
    const ManufacturedCase mc(prm);
    auto space = std::make_shared<const P1Space>(MeshP1(grid.n));
    const ProblemData data = ManufacturedData(mc, space->mesh(), grid.nt);

    Trajectory guess;
    if (prev_space)
    {
      guess = ContinuationGuess(prev, prev_space->mesh(), space->mesh(), grid.nt,
                                cfg.sqp.continuation_scale);
    }
    else
    {
      guess = CoarsestGuess(cfg.scheme, data, cfg.T, cfg.sqp.bwe_guess_scale);
      if (cfg.scheme == Scheme::kStormerVerlet)
      {
        for (int i = 0; i <= grid.nt; ++i)
        {
          guess.u[i] *= cfg.sv_guess_scale;
          guess.v[i] *= cfg.sv_guess_scale;
        }
      }
    }

    LevelStats row;
    row.level = level;
    row.n = grid.n;
    row.nt = grid.nt;
    row.dof = DegreesOfFreedom(cfg.scheme, grid.nt, space->size());
    try
    {
      SqpObserver obs;
      if (on_iteration)
      {
        obs = [&](int k, const SqpIteration &it) { on_iteration(level, k, it); };
      }
      SqpResult res = RunSqp(prm, space, guess, data, cfg.sqp, nullptr, obs);
      row.errors = ManufacturedErrors(res.solution, mc, space->mesh());
      row.minres_mean = res.stats.mean_minres();
      row.sqp_iters = res.stats.sqp_iterations();
      row.cpu_s = res.stats.seconds();
      row.converged = res.stats.converged;
      if (!row.converged)
      {
        row.message = "SQP did not converge";
      }
      prev = std::move(res.solution);
      prev_space = space;
    }
    catch (const DivergedError &e)
    {
      row.diverged = true;
      row.message = e.what();
    }
    if (on_level)
    {
      on_level(row);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void WriteConvergenceCsv(std::ostream &os, const std::vector<LevelStats> &rows)
{
  os << kConvergenceCsvHeader << '\n';
  const auto flags = os.flags();
  const auto prec = os.precision();
  os.precision(6);
  for (const auto &r : rows)
  {
    os << r.level << ',' << r.dof << ',';
    if (r.diverged)
    {
      os << "nan,nan,nan,nan,";
    }
    else
    {
      os << std::scientific << r.errors.u << ',' << r.errors.v << ',' << r.errors.p << ','
         << r.errors.q << ',';
      os.flags(flags);
    }
    os << std::fixed << r.minres_mean << ',' << r.sqp_iters << ',' << r.cpu_s << '\n';
    os.flags(flags);
  }
  os.precision(prec);
}

SqpConfig DatadrivenConfig::DefaultSqp()
{
  SqpConfig s;
  s.tol_minres = 1e-7;
  s.tol_sqp = 1e-6;
  return s;
}

void DatadrivenConfig::Validate() const
{
  if (betas.empty())
  {
    throw InvalidArgument("identification: no beta values");
  }
  for (double b : betas)
  {
    if (!(b > 0.0))
    {
      throw InvalidArgument("identification: beta must be positive");
    }
  }
  if (!(gamma > 0.0 && T > 0.0) || nt < 1)
  {
    throw InvalidArgument("identification: gamma, T and nt must be positive");
  }
  sqp.Validate();
}

ProblemData DatadrivenData(const NodalField &u_T, const NodalField &v_T, int nt, double u0,
                           double v0)
{
  if (u_T.size() != v_T.size())
  {
    throw InvalidArgument("identification: snapshot fields differ in size");
  }
  ProblemData d;
  d.u_hat = BuildTargets(u_T, nt);
  d.v_hat = BuildTargets(v_T, nt);
  d.u0 = NodalField::Constant(u_T.size(), u0);
  d.v0 = NodalField::Constant(u_T.size(), v0);
  return d;
}

std::vector<DatadrivenRun> DatadrivenStudy(const DatadrivenConfig &cfg,
                                           std::shared_ptr<const P1Space> space,
                                           const NodalField &u_T, const NodalField &v_T,
                                           const IterationObserver &on_iteration)
{
  cfg.Validate();
  if (!space || u_T.size() != space->size())
  {
    throw InvalidArgument("identification: snapshot does not match the mesh");
  }
  const ProblemData data = DatadrivenData(u_T, v_T, cfg.nt, cfg.u0, cfg.v0);
  auto transfer = std::make_shared<MgTransfer>(space->mesh(), cfg.sqp.precond.mg.max_coarse);
  std::vector<DatadrivenRun> runs;
  for (std::size_t j = 0; j < cfg.betas.size(); ++j)
  {
    SchnakenbergParams prm;
    prm.gamma = cfg.gamma;
    prm.beta1 = cfg.betas[j];
    prm.beta2 = cfg.betas[j];
    prm.T = cfg.T;
    prm.N_t = cfg.nt;
    const Trajectory guess = CoarsestGuess(Scheme::kStormerVerlet, data, cfg.T);
    SqpObserver obs;
    if (on_iteration)
    {
      obs = [&](int k, const SqpIteration &it) { on_iteration(static_cast<int>(j), k, it); };
    }
    SqpResult res = RunSqp(prm, space, guess, data, cfg.sqp, transfer, obs);
    DatadrivenRun run;
    run.beta = cfg.betas[j];
    run.cost = ComputeCostTerms(res.solution, data, *space);
    run.minres_mean = res.stats.mean_minres();
    run.sqp_iters = res.stats.sqp_iterations();
    run.cpu_s = res.stats.seconds();
    run.converged = res.stats.converged;
    run.means = ComputeControlMeans(res.solution, *space);
    run.solution = std::move(res.solution);
    runs.push_back(std::move(run));
  }
  return runs;
}

void WriteCostCsv(std::ostream &os, const std::vector<DatadrivenRun> &runs)
{
  os << kCostCsvHeader << '\n';
  const auto flags = os.flags();
  const auto prec = os.precision();
  os.precision(6);
  for (const auto &r : runs)
  {
    os << std::scientific << r.beta << ',' << r.cost.misfit_u << ',' << r.cost.misfit_v << ','
       << r.cost.control_a << ',' << r.cost.control_b << ',';
    os << std::fixed << r.minres_mean << ',' << r.sqp_iters << ',' << r.cpu_s << '\n';
    os.flags(flags);
  }
  os.precision(prec);
}

void WriteMeansCsv(std::ostream &os, const ControlMeans &means)
{
  os << kMeansCsvHeader << '\n';
  const auto prec = os.precision();
  os.precision(10);
  for (std::size_t k = 0; k < means.t.size(); ++k)
  {
    os << means.t[k] << ',' << means.a[k] << ',' << means.b[k] << '\n';
  }
  os.precision(prec);
}

}  // namespace schnak
