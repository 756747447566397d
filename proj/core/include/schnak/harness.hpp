// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_HARNESS_HPP
#define SCHNAK_HARNESS_HPP

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "schnak/fem.hpp"
#include "schnak/forward_sim.hpp"
#include "schnak/model.hpp"
#include "schnak/sqp_driver.hpp"
#include "schnak/trajectory.hpp"

namespace schnak
{

// Grid of mesh level i: h = 2^{1-i} / 10, tau = h / 5 (SV) or 2 h^2 (BWE).
struct LevelGrid
{
  int level = 1;
  int n = 10;
  int nt = 50;
};
LevelGrid GridForLevel(Scheme scheme, int level, double T);

// Saddle unknowns: 4 N_t N_x for SV, 4 (N_t - 1) N_x for BWE.
long DegreesOfFreedom(Scheme scheme, int nt, Index nx);

// Nodal targets, sources and initial data of the manufactured solution.
ProblemData ManufacturedData(const ManufacturedCase &mc, const MeshP1 &mesh, int nt);

// max_k h |field[k] - exact(times[k])|_2 over k >= first, exact sampled at the nodes.
double WeightedError(const std::vector<NodalField> &field, const std::vector<double> &times,
                     const std::function<double(double, double, double)> &exact,
                     const MeshP1 &mesh, int first = 0);

struct FieldErrors
{
  double u = 0.0, v = 0.0, p = 0.0, q = 0.0;
};
// States over every step; adjoints over k >= 1 (the solved adjoint steps and the final
// condition; the recovered initial adjoint is left out).
FieldErrors ManufacturedErrors(const Trajectory &traj, const ManufacturedCase &mc,
                               const MeshP1 &mesh);

struct CostTerms
{
  double misfit_u = 0.0, misfit_v = 0.0, control_a = 0.0, control_b = 0.0;
};
// Squared L2(Q) norms: trapezoid in time for the state misfits, one tau-weighted term per
// control step k = 1..N_t for the controls, mass matrix in space.
CostTerms ComputeCostTerms(const Trajectory &traj, const ProblemData &data,
                           const P1Space &space);

// Spatial means of a and b at control steps k = 1..N_t with their times.
struct ControlMeans
{
  std::vector<double> t, a, b;
};
ControlMeans ComputeControlMeans(const Trajectory &traj, const P1Space &space);

struct ExperimentConfig
{
  Scheme scheme = Scheme::kStormerVerlet;
  std::vector<int> levels{1, 2};
  double beta = 1e-2;
  double gamma = 2.0;
  double T = 1.0;
  // Factor applied to the targets for the SV state guess on the coarsest level.
  double sv_guess_scale = 0.4;
  SqpConfig sqp;

  // Throws InvalidArgument for empty or non-ascending levels or bad coefficients.
  void Validate() const;
};

struct LevelStats
{
  int level = 0;
  int n = 0;
  int nt = 0;
  long dof = 0;
  FieldErrors errors;
  double minres_mean = 0.0;
  int sqp_iters = 0;
  double cpu_s = 0.0;
  bool converged = false;
  // Set when the level threw DivergedError; the study continues from the last good level.
  bool diverged = false;
  std::string message;
};

using LevelObserver = std::function<void(const LevelStats &)>;
using IterationObserver = std::function<void(int level, int iteration, const SqpIteration &)>;

//
// Manufactured-solution study over cfg.levels with mesh continuation: each level starts
// from the previous converged level prolonged, interpolated in time and scaled by
// cfg.sqp.continuation_scale.
//
std::vector<LevelStats> ConvergenceStudy(const ExperimentConfig &cfg,
                                         const LevelObserver &on_level = {},
                                         const IterationObserver &on_iteration = {});

inline constexpr const char *kConvergenceCsvHeader =
  "level,dof,u_err,v_err,p_err,q_err,minres_mean,sqp_iters,cpu_s";
void WriteConvergenceCsv(std::ostream &os, const std::vector<LevelStats> &rows);

struct DatadrivenConfig
{
  std::vector<double> betas{1e-2, 1e-3, 1e-4};
  double gamma = 150.0;
  double T = 2.0;
  int nt = 200;
  // Initial data of the identification problem (the targets start from zero).
  double u0 = 0.0;
  double v0 = 0.0;
  SqpConfig sqp = DefaultSqp();

  static SqpConfig DefaultSqp();
  void Validate() const;
};

struct DatadrivenRun
{
  double beta = 0.0;
  CostTerms cost;
  double minres_mean = 0.0;
  int sqp_iters = 0;
  double cpu_s = 0.0;
  bool converged = false;
  ControlMeans means;
  Trajectory solution;
};

// Targets ramped linearly in time from zero to the snapshot (u_T, v_T).
ProblemData DatadrivenData(const NodalField &u_T, const NodalField &v_T, int nt, double u0,
                           double v0);

// One identification run per beta on the space of the snapshot.
std::vector<DatadrivenRun> DatadrivenStudy(const DatadrivenConfig &cfg,
                                           std::shared_ptr<const P1Space> space,
                                           const NodalField &u_T, const NodalField &v_T,
                                           const IterationObserver &on_iteration = {});

inline constexpr const char *kCostCsvHeader =
  "beta,misfit_u,misfit_v,control_a,control_b,minres_mean,sqp_iters,cpu_s";
void WriteCostCsv(std::ostream &os, const std::vector<DatadrivenRun> &runs);
inline constexpr const char *kMeansCsvHeader = "t,mean_a,mean_b";
void WriteMeansCsv(std::ostream &os, const ControlMeans &means);

}  // namespace schnak

#endif  // SCHNAK_HARNESS_HPP
