// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_SQP_DRIVER_HPP
#define SCHNAK_SQP_DRIVER_HPP

#include <functional>
#include <memory>
#include <vector>

#include "schnak/fem.hpp"
#include "schnak/minres.hpp"
#include "schnak/model.hpp"
#include "schnak/multigrid.hpp"
#include "schnak/saddle.hpp"
#include "schnak/trajectory.hpp"

namespace schnak
{

struct SqpConfig
{
  double tol_sqp = 1e-5;
  double tol_minres = 1e-9;
  int max_sqp_iters = 20;
  int max_minres_iters = 1000;
  // Factor applied to interpolated solutions between mesh levels.
  double continuation_scale = 0.8;
  // Factor applied to the targets for the backward Euler coarsest-level state guess.
  double bwe_guess_scale = 0.4;
  PreconditionerOptions precond;

  // Throws InvalidArgument for non-positive tolerances or iteration limits.
  void Validate() const;
};

struct SqpIteration
{
  int minres_iterations = 0;
  double minres_residual = 0.0;
  MinresStatus minres_status = MinresStatus::kConverged;
  std::vector<double> residual_history;
  // Largest relative change over the families u, v, p, q.
  double change = 0.0;
  // Assembly, preconditioner setup and MINRES time of this iteration.
  double seconds = 0.0;
};

struct SqpStats
{
  std::vector<SqpIteration> iterations;
  bool converged = false;
  // True when some MINRES solve stopped without reaching its tolerance.
  bool minres_failures = false;

  int sqp_iterations() const { return static_cast<int>(iterations.size()); }
  double mean_minres() const;
  double seconds() const;
};

using SqpObserver = std::function<void(int iteration, const SqpIteration &)>;

// Saddle system of the given scheme linearized around lin.
SaddleSystem AssembleSaddle(const SchnakenbergParams &params, std::shared_ptr<const P1Space> space,
                            const Trajectory &lin, const ProblemData &data);
// Trajectory from a saddle solution, including boundary steps and controls.
Trajectory UnpackSaddle(const SaddleSystem &sys, const SchnakenbergParams &params,
                        const ProblemData &data, const Vector &w);

// Largest relative l2 change over the state and adjoint families.
double RelativeChange(const Trajectory &next, const Trajectory &prev);

//
// SQP loop from the initial trajectory. Each iteration freezes the linearization, solves
// the saddle system by preconditioned MINRES warm-started from the current iterate, and
// stops once RelativeChange <= tol_sqp. Throws DivergedError when an iterate is not finite.
//
struct SqpResult
{
  Trajectory solution;
  SqpStats stats;
};
SqpResult RunSqp(const SchnakenbergParams &params, std::shared_ptr<const P1Space> space,
                 const Trajectory &initial, const ProblemData &data, const SqpConfig &cfg,
                 std::shared_ptr<const MgTransfer> transfer = nullptr,
                 const SqpObserver &observer = {});

// Prolongs prev to the fine mesh, interpolates linearly in time onto the fine grid of
// fine_nt steps (adjoints on their own time points) and multiplies every field by scale.
Trajectory ContinuationGuess(const Trajectory &prev, const MeshP1 &coarse, const MeshP1 &fine,
                             int fine_nt, double scale);

// States from the targets (scaled by bwe_scale for backward Euler), zero adjoints and
// controls.
Trajectory CoarsestGuess(Scheme scheme, const ProblemData &data, double T,
                         double bwe_scale = SqpConfig{}.bwe_guess_scale);

}  // namespace schnak

#endif  // SCHNAK_SQP_DRIVER_HPP
