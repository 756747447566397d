// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_FORWARD_SIM_HPP
#define SCHNAK_FORWARD_SIM_HPP

#include <utility>
#include <vector>

#include "schnak/fem.hpp"
#include "schnak/mesh.hpp"

namespace schnak
{

// Constant controls used to generate Turing-pattern targets.
inline constexpr double kTargetA = 0.126779;
inline constexpr double kTargetB = 0.792366;

struct ForwardConfig
{
  double a = kTargetA;
  double b = kTargetB;
  // Reaction strength; no default, the caller must choose it.
  double gamma = 0.0;
  double D_u = 1.0;
  double D_v = 10.0;
  int n = 20;
  double T = 5.0;
  double dt = 1e-3;
  // Gaussian bump added to u*: amplitude * exp(-width ((x1 - cx)^2 + (x2 - cy)^2)).
  double amplitude = 1e-3;
  double width = 100.0;
  double cx = 1.0 / 3.0;
  double cy = 0.5;
  // Times at which (u, v) is recorded; T is always recorded.
  std::vector<double> snapshot_times;

  // Throws InvalidArgument for non-positive coefficients, dt * gamma >= 1, or a step that
  // amplifies spatially constant perturbations of the steady state.
  void Validate() const;
};

// Homogeneous steady state with the localized bump on u; v is the constant v*.
std::pair<NodalField, NodalField> GarvieInit(const ForwardConfig &cfg, const MeshP1 &mesh);

struct Snapshot
{
  double t = 0.0;
  NodalField u;
  NodalField v;
  // Integrals of u and v over the domain.
  double mass_u = 0.0;
  double mass_v = 0.0;
};

struct ForwardResult
{
  // Ordered by time; the last entry is at T.
  std::vector<Snapshot> snapshots;
  long steps = 0;
};

//
// First-order IMEX integration from (u0, v0): diffusion and the linear decay implicit,
// nonlinear reaction and controls explicit,
//   ((1 + dt gamma) M + dt D_u K) u^{n+1} = M (u^n + dt gamma (a + (u^n)^2 v^n)),
//   (M + dt D_v K) v^{n+1} = M (v^n + dt gamma (b - (u^n)^2 v^n)).
// Throws DivergedError naming the step once a nodal value is non-finite or exceeds 1e6.
//
ForwardResult Simulate(const ForwardConfig &cfg, const P1Space &space, const NodalField &u0,
                       const NodalField &v0);
// Same, starting from GarvieInit.
ForwardResult Simulate(const ForwardConfig &cfg, const P1Space &space);

// Linear ramp in time from zero to the snapshot: target^i = (i / nt) snapshot, i = 0..nt.
std::vector<NodalField> BuildTargets(const NodalField &snapshot, int nt);

}  // namespace schnak

#endif  // SCHNAK_FORWARD_SIM_HPP
