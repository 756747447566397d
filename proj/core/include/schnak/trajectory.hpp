// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_TRAJECTORY_HPP
#define SCHNAK_TRAJECTORY_HPP

#include <string>
#include <vector>

#include "schnak/mesh.hpp"
#include "schnak/model.hpp"

namespace schnak
{

enum class Scheme
{
  kStormerVerlet,
  kBackwardEuler,
};

std::string SchemeName(Scheme s);
// Accepts "sv" and "bwe"; throws InvalidArgument otherwise.
Scheme ParseScheme(const std::string &name);

//
// Space-time fields of one SQP iterate.
//
// States u, v live at integer steps 0..N_t. Adjoints p, q and controls a, b share one
// time grid of N_t + 1 points given by AdjointTime(k):
//   Stormer-Verlet: k = 0 is t = 0 (the recovered p^0), k >= 1 is the half step
//                   t = (k - 1/2) tau, so the final condition p(T) = 0 is implicit.
//   Backward Euler: k is the integer step t = k tau; p[N_t] = 0.
//
struct Trajectory
{
  Scheme scheme = Scheme::kStormerVerlet;
  int nt = 0;
  double T = 1.0;
  std::vector<NodalField> u, v;
  std::vector<NodalField> p, q;
  std::vector<NodalField> a, b;

  static Trajectory Zeros(Scheme scheme, int nt, double T, Index nx);

  double tau() const { return T / nt; }
  Index nx() const { return u.empty() ? 0 : u.front().size(); }
  double StateTime(int i) const { return i * tau(); }
  double AdjointTime(int k) const;

  // Throws InvalidArgument when field counts or lengths are inconsistent.
  void Validate() const;
};

// a = (gamma / beta1) p and b = (gamma / beta2) q at every adjoint time point.
void RecoverControls(Trajectory &traj, const SchnakenbergParams &params);

// Desired states, optional sources and initial data of one identification problem.
struct ProblemData
{
  // Nodal targets at integer steps 0..N_t.
  std::vector<NodalField> u_hat, v_hat;
  // Optional nodal sources at integer steps 0..N_t (empty means zero).
  std::vector<NodalField> f, g;
  NodalField u0, v0;

  bool has_sources() const { return !f.empty(); }
  void Validate(int nt, Index nx) const;
};

}  // namespace schnak

#endif  // SCHNAK_TRAJECTORY_HPP
