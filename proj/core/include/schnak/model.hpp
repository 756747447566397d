// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_MODEL_HPP
#define SCHNAK_MODEL_HPP

#include <utility>

namespace schnak
{

// Parameters of the tracking-type identification problem on the Schnakenberg system.
struct SchnakenbergParams
{
  double D_u = 1.0;
  double D_v = 10.0;
  double gamma = 2.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  double beta1 = 1e-2;
  double beta2 = 1e-2;
  double T = 1.0;
  int N_t = 50;

  double tau() const { return T / N_t; }

  // Throws InvalidArgument if any coefficient is non-positive or N_t < 1.
  void Validate() const;
};

struct Reaction
{
  double phi;
  double psi;
};

// Phi = gamma (u - u^2 v), Psi = gamma u^2 v.
Reaction ReactionTerms(double u, double v, double gamma);

// First and second partial derivatives of Phi and Psi.
struct ReactionDerivatives
{
  double phi_u, phi_v, psi_u, psi_v;
  double phi_uu, phi_uv, phi_vv, psi_uu, psi_uv, psi_vv;
};
ReactionDerivatives ReactionJacobian(double u, double v, double gamma);

// Homogeneous steady state of u_t = gamma (a - u + u^2 v), v_t = gamma (b - u^2 v):
// u* = a + b, v* = b / (a + b)^2. Throws InvalidArgument for a + b <= 0.
std::pair<double, double> SteadyState(double a, double b);

struct StateAdjoint
{
  double u, v, p, q;
};

//
// Closed-form solution used for convergence studies. With
// kappa = cos(2 pi x1) cos(2 pi x2) and eta = cos(pi x1) cos(pi x2):
//   u = e^{0.1 t} (kappa + 1),                 v = e^{0.15 t} (eta + 1),
//   p = (e^{0.1 t} - e^{0.1 T}) (kappa + 1),   q = (e^{0.15 t} - e^{0.15 T}) (eta + 1).
// Targets and source terms are chosen so that this quadruple solves the full
// first-order optimality system with alpha := alpha1 = alpha2, beta := beta1 = beta2.
//
class ManufacturedCase
{
public:
  explicit ManufacturedCase(const SchnakenbergParams &params);

  static double Kappa(double x1, double x2);
  static double Eta(double x1, double x2);

  StateAdjoint Eval(double t, double x1, double x2) const;
  // Desired states (u_hat, v_hat).
  std::pair<double, double> Targets(double t, double x1, double x2) const;
  // Sources (f, g) added to the right-hand sides of the u and v state equations.
  std::pair<double, double> Sources(double t, double x1, double x2) const;

  const SchnakenbergParams &params() const { return params_; }

private:
  SchnakenbergParams params_;
  double alpha_;
  double beta_;
};

}  // namespace schnak

#endif  // SCHNAK_MODEL_HPP
