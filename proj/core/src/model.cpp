// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/model.hpp"

#include <cmath>
#include <numbers>

#include "schnak/errors.hpp"

namespace schnak
{

void SchnakenbergParams::Validate() const
{
  if (!(D_u > 0 && D_v > 0 && gamma > 0 && alpha1 > 0 && alpha2 > 0 && beta1 > 0 &&
        beta2 > 0 && T > 0))
  {
    throw InvalidArgument("Schnakenberg parameters must be positive");
  }
  if (N_t < 1)
  {
    throw InvalidArgument("N_t must be >= 1");
  }
}

Reaction ReactionTerms(double u, double v, double gamma)
{
  const double u2v = u * u * v;
  return {gamma * (u - u2v), gamma * u2v};
}

ReactionDerivatives ReactionJacobian(double u, double v, double gamma)
{
  ReactionDerivatives d;
  d.phi_u = gamma * (1.0 - 2.0 * u * v);
  d.phi_v = -gamma * u * u;
  d.psi_u = 2.0 * gamma * u * v;
  d.psi_v = gamma * u * u;
  d.phi_uu = -2.0 * gamma * v;
  d.phi_uv = -2.0 * gamma * u;
  d.phi_vv = 0.0;
  d.psi_uu = 2.0 * gamma * v;
  d.psi_uv = 2.0 * gamma * u;
  d.psi_vv = 0.0;
  return d;
}

std::pair<double, double> SteadyState(double a, double b)
{
  const double s = a + b;
  if (!(s > 0.0))
  {
    throw InvalidArgument("steady_state: a + b must be positive");
  }
  return {s, b / (s * s)};
}

ManufacturedCase::ManufacturedCase(const SchnakenbergParams &params)
  : params_(params), alpha_(params.alpha1), beta_(params.beta1)
{
  if (params.alpha1 != params.alpha2 || params.beta1 != params.beta2)
  {
    throw InvalidArgument("manufactured case requires alpha1 == alpha2 and beta1 == beta2");
  }
}

double ManufacturedCase::Kappa(double x1, double x2)
{
  using std::numbers::pi;
  return std::cos(2.0 * pi * x1) * std::cos(2.0 * pi * x2);
}

double ManufacturedCase::Eta(double x1, double x2)
{
  using std::numbers::pi;
  return std::cos(pi * x1) * std::cos(pi * x2);
}

StateAdjoint ManufacturedCase::Eval(double t, double x1, double x2) const
{
  const double k1 = Kappa(x1, x2) + 1.0;
  const double e1 = Eta(x1, x2) + 1.0;
  const double T = params_.T;
  return {std::exp(0.1 * t) * k1, std::exp(0.15 * t) * e1,
          (std::exp(0.1 * t) - std::exp(0.1 * T)) * k1,
          (std::exp(0.15 * t) - std::exp(0.15 * T)) * e1};
}

std::pair<double, double> ManufacturedCase::Targets(double t, double x1, double x2) const
{
  using std::numbers::pi;
  const double kappa = Kappa(x1, x2);
  const double eta = Eta(x1, x2);
  const auto s = Eval(t, x1, x2);
  const double g = params_.gamma;
  const double T = params_.T;
  const double u_hat = (-0.1 * std::exp(0.1 * t) * (kappa + 1.0) +
                        8.0 * params_.D_u * pi * pi * (std::exp(0.1 * t) - std::exp(0.1 * T)) * kappa +
                        alpha_ * s.u + 2.0 * g * s.u * s.v * (s.q - s.p) + g * s.p) /
                       alpha_;
  const double v_hat = (-0.15 * std::exp(0.15 * t) * (eta + 1.0) +
                        2.0 * params_.D_v * pi * pi * (std::exp(0.15 * t) - std::exp(0.15 * T)) * eta +
                        alpha_ * s.v + g * s.u * s.u * (s.q - s.p)) /
                       alpha_;
  return {u_hat, v_hat};
}

std::pair<double, double> ManufacturedCase::Sources(double t, double x1, double x2) const
{
  using std::numbers::pi;
  const double kappa = Kappa(x1, x2);
  const double eta = Eta(x1, x2);
  const auto s = Eval(t, x1, x2);
  const double g = params_.gamma;
  const double u2v = s.u * s.u * s.v;
  const double f = (0.1 + g) * s.u + 8.0 * params_.D_u * pi * pi * std::exp(0.1 * t) * kappa -
                   g * u2v - g * g / beta_ * s.p;
  const double gs = 0.15 * s.v + 2.0 * params_.D_v * pi * pi * std::exp(0.15 * t) * eta + g * u2v -
                    g * g / beta_ * s.q;
  return {f, gs};
}

}  // namespace schnak
