// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/minres.hpp"

#include <cmath>
#include <limits>

#include "schnak/errors.hpp"

namespace schnak
{

MinresResult Minres(const LinearOperator &A, const LinearOperator &precond, const Vector &b,
                    const MinresOptions &options, const Vector *x0)
{
  const Index n = A.size();
  if (b.size() != n || precond.size() != n || (x0 && x0->size() != n))
  {
    throw InvalidArgument("minres: dimension mismatch");
  }
  if (!b.allFinite())
  {
    throw NumericDomainError("minres: right-hand side is not finite");
  }

  MinresResult res;
  res.x = x0 ? *x0 : Vector::Zero(n);

  Vector y(n);
  precond.Apply(b, y);
  const double bnorm2 = b.dot(y);
  if (bnorm2 < 0.0)
  {
    res.status = MinresStatus::kBreakdown;
    return res;
  }
  const double bnorm = std::sqrt(bnorm2);
  if (bnorm == 0.0)
  {
    res.x.setZero();
    res.residual_history.push_back(0.0);
    return res;
  }

  Vector r1 = b;
  if (x0)
  {
    Vector Ax(n);
    A.Apply(res.x, Ax);
    r1 -= Ax;
    precond.Apply(r1, y);
  }
  const double beta1_sq = r1.dot(y);
  if (beta1_sq < 0.0)
  {
    res.status = MinresStatus::kBreakdown;
    return res;
  }
  double beta = std::sqrt(beta1_sq);
  res.residual_history.push_back(beta);
  res.relative_residual = beta / bnorm;
  if (res.relative_residual <= options.tol)
  {
    return res;
  }

  const double eps = std::numeric_limits<double>::epsilon();
  double oldb = 0.0, dbar = 0.0, epsln = 0.0, phibar = beta;
  double cs = -1.0, sn = 0.0;
  Vector r2 = r1;
  Vector v(n), w = Vector::Zero(n), w1(n), w2 = Vector::Zero(n);

  res.status = MinresStatus::kMaxIterations;
  for (int itn = 1; itn <= options.max_iterations; ++itn)
  {
    v = y / beta;
    A.Apply(v, y);
    if (itn >= 2)
    {
      y -= (beta / oldb) * r1;
    }
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    precond.Apply(r2, y);
    oldb = beta;
    const double beta_sq = r2.dot(y);
    if (beta_sq < 0.0)
    {
      res.iterations = itn - 1;
      res.status = MinresStatus::kBreakdown;
      return res;
    }
    beta = std::sqrt(beta_sq);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), eps);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    res.x += phi * w;

    res.iterations = itn;
    res.residual_history.push_back(phibar);
    res.relative_residual = phibar / bnorm;
    if (res.relative_residual <= options.tol)
    {
      res.status = MinresStatus::kConverged;
      break;
    }
    if (beta < options.breakdown_tol)
    {
      res.status = MinresStatus::kBreakdown;
      break;
    }
  }
  return res;
}

}  // namespace schnak
