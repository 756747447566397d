// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/chebyshev.hpp"

#include <cmath>

#include "schnak/errors.hpp"

namespace schnak
{

ChebyshevMassSolver::ChebyshevMassSolver(const CsrMatrix &M, int iterations, double lambda_min,
                                         double lambda_max)
  : scaled_(M), iterations_(iterations), theta_(0.5 * (lambda_max + lambda_min)),
    delta_(0.5 * (lambda_max - lambda_min))
{
  if (iterations < 1)
  {
    throw InvalidArgument("chebyshev: iteration count must be >= 1");
  }
  if (!(lambda_min > 0.0 && lambda_max > lambda_min))
  {
    throw InvalidArgument("chebyshev: need 0 < lambda_min < lambda_max");
  }
  const Vector d = M.Diagonal();
  if (d.size() != M.rows() || M.rows() != M.cols())
  {
    throw InvalidArgument("chebyshev: matrix must be square");
  }
  if (!(d.minCoeff() > 0.0))
  {
    throw InvalidArgument("chebyshev: matrix diagonal must be positive");
  }
  dinv_sqrt_ = d.cwiseSqrt().cwiseInverse();

  // Scale values in place: S_ij = M_ij / sqrt(d_i d_j).
  const auto &pat = scaled_.pattern();
  auto &vals = scaled_.values();
  for (Index i = 0; i < pat.rows; ++i)
  {
    for (Index k = pat.row_ptr[i]; k < pat.row_ptr[i + 1]; ++k)
    {
      vals[k] *= dinv_sqrt_[i] * dinv_sqrt_[pat.col_idx[k]];
    }
  }
}

void ChebyshevMassSolver::Apply(const Vector &r, Vector &z) const
{
  const Index n = size();
  if (r.size() != n)
  {
    throw InvalidArgument("chebyshev: vector length mismatch");
  }
  // Three-term recurrence (Saad, Alg. 12.1) with identity preconditioner on S y = D^{-1/2} r.
  Vector res = r.cwiseProduct(dinv_sqrt_);
  Vector y = Vector::Zero(n);
  Vector d = res / theta_;
  Vector Sd(n);
  const double sigma1 = theta_ / delta_;
  double rho = 1.0 / sigma1;
  for (int k = 0; k < iterations_; ++k)
  {
    y += d;
    if (k + 1 == iterations_)
    {
      break;
    }
    scaled_.Mult(d.data(), Sd.data());
    res -= Sd;
    const double rho_next = 1.0 / (2.0 * sigma1 - rho);
    d = (rho_next * rho) * d + (2.0 * rho_next / delta_) * res;
    rho = rho_next;
  }
  z = y.cwiseProduct(dinv_sqrt_);
}

double ChebyshevMassSolver::ErrorBound(int k, double lambda_min, double lambda_max)
{
  const double sk = std::sqrt(lambda_max / lambda_min);
  const double sigma = (sk - 1.0) / (sk + 1.0);
  const double sigk = std::pow(sigma, k);
  return 2.0 * sigk / (1.0 + sigk * sigk);
}

Vector ChebyshevMassApply(const CsrMatrix &M, const Vector &r, int k)
{
  return ChebyshevMassSolver(M, k).Apply(r);
}

}  // namespace schnak
