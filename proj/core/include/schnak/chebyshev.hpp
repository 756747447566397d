// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_CHEBYSHEV_HPP
#define SCHNAK_CHEBYSHEV_HPP

#include "schnak/sparse.hpp"

namespace schnak
{

//
// Chebyshev semi-iteration for mass-matrix solves. Works on the symmetrically scaled
// matrix D^{-1/2} M D^{-1/2}, D = diag(M), whose spectrum is assumed to lie in
// [lambda_min, lambda_max] (for P1 mass matrices [0.5, 2]). With a fixed iteration
// count and a zero initial guess, Apply is a fixed symmetric positive definite
// polynomial approximation of M^{-1}.
//
class ChebyshevMassSolver
{
public:
  explicit ChebyshevMassSolver(const CsrMatrix &M, int iterations = 20, double lambda_min = 0.5,
                               double lambda_max = 2.0);

  Index size() const { return scaled_.rows(); }
  int iterations() const { return iterations_; }

  // z = C_k r.
  void Apply(const Vector &r, Vector &z) const;
  Vector Apply(const Vector &r) const
  {
    Vector z;
    Apply(r, z);
    return z;
  }

  // 2 sigma^k / (1 + sigma^{2k}) with sigma = (sqrt(kappa) - 1) / (sqrt(kappa) + 1): bound
  // on the relative error in the M-norm after k iterations.
  static double ErrorBound(int k, double lambda_min = 0.5, double lambda_max = 2.0);

private:
  CsrMatrix scaled_;
  Vector dinv_sqrt_;
  int iterations_;
  double theta_, delta_;
};

// One-shot form: builds the scaled operator and applies it.
Vector ChebyshevMassApply(const CsrMatrix &M, const Vector &r, int k = 20);

}  // namespace schnak

#endif  // SCHNAK_CHEBYSHEV_HPP
