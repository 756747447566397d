// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_MINRES_HPP
#define SCHNAK_MINRES_HPP

#include <vector>

#include "schnak/linear_operator.hpp"

namespace schnak
{

enum class MinresStatus
{
  kConverged,
  kMaxIterations,
  // Lanczos recurrence hit beta < 1e-30 before the tolerance was met, or the
  // preconditioner produced a negative inner product (not SPD).
  kBreakdown,
};

struct MinresOptions
{
  double tol = 1e-9;
  int max_iterations = 1000;
  double breakdown_tol = 1e-30;
};

struct MinresResult
{
  Vector x;
  int iterations = 0;
  // ||b - A x||_{P^{-1}} / ||b||_{P^{-1}} as tracked by the recurrence.
  double relative_residual = 0.0;
  MinresStatus status = MinresStatus::kConverged;
  // Preconditioned residual norm after each iteration (index 0 is the initial one).
  std::vector<double> residual_history;
};

//
// Preconditioned MINRES (Paige-Saunders) for symmetric A with SPD preconditioner.
// precond applies an approximation of A^{-1}. Stops when the preconditioned residual
// norm drops below tol * ||b||_{P^{-1}}. x0 is an optional warm start.
//
MinresResult Minres(const LinearOperator &A, const LinearOperator &precond, const Vector &b,
                    const MinresOptions &options, const Vector *x0 = nullptr);

}  // namespace schnak

#endif  // SCHNAK_MINRES_HPP
