// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_BWE_SYSTEM_HPP
#define SCHNAK_BWE_SYSTEM_HPP

#include <memory>

#include "schnak/fem.hpp"
#include "schnak/model.hpp"
#include "schnak/saddle.hpp"
#include "schnak/trajectory.hpp"

namespace schnak
{

//
// Linearized backward Euler optimality system around lin. States and adjoints are unknown
// at steps 1..N_t - 1 (N_t - 1 time blocks); (p^0, q^0) and (u^{N_t}, v^{N_t}) decouple and
// are solved afterwards. Requires N_t >= 2 and lin.u[0], lin.v[0] equal to the initial data.
//
SaddleSystem AssembleBwe(const SchnakenbergParams &params, std::shared_ptr<const P1Space> space,
                         const Trajectory &lin, const ProblemData &data);

// Solves the two decoupled 2x2 block systems by sparse LU.
void RecoverBweBoundary(const SaddleSystem &sys, Trajectory &traj);

Trajectory UnpackBwe(const SaddleSystem &sys, const SchnakenbergParams &params,
                     const ProblemData &data, const Vector &w);

}  // namespace schnak

#endif  // SCHNAK_BWE_SYSTEM_HPP
