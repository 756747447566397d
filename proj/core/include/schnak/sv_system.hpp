// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_SV_SYSTEM_HPP
#define SCHNAK_SV_SYSTEM_HPP

#include <memory>

#include "schnak/fem.hpp"
#include "schnak/model.hpp"
#include "schnak/saddle.hpp"
#include "schnak/trajectory.hpp"

namespace schnak
{

//
// Linearized Stormer-Verlet optimality system around the iterate lin. States are unknown at
// steps 1..N_t and adjoints at the half steps 1/2..N_t - 1/2, so the system has N_t time
// blocks. lin.u[0], lin.v[0] must hold the initial data.
//
SaddleSystem AssembleSv(const SchnakenbergParams &params, std::shared_ptr<const P1Space> space,
                        const Trajectory &lin, const ProblemData &data);

// (p^0, q^0) from the first adjoint half step of a solved trajectory.
void RecoverBoundaryAdjoints(const SaddleSystem &sys, Trajectory &traj);

// Trajectory from the saddle solution w = [-p; u]: unpacks the interior unknowns, sets the
// initial data, recovers (p^0, q^0) and the controls.
Trajectory UnpackSv(const SaddleSystem &sys, const SchnakenbergParams &params,
                    const ProblemData &data, const Vector &w);

}  // namespace schnak

#endif  // SCHNAK_SV_SYSTEM_HPP
