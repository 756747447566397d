// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_SRC_LINEARIZATION_HPP
#define SCHNAK_SRC_LINEARIZATION_HPP

#include <algorithm>
#include <limits>

#include "schnak/fem.hpp"
#include "schnak/model.hpp"

namespace schnak::detail
{

//
// Newton linearization of the reaction terms around one state (u_k, v_k):
//   L1 = D_u/2 K + gamma/2 M - gamma M_{uv},  L2 = D_v/2 K + gamma/2 M_{u^2},
//   d  = int 2 gamma u^2 v phi.
//
struct StepLinearization
{
  CsrMatrix muv, mu2, l1, l2;
  Vector d;
};

inline StepLinearization LinearizeStep(const P1Space &space, const SchnakenbergParams &prm,
                                       const NodalField &u, const NodalField &v)
{
  StepLinearization s;
  s.muv = space.WeightedMass({&u, &v});
  s.mu2 = space.WeightedMass({&u, &u});
  s.l1 = Combine(0.5 * prm.D_u, space.stiffness(), 0.5 * prm.gamma, space.mass(), -prm.gamma,
                 s.muv);
  s.l2 = Combine(0.5 * prm.D_v, space.stiffness(), 0.5 * prm.gamma, s.mu2);
  s.d = 2.0 * prm.gamma * space.ProductLoad({&u, &u, &v});
  return s;
}

// Upper bound of u(x) v(x) over the domain for P1 fields: on each triangle the product is a
// convex combination of the nodal products u_a v_b.
inline double MaxProduct(const MeshP1 &mesh, const NodalField &u, const NodalField &v)
{
  double m = -std::numeric_limits<double>::infinity();
  for (const auto &tri : mesh.triangles())
  {
    for (Index a : tri)
    {
      for (Index b : tri)
      {
        m = std::max(m, u[a] * v[b]);
      }
    }
  }
  return m;
}

// Mass shift that lifts a block whose M-relative spectrum is bounded below by lower to at
// least half the mass matrix.
inline double SpdShift(double lower) { return lower < 0.5 ? 0.5 - lower : 0.0; }

}  // namespace schnak::detail

#endif  // SCHNAK_SRC_LINEARIZATION_HPP
