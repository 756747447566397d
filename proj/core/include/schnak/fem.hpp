// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_FEM_HPP
#define SCHNAK_FEM_HPP

#include <array>
#include <initializer_list>
#include <vector>

#include "schnak/mesh.hpp"
#include "schnak/sparse.hpp"

namespace schnak
{

//
// P1 finite element space on a MeshP1 with a cached sparsity pattern.
//
// All matrices produced here (mass, stiffness, weighted mass) share one pattern, so
// sums like M + tau * L are value-array operations. Coefficients of weighted mass
// matrices and nonlinear load vectors are products of P1 interpolants evaluated at the
// points of a 6-point degree-4 triangle rule, which integrates P1^4 integrands exactly.
//
class P1Space
{
public:
  explicit P1Space(MeshP1 mesh);

  const MeshP1 &mesh() const { return mesh_; }
  Index size() const { return mesh_.num_nodes(); }
  const std::shared_ptr<const CsrPattern> &pattern() const { return pattern_; }

  const CsrMatrix &mass() const { return mass_; }
  const CsrMatrix &stiffness() const { return stiffness_; }

  // [M_c]_{rs} = int c phi_r phi_s with c the product of the given P1 fields (up to
  // two factors). An empty list gives the plain mass matrix.
  CsrMatrix WeightedMass(std::initializer_list<const NodalField *> factors) const;

  // [b]_r = int (prod of factors) phi_r for up to three P1 factors.
  Vector ProductLoad(std::initializer_list<const NodalField *> factors) const;

  // Consistent-mass load M f of a nodal interpolant.
  Vector Load(const NodalField &f) const;

  // Empty matrix on the shared pattern.
  CsrMatrix Zero() const { return CsrMatrix(pattern_); }

private:
  void CheckFactors(const std::vector<const NodalField *> &f, std::size_t max) const;

  MeshP1 mesh_;
  std::shared_ptr<const CsrPattern> pattern_;
  // For each triangle, the value-array positions of its 3x3 local entries.
  std::vector<std::array<Index, 9>> element_slots_;
  CsrMatrix mass_;
  CsrMatrix stiffness_;
};

// Free-function forms of the assembly operations.
CsrMatrix AssembleMass(const MeshP1 &mesh);
CsrMatrix AssembleStiffness(const MeshP1 &mesh);
CsrMatrix AssembleWeightedMass(const MeshP1 &mesh, const NodalField &coeff);
Vector AssembleLoad(const MeshP1 &mesh, const NodalField &f);

// Points (barycentric) and weights (summing to 1) of the 6-point degree-4 rule.
struct TriangleQuadrature
{
  std::array<std::array<double, 3>, 6> points;
  std::array<double, 6> weights;
};
const TriangleQuadrature &Degree4Rule();

}  // namespace schnak

#endif  // SCHNAK_FEM_HPP
