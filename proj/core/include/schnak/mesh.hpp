// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef SCHNAK_MESH_HPP
#define SCHNAK_MESH_HPP

#include <array>
#include <functional>
#include <vector>

#include "schnak/sparse.hpp"

namespace schnak
{

// P1 coefficients of one scalar field, one entry per mesh node.
using NodalField = Vector;

//
// Structured triangulation of the unit square with n cells per side.
//
// Node (i, j) at (i h, j h) has index j (n + 1) + i, i.e. lexicographic with x1 running
// fastest. Every cell is split along its bottom-left to top-right diagonal into the
// counter-clockwise triangles (v00, v10, v11) and (v00, v11, v01).
//
class MeshP1
{
public:
  explicit MeshP1(int n);

  int n() const { return n_; }
  double h() const { return h_; }
  Index num_nodes() const { return static_cast<Index>(coords_.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles_.size()); }

  const std::vector<std::array<double, 2>> &coords() const { return coords_; }
  const std::vector<std::array<Index, 3>> &triangles() const { return triangles_; }
  const std::vector<Index> &boundary_nodes() const { return boundary_nodes_; }

  Index node(int i, int j) const { return static_cast<Index>(j) * (n_ + 1) + i; }

  // Value at x of the P1 function with nodal coefficients f.
  double Evaluate(const NodalField &f, double x1, double x2) const;

  // Signed area of triangle t (always h^2 / 2 on this mesh).
  double SignedArea(Index t) const;

private:
  int n_;
  double h_;
  std::vector<std::array<double, 2>> coords_;
  std::vector<std::array<Index, 3>> triangles_;
  std::vector<Index> boundary_nodes_;
};

// Equivalent to constructing MeshP1(n); throws InvalidArgument for n < 1.
MeshP1 BuildMesh(int n);

// values[r] = g(coords[r]); throws NumericDomainError if g returns a non-finite value.
NodalField InterpolateNodal(const MeshP1 &mesh, const std::function<double(double, double)> &g);

// Matrix mapping coarse nodal values to the coarse P1 interpolant evaluated at the fine
// nodes. Works for any pair of structured meshes; exact transfer needs nesting.
CsrMatrix InterpolationMatrix(const MeshP1 &coarse, const MeshP1 &fine);

// P1 interpolation of a coarse field onto a nested fine mesh (fine.n a multiple of
// coarse.n, else InvalidArgument).
NodalField Prolong(const MeshP1 &coarse, const MeshP1 &fine, const NodalField &field);

// Injection at coincident nodes (fine.n a multiple of coarse.n).
NodalField Restrict(const MeshP1 &fine, const MeshP1 &coarse, const NodalField &field);

}  // namespace schnak

#endif  // SCHNAK_MESH_HPP
