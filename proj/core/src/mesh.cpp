// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schnak/errors.hpp"

namespace schnak
{

namespace
{

struct CellLocation
{
  int ci, cj;     // cell indices
  double xi, eta; // local coordinates in [0, 1]^2
};

CellLocation Locate(int n, double x1, double x2)
{
  const double s1 = std::clamp(x1, 0.0, 1.0) * n;
  const double s2 = std::clamp(x2, 0.0, 1.0) * n;
  int ci = std::min(static_cast<int>(std::floor(s1)), n - 1);
  int cj = std::min(static_cast<int>(std::floor(s2)), n - 1);
  return {ci, cj, s1 - ci, s2 - cj};
}

// Barycentric weights of the three cell corners (v00, v10 or v01, v11) involved.
struct CellWeights
{
  std::array<Index, 3> nodes;
  std::array<double, 3> w;
};

CellWeights Weights(const MeshP1 &mesh, double x1, double x2)
{
  const auto [ci, cj, xi, eta] = Locate(mesh.n(), x1, x2);
  const Index v00 = mesh.node(ci, cj);
  const Index v10 = mesh.node(ci + 1, cj);
  const Index v01 = mesh.node(ci, cj + 1);
  const Index v11 = mesh.node(ci + 1, cj + 1);
  if (xi >= eta)
  {
    return {{v00, v10, v11}, {1.0 - xi, xi - eta, eta}};
  }
  return {{v00, v11, v01}, {1.0 - eta, xi, eta - xi}};
}

}  // namespace

MeshP1::MeshP1(int n) : n_(n), h_(0.0)
{
  if (n < 1)
  {
    throw InvalidArgument("build_mesh: n must be >= 1, got " + std::to_string(n));
  }
  h_ = 1.0 / n;
  coords_.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
  {
    for (int i = 0; i <= n; ++i)
    {
      coords_.push_back({i * h_, j * h_});
      if (i == 0 || j == 0 || i == n || j == n)
      {
        boundary_nodes_.push_back(node(i, j));
      }
    }
  }
  triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
  {
    for (int i = 0; i < n; ++i)
    {
      const Index v00 = node(i, j), v10 = node(i + 1, j);
      const Index v01 = node(i, j + 1), v11 = node(i + 1, j + 1);
      triangles_.push_back({v00, v10, v11});
      triangles_.push_back({v00, v11, v01});
    }
  }
}

double MeshP1::Evaluate(const NodalField &f, double x1, double x2) const
{
  const auto cw = Weights(*this, x1, x2);
  return cw.w[0] * f[cw.nodes[0]] + cw.w[1] * f[cw.nodes[1]] + cw.w[2] * f[cw.nodes[2]];
}

double MeshP1::SignedArea(Index t) const
{
  const auto &tri = triangles_[t];
  const auto &a = coords_[tri[0]];
  const auto &b = coords_[tri[1]];
  const auto &c = coords_[tri[2]];
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

MeshP1 BuildMesh(int n) { return MeshP1(n); }

NodalField InterpolateNodal(const MeshP1 &mesh, const std::function<double(double, double)> &g)
{
  NodalField f(mesh.num_nodes());
  const auto &x = mesh.coords();
  for (Index r = 0; r < mesh.num_nodes(); ++r)
  {
    f[r] = g(x[r][0], x[r][1]);
    if (!std::isfinite(f[r]))
    {
      throw NumericDomainError("interpolate_nodal: non-finite value at node " +
                               std::to_string(r));
    }
  }
  return f;
}

CsrMatrix InterpolationMatrix(const MeshP1 &coarse, const MeshP1 &fine)
{
  std::vector<Eigen::Triplet<double, Index>> t;
  t.reserve(3 * fine.num_nodes());
  for (Index r = 0; r < fine.num_nodes(); ++r)
  {
    const auto &x = fine.coords()[r];
    const auto cw = Weights(coarse, x[0], x[1]);
    for (int k = 0; k < 3; ++k)
    {
      if (cw.w[k] != 0.0)
      {
        t.emplace_back(r, cw.nodes[k], cw.w[k]);
      }
    }
  }
  return CsrMatrix::FromTriplets(fine.num_nodes(), coarse.num_nodes(), t);
}

NodalField Prolong(const MeshP1 &coarse, const MeshP1 &fine, const NodalField &field)
{
  if (fine.n() % coarse.n() != 0)
  {
    throw InvalidArgument("prolong: fine mesh is not nested in coarse mesh");
  }
  if (field.size() != coarse.num_nodes())
  {
    throw InvalidArgument("prolong: field length does not match coarse mesh");
  }
  NodalField out(fine.num_nodes());
  for (Index r = 0; r < fine.num_nodes(); ++r)
  {
    const auto &x = fine.coords()[r];
    out[r] = coarse.Evaluate(field, x[0], x[1]);
  }
  return out;
}

NodalField Restrict(const MeshP1 &fine, const MeshP1 &coarse, const NodalField &field)
{
  if (fine.n() % coarse.n() != 0)
  {
    throw InvalidArgument("restrict: fine mesh is not nested in coarse mesh");
  }
  if (field.size() != fine.num_nodes())
  {
    throw InvalidArgument("restrict: field length does not match fine mesh");
  }
  const int m = fine.n() / coarse.n();
  NodalField out(coarse.num_nodes());
  for (int j = 0; j <= coarse.n(); ++j)
  {
    for (int i = 0; i <= coarse.n(); ++i)
    {
      out[coarse.node(i, j)] = field[fine.node(i * m, j * m)];
    }
  }
  return out;
}

}  // namespace schnak
