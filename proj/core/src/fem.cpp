// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include "schnak/fem.hpp"

#include <algorithm>
#include <set>

#include "schnak/errors.hpp"

namespace schnak
{

const TriangleQuadrature &Degree4Rule()
{
  static const TriangleQuadrature rule = [] {
    constexpr double a1 = 0.44594849091596488632, b1 = 0.10810301816807022736;
    constexpr double w1 = 0.22338158967801146570;
    constexpr double a2 = 0.09157621350977074346, b2 = 0.81684757298045851308;
    constexpr double w2 = 0.10995174365532186764;
    TriangleQuadrature q;
    q.points = {{{a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1}, {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}}};
    q.weights = {w1, w1, w1, w2, w2, w2};
    return q;
  }();
  return rule;
}

namespace
{

std::shared_ptr<const CsrPattern> BuildPattern(const MeshP1 &mesh)
{
  const Index N = mesh.num_nodes();
  std::vector<std::set<Index>> adj(static_cast<std::size_t>(N));
  for (const auto &t : mesh.triangles())
  {
    for (Index a : t)
    {
      for (Index b : t)
      {
        adj[a].insert(b);
      }
    }
  }
  auto p = std::make_shared<CsrPattern>();
  p->rows = p->cols = N;
  p->row_ptr.resize(N + 1, 0);
  for (Index r = 0; r < N; ++r)
  {
    p->row_ptr[r + 1] = p->row_ptr[r] + static_cast<Index>(adj[r].size());
    p->col_idx.insert(p->col_idx.end(), adj[r].begin(), adj[r].end());
  }
  return p;
}

// Gradients of the barycentric coordinates on triangle t and its area.
void Gradients(const MeshP1 &mesh, Index t, std::array<std::array<double, 2>, 3> &g, double &area)
{
  const auto &tri = mesh.triangles()[t];
  const auto &x0 = mesh.coords()[tri[0]];
  const auto &x1 = mesh.coords()[tri[1]];
  const auto &x2 = mesh.coords()[tri[2]];
  const double det = (x1[0] - x0[0]) * (x2[1] - x0[1]) - (x2[0] - x0[0]) * (x1[1] - x0[1]);
  area = 0.5 * det;
  g[0] = {(x1[1] - x2[1]) / det, (x2[0] - x1[0]) / det};
  g[1] = {(x2[1] - x0[1]) / det, (x0[0] - x2[0]) / det};
  g[2] = {(x0[1] - x1[1]) / det, (x1[0] - x0[0]) / det};
}

}  // namespace

P1Space::P1Space(MeshP1 mesh) : mesh_(std::move(mesh)), pattern_(BuildPattern(mesh_))
{
  const Index nt = mesh_.num_triangles();
  element_slots_.resize(nt);
  for (Index t = 0; t < nt; ++t)
  {
    const auto &tri = mesh_.triangles()[t];
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        element_slots_[t][3 * a + b] = pattern_->find(tri[a], tri[b]);
      }
    }
  }

  mass_ = CsrMatrix(pattern_);
  stiffness_ = CsrMatrix(pattern_);
  auto &mv = mass_.values();
  auto &kv = stiffness_.values();
  for (Index t = 0; t < nt; ++t)
  {
    std::array<std::array<double, 2>, 3> g;
    double area;
    Gradients(mesh_, t, g, area);
    for (int a = 0; a < 3; ++a)
    {
      for (int b = 0; b < 3; ++b)
      {
        const Index s = element_slots_[t][3 * a + b];
        mv[s] += area / 12.0 * (a == b ? 2.0 : 1.0);
        kv[s] += area * (g[a][0] * g[b][0] + g[a][1] * g[b][1]);
      }
    }
  }
}

void P1Space::CheckFactors(const std::vector<const NodalField *> &f, std::size_t max) const
{
  if (f.size() > max)
  {
    throw InvalidArgument("too many coefficient factors for exact degree-4 quadrature");
  }
  for (const auto *p : f)
  {
    if (p == nullptr || p->size() != size())
    {
      throw InvalidArgument("coefficient length does not match mesh node count");
    }
  }
}

CsrMatrix P1Space::WeightedMass(std::initializer_list<const NodalField *> factors) const
{
  const std::vector<const NodalField *> f(factors);
  CheckFactors(f, 2);
  if (f.empty())
  {
    return mass_;
  }
  const auto &q = Degree4Rule();
  CsrMatrix W(pattern_);
  auto &wv = W.values();
  const double area = 0.5 * mesh_.h() * mesh_.h();
  for (Index t = 0; t < mesh_.num_triangles(); ++t)
  {
    const auto &tri = mesh_.triangles()[t];
    std::array<double, 9> local{};
    for (int k = 0; k < 6; ++k)
    {
      const auto &l = q.points[k];
      double c = q.weights[k] * area;
      for (const auto *fp : f)
      {
        const auto &fv = *fp;
        c *= l[0] * fv[tri[0]] + l[1] * fv[tri[1]] + l[2] * fv[tri[2]];
      }
      for (int a = 0; a < 3; ++a)
      {
        for (int b = a; b < 3; ++b)
        {
          local[3 * a + b] += c * l[a] * l[b];
        }
      }
    }
    local[3] = local[1];
    local[6] = local[2];
    local[7] = local[5];
    for (int s = 0; s < 9; ++s)
    {
      wv[element_slots_[t][s]] += local[s];
    }
  }
  return W;
}

Vector P1Space::ProductLoad(std::initializer_list<const NodalField *> factors) const
{
  const std::vector<const NodalField *> f(factors);
  CheckFactors(f, 3);
  const auto &q = Degree4Rule();
  Vector b = Vector::Zero(size());
  const double area = 0.5 * mesh_.h() * mesh_.h();
  for (Index t = 0; t < mesh_.num_triangles(); ++t)
  {
    const auto &tri = mesh_.triangles()[t];
    for (int k = 0; k < 6; ++k)
    {
      const auto &l = q.points[k];
      double c = q.weights[k] * area;
      for (const auto *fp : f)
      {
        const auto &fv = *fp;
        c *= l[0] * fv[tri[0]] + l[1] * fv[tri[1]] + l[2] * fv[tri[2]];
      }
      for (int a = 0; a < 3; ++a)
      {
        b[tri[a]] += c * l[a];
      }
    }
  }
  return b;
}

Vector P1Space::Load(const NodalField &f) const
{
  if (f.size() != size())
  {
    throw InvalidArgument("assemble_load: field length does not match mesh node count");
  }
  return mass_ * f;
}

CsrMatrix AssembleMass(const MeshP1 &mesh) { return P1Space(mesh).mass(); }

CsrMatrix AssembleStiffness(const MeshP1 &mesh) { return P1Space(mesh).stiffness(); }

CsrMatrix AssembleWeightedMass(const MeshP1 &mesh, const NodalField &coeff)
{
  return P1Space(mesh).WeightedMass({&coeff});
}

Vector AssembleLoad(const MeshP1 &mesh, const NodalField &f) { return P1Space(mesh).Load(f); }

}  // namespace schnak
