// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

// Kernel timings at the grids of the convergence study. Arguments: scheme (0 = SV,
// 1 = BWE) and mesh level.

#include <memory>

#include <benchmark/benchmark.h>

#include "schnak/bwe_system.hpp"
#include "schnak/chebyshev.hpp"
#include "schnak/harness.hpp"
#include "schnak/multigrid.hpp"
#include "schnak/saddle.hpp"
#include "schnak/sv_system.hpp"

namespace schnak
{
namespace
{

// Manufactured problem linearized at its coarse initial guess.
struct Problem
{
  SchnakenbergParams prm;
  std::shared_ptr<const P1Space> space;
  ProblemData data;
  Trajectory lin;
  Scheme scheme;

  Problem(Scheme s, int level) : scheme(s)
  {
    const LevelGrid g = GridForLevel(s, level, 1.0);
    prm.N_t = g.nt;
    prm.beta1 = prm.beta2 = 1e-2;
    space = std::make_shared<const P1Space>(MeshP1(g.n));
    const ManufacturedCase mc(prm);
    data = ManufacturedData(mc, space->mesh(), g.nt);
    lin = CoarsestGuess(s, data, prm.T);
  }

  SaddleSystem Assemble() const
  {
    return scheme == Scheme::kStormerVerlet ? AssembleSv(prm, space, lin, data)
                                            : AssembleBwe(prm, space, lin, data);
  }
};

Scheme SchemeArg(const benchmark::State &state)
{
  return state.range(0) == 0 ? Scheme::kStormerVerlet : Scheme::kBackwardEuler;
}

void BM_Assemble(benchmark::State &state)
{
  const Problem p(SchemeArg(state), static_cast<int>(state.range(1)));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(p.Assemble());
  }
}

void BM_SaddleApply(benchmark::State &state)
{
  const Problem p(SchemeArg(state), static_cast<int>(state.range(1)));
  const SaddleSystem sys = p.Assemble();
  const Vector w = Vector::Ones(sys.size());
  Vector y;
  for (auto _ : state)
  {
    sys.Apply(w, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.counters["dof"] = static_cast<double>(sys.size());
}

void BM_PreconditionerBuild(benchmark::State &state)
{
  const Problem p(SchemeArg(state), static_cast<int>(state.range(1)));
  const SaddleSystem sys = p.Assemble();
  const auto transfer = std::make_shared<const MgTransfer>(p.space->mesh());
  for (auto _ : state)
  {
    const MatchedPreconditioner P(sys, transfer);
    benchmark::DoNotOptimize(&P);
  }
}

void BM_PreconditionerApply(benchmark::State &state)
{
  const Problem p(SchemeArg(state), static_cast<int>(state.range(1)));
  const SaddleSystem sys = p.Assemble();
  const auto transfer = std::make_shared<const MgTransfer>(p.space->mesh());
  const MatchedPreconditioner P(sys, transfer);
  const Vector z = Vector::Ones(sys.size());
  Vector y;
  for (auto _ : state)
  {
    P.Apply(z, y);
    benchmark::DoNotOptimize(y.data());
  }
}

void BM_MultigridApply(benchmark::State &state)
{
  const MeshP1 mesh(static_cast<int>(state.range(0)));
  const P1Space V(mesh);
  const CsrMatrix A = Combine(1.0, V.mass(), 0.2 * mesh.h() * 10.0, V.stiffness());
  const MgHierarchy mg = MgBuild(A, mesh);
  const Vector b = Vector::Ones(V.size());
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(mg.Apply(b));
  }
}

void BM_ChebyshevMass(benchmark::State &state)
{
  const P1Space V{MeshP1(static_cast<int>(state.range(0)))};
  const ChebyshevMassSolver cheb(V.mass(), 20);
  const Vector b = Vector::Ones(V.size());
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(cheb.Apply(b));
  }
}

void Grids(benchmark::internal::Benchmark *b)
{
  b->ArgNames({"bwe", "level"})->Args({0, 1})->Args({0, 2})->Args({1, 1})->Args({1, 2});
  b->Unit(benchmark::kMillisecond);
}

BENCHMARK(BM_Assemble)->Apply(Grids);
BENCHMARK(BM_SaddleApply)->Apply(Grids);
BENCHMARK(BM_PreconditionerBuild)->Apply(Grids);
BENCHMARK(BM_PreconditionerApply)->Apply(Grids);
BENCHMARK(BM_MultigridApply)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ChebyshevMass)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace schnak

BENCHMARK_MAIN();
