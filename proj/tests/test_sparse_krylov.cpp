// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "schnak/chebyshev.hpp"
#include "schnak/errors.hpp"
#include "schnak/fem.hpp"
#include "schnak/minres.hpp"
#include "schnak/multigrid.hpp"
#include "test_support.hpp"

namespace schnak
{
namespace
{

using testing::RandomVector;

LinearOperator DenseOperator(const Eigen::MatrixXd &A)
{
  return {A.rows(), [&A](const Vector &x, Vector &y) { y = A * x; }};
}

// Q diag(lambda) Q^T with |lambda| in [0.1, 10] and mixed signs.
Eigen::MatrixXd RandomSymmetricIndefinite(int n, std::mt19937_64 &rng)
{
  const Eigen::MatrixXd G = Eigen::MatrixXd::NullaryExpr(n, n, [&rng]() {
    return std::normal_distribution<double>(0.0, 1.0)(rng);
  });
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  const Eigen::MatrixXd Q = qr.householderQ();
  std::uniform_real_distribution<double> mag(std::log(0.1), std::log(10.0));
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i)
  {
    lambda[i] = (i % 2 == 0 ? 1.0 : -1.0) * std::exp(mag(rng));
  }
  return Q * lambda.asDiagonal() * Q.transpose();
}

TEST(LinearOperator, Linearity)
{
  const MeshP1 mesh = BuildMesh(6);
  const CsrMatrix M = AssembleMass(mesh);
  const LinearOperator op = LinearOperator::FromMatrix(M);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 10; ++k)
  {
    const Vector x = RandomVector(op.size(), rng), y = RandomVector(op.size(), rng);
    const Vector ax = op(x), ay = op(y);
    EXPECT_LE((op(x + y) - ax - ay).norm(), 1e-12 * (ax.norm() + ay.norm()));
  }
}

TEST(Minres, IdentityConvergesInOneStep)
{
  const Vector b = Vector::LinSpaced(7, 1.0, 7.0);
  const auto I = LinearOperator::Identity(7);
  const MinresResult res = Minres(I, I, b, {1e-12, 100});
  EXPECT_EQ(res.status, MinresStatus::kConverged);
  EXPECT_EQ(res.iterations, 1);
  EXPECT_LE((res.x - b).norm(), 1e-14);
}

TEST(Minres, MatchesDenseSolve)
{
  std::mt19937_64 rng(2024);
  for (int n : {8, 16, 32, 64})
  {
    const Eigen::MatrixXd A = RandomSymmetricIndefinite(n, rng);
    const Vector b = RandomVector(n, rng);
    const Vector x_ref = A.partialPivLu().solve(b);
    const MinresResult res =
        Minres(DenseOperator(A), LinearOperator::Identity(n), b, {1e-14, 10 * n});
    EXPECT_EQ(res.status, MinresStatus::kConverged) << "n=" << n;
    EXPECT_LE((res.x - x_ref).norm() / x_ref.norm(), 1e-10) << "n=" << n;
    for (std::size_t k = 1; k < res.residual_history.size(); ++k)
    {
      EXPECT_LE(res.residual_history[k], res.residual_history[k - 1] * (1.0 + 1e-12));
    }
  }
}

TEST(Minres, PreconditionedMonotoneAndWarmStart)
{
  std::mt19937_64 rng(9);
  const int n = 40;
  const Eigen::MatrixXd A = RandomSymmetricIndefinite(n, rng);
  // SPD preconditioner: |A|^{-1} perturbed.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  const Eigen::MatrixXd P = eig.eigenvectors() *
                            eig.eigenvalues().cwiseAbs().cwiseInverse().asDiagonal() *
                            eig.eigenvectors().transpose() +
                            0.05 * Eigen::MatrixXd::Identity(n, n);
  const Vector b = RandomVector(n, rng);
  const MinresResult res = Minres(DenseOperator(A), DenseOperator(P), b, {1e-12, 200});
  EXPECT_EQ(res.status, MinresStatus::kConverged);
  EXPECT_LE((A * res.x - b).norm() / b.norm(), 1e-10);
  for (std::size_t k = 1; k < res.residual_history.size(); ++k)
  {
    EXPECT_LE(res.residual_history[k], res.residual_history[k - 1] * (1.0 + 1e-12));
  }
  // Warm start at the solution converges immediately.
  const MinresResult warm = Minres(DenseOperator(A), DenseOperator(P), b, {1e-8, 200}, &res.x);
  EXPECT_EQ(warm.iterations, 0);
  EXPECT_EQ(warm.status, MinresStatus::kConverged);
}

TEST(Minres, FlagsIterationLimitAndZeroRhs)
{
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd A = RandomSymmetricIndefinite(30, rng);
  const Vector b = RandomVector(30, rng);
  const MinresResult res = Minres(DenseOperator(A), LinearOperator::Identity(30), b, {1e-14, 3});
  EXPECT_EQ(res.status, MinresStatus::kMaxIterations);
  EXPECT_EQ(res.iterations, 3);
  const MinresResult zero =
      Minres(DenseOperator(A), LinearOperator::Identity(30), Vector::Zero(30), {1e-10, 10});
  EXPECT_EQ(zero.status, MinresStatus::kConverged);
  EXPECT_EQ(zero.x.norm(), 0.0);
  EXPECT_THROW(Minres(DenseOperator(A), LinearOperator::Identity(30), Vector::Zero(5), {}),
               InvalidArgument);
}

TEST(Minres, DetectsIndefinitePreconditioner)
{
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(4, 4);
  const Eigen::MatrixXd P = -Eigen::MatrixXd::Identity(4, 4);
  const Vector b = Vector::Ones(4);
  const MinresResult res = Minres(DenseOperator(A), DenseOperator(P), b, {1e-10, 10});
  EXPECT_EQ(res.status, MinresStatus::kBreakdown);
}

TEST(Chebyshev, MassSolveErrorBound)
{
  const double bound = ChebyshevMassSolver::ErrorBound(20);
  EXPECT_NEAR(bound, 2.0 * std::pow(1.0 / 3.0, 20) / (1.0 + std::pow(1.0 / 3.0, 40)), 1e-22);
  EXPECT_LE(bound, 5.74e-10);
  std::mt19937_64 rng(17);
  for (int n : {3, 10, 20})
  {
    const MeshP1 mesh = BuildMesh(n);
    const CsrMatrix M = AssembleMass(mesh);
    const ChebyshevMassSolver cheb(M, 20);
    const Eigen::MatrixXd Md = M.ToDense();
    const Eigen::LLT<Eigen::MatrixXd> llt(Md);
    for (int k = 0; k < 5; ++k)
    {
      const Vector r = RandomVector(mesh.num_nodes(), rng);
      const Vector x = llt.solve(r);
      const Vector z = cheb.Apply(r);
      const Vector e = z - x;
      const double rel = std::sqrt(e.dot(Md * e) / x.dot(Md * x));
      EXPECT_LE(rel, bound * (1.0 + 1e-6)) << "n=" << n;
      EXPECT_LE(rel, 1e-9);
    }
  }
}

TEST(Chebyshev, FixedSymmetricLinearOperator)
{
  const MeshP1 mesh = BuildMesh(8);
  const CsrMatrix M = AssembleMass(mesh);
  const ChebyshevMassSolver cheb(M, 20);
  const Index n = mesh.num_nodes();
  EXPECT_EQ(cheb.Apply(Vector::Zero(n)).norm(), 0.0);
  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k)
  {
    const Vector r1 = RandomVector(n, rng), r2 = RandomVector(n, rng);
    const Vector c1 = cheb.Apply(r1), c2 = cheb.Apply(r2);
    EXPECT_LE((cheb.Apply(r1 + r2) - c1 - c2).norm(), 1e-13 * (c1.norm() + c2.norm()));
    EXPECT_NEAR(c1.dot(r2), r1.dot(c2), 1e-12 * std::abs(c1.dot(r2)) + 1e-14);
    EXPECT_GT(c1.dot(r1), 0.0);
  }
  EXPECT_EQ((ChebyshevMassApply(M, Vector::Ones(n), 20) - cheb.Apply(Vector::Ones(n))).norm(),
            0.0);
}

TEST(Chebyshev, RejectsBadInput)
{
  const MeshP1 mesh = BuildMesh(2);
  CsrMatrix M = AssembleMass(mesh);
  EXPECT_THROW(ChebyshevMassSolver(M, 0), InvalidArgument);
  M.Scale(-1.0);
  EXPECT_THROW(ChebyshevMassSolver(M, 20), InvalidArgument);
}

CsrMatrix ParabolicBlock(const P1Space &V, double tau, double D, double gamma,
                         const NodalField &u, const NodalField &v)
{
  // M + tau (D/2 K + gamma/2 M - gamma M_{uv}), the u-block of the time-stepping operator.
  CsrMatrix A = Combine(1.0 + 0.5 * tau * gamma, V.mass(), 0.5 * tau * D, V.stiffness());
  A.Axpby(1.0, -tau * gamma, V.WeightedMass({&u, &v}));
  return A;
}

TEST(Multigrid, SixCyclesReachTolerance)
{
  std::mt19937_64 rng(31);
  for (int n : {10, 20})
  {
    const MeshP1 mesh = BuildMesh(n);
    const P1Space V(mesh);
    const double tau = 0.2 * mesh.h();
    const NodalField u = InterpolateNodal(mesh, [](double x, double y) {
      return 1.0 + 0.5 * std::cos(2 * M_PI * x) * std::cos(2 * M_PI * y);
    });
    const NodalField v = InterpolateNodal(mesh, [](double x, double y) {
      return 1.0 + 0.5 * std::cos(M_PI * x) * std::cos(M_PI * y);
    });
    const NodalField w = NodalField::Ones(mesh.num_nodes());
    const NodalField zero = NodalField::Zero(mesh.num_nodes());
    const std::vector<CsrMatrix> blocks = {
        Combine(1.0, V.mass(), 0.5 * tau, V.stiffness()),
        ParabolicBlock(V, tau, 1.0, 2.0, u, v),
        Combine(1.0, V.mass(), 5.0 * tau, V.stiffness()),
        ParabolicBlock(V, tau, 1.0, 2.0, zero, w),
    };
    for (const CsrMatrix &A : blocks)
    {
      const MgHierarchy mg = MgBuild(A, mesh);
      EXPECT_GE(mg.num_levels(), 2);
      const Eigen::MatrixXd Ad = A.ToDense();
      const Eigen::LDLT<Eigen::MatrixXd> direct(Ad);
      for (int k = 0; k < 3; ++k)
      {
        const Vector b = RandomVector(mesh.num_nodes(), rng);
        const Vector x = mg.Apply(b);
        EXPECT_LE((b - A * x).norm() / b.norm(), 1e-6) << "n=" << n;
        const Vector xd = direct.solve(b);
        EXPECT_LE((x - xd).norm() / xd.norm(), 1e-6) << "n=" << n;
      }
    }
  }
}

TEST(Multigrid, SymmetricLinearOperator)
{
  const MeshP1 mesh = BuildMesh(16);
  const P1Space V(mesh);
  const CsrMatrix A = Combine(1.0, V.mass(), 0.02, V.stiffness());
  const MgHierarchy mg = MgBuild(A, mesh);
  const Index n = mesh.num_nodes();
  EXPECT_EQ(mg.Apply(Vector::Zero(n)).norm(), 0.0);
  std::mt19937_64 rng(37);
  for (int k = 0; k < 10; ++k)
  {
    const Vector r1 = RandomVector(n, rng), r2 = RandomVector(n, rng);
    const Vector g1 = mg.Apply(r1), g2 = mg.Apply(r2);
    EXPECT_NEAR(g1.dot(r2), r1.dot(g2), 1e-11 * std::abs(g1.dot(r2)) + 1e-13);
    EXPECT_LE((mg.Apply(r1 + r2) - g1 - g2).norm(), 1e-12 * (g1.norm() + g2.norm()));
  }
}

TEST(Multigrid, OneLevelIsDirectSolve)
{
  const MeshP1 mesh = BuildMesh(3);
  const P1Space V(mesh);
  const CsrMatrix A = Combine(1.0, V.mass(), 0.1, V.stiffness());
  const MgHierarchy mg = MgBuild(A, mesh);
  EXPECT_EQ(mg.num_levels(), 1);
  const Vector b = Vector::LinSpaced(mesh.num_nodes(), -1.0, 2.0);
  const Vector x = A.ToDense().ldlt().solve(b);
  EXPECT_LE((mg.Apply(b) - x).norm(), 1e-13 * x.norm());
}

TEST(Multigrid, SingularCoarseMatrixFails)
{
  const MeshP1 mesh = BuildMesh(4);
  const CsrMatrix K = AssembleStiffness(mesh);
  EXPECT_THROW(MgBuild(K, mesh), SolverError);
}

}  // namespace
}  // namespace schnak
