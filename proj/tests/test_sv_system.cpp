// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "lagrangian_oracle.hpp"
#include "schnak/errors.hpp"
#include "schnak/minres.hpp"
#include "schnak/sv_system.hpp"
#include "test_support.hpp"

namespace schnak
{
namespace
{

using testing::LagrangianOracle;
using testing::RandomProblem;
using testing::RandomVector;

SchnakenbergParams Params(int nt, double beta = 1e-2)
{
  SchnakenbergParams p;
  p.N_t = nt;
  p.beta1 = p.beta2 = beta;
  return p;
}

// Row and column signs mapping the Lagrangian Hessian in [p; u] onto [-p; u] ordering with
// negated adjoint rows.
Eigen::VectorXd HalfSigns(Index size, double top)
{
  Eigen::VectorXd s = Eigen::VectorXd::Constant(size, -top);
  s.head(size / 2).setConstant(top);
  return s;
}

struct OracleCase
{
  int n, nt;
  bool sources;
};

class SvOracleTest : public ::testing::TestWithParam<OracleCase>
{
};

TEST_P(SvOracleTest, MatrixAndRhsMatchLagrangian)
{
  const auto [n, nt, sources] = GetParam();
  std::mt19937_64 rng(100 + n * 10 + nt);
  const auto prm = Params(nt);
  auto space = std::make_shared<const P1Space>(MeshP1(n));
  Trajectory lin;
  ProblemData data;
  RandomProblem(space->mesh(), nt, Scheme::kStormerVerlet, sources, rng, lin, data);

  const SaddleSystem sys = AssembleSv(prm, space, lin, data);
  const Eigen::MatrixXd K = sys.ToDense();
  const LagrangianOracle oracle(space->mesh(), prm, Scheme::kStormerVerlet, data);
  ASSERT_EQ(oracle.size(), sys.size());

  const Eigen::VectorXd xk = oracle.Pack(lin);
  const Eigen::VectorXd row_sign = HalfSigns(sys.size(), 1.0);
  const Eigen::VectorXd col_sign = HalfSigns(sys.size(), -1.0);
  const Eigen::MatrixXd H = oracle.Hessian(xk);
  const Eigen::MatrixXd K_ref = row_sign.asDiagonal() * H * col_sign.asDiagonal();
  EXPECT_LE((K - K_ref).cwiseAbs().maxCoeff(), 1e-13 * K_ref.cwiseAbs().maxCoeff());

  const Eigen::VectorXd wk = col_sign.cwiseProduct(xk);
  const Eigen::VectorXd b_ref = K_ref * wk - row_sign.cwiseProduct(oracle.Gradient(xk));
  EXPECT_LE((sys.rhs - b_ref).cwiseAbs().maxCoeff(), 1e-13 * b_ref.cwiseAbs().maxCoeff());
}

INSTANTIATE_TEST_SUITE_P(SmallGrids, SvOracleTest,
                         ::testing::Values(OracleCase{2, 3, false}, OracleCase{2, 3, true},
                                           OracleCase{3, 2, true}, OracleCase{2, 1, true}));

TEST(SvSystem, ApplyMatchesDenseAndIsSymmetric)
{
  std::mt19937_64 rng(7);
  const auto prm = Params(5);
  auto space = std::make_shared<const P1Space>(MeshP1(4));
  Trajectory lin;
  ProblemData data;
  RandomProblem(space->mesh(), 5, Scheme::kStormerVerlet, true, rng, lin, data);
  const SaddleSystem sys = AssembleSv(prm, space, lin, data);
  const Eigen::MatrixXd K = sys.ToDense();
  EXPECT_LE((K - K.transpose()).cwiseAbs().maxCoeff(), 1e-15 * K.cwiseAbs().maxCoeff());
  for (int probe = 0; probe < 20; ++probe)
  {
    const Vector x = RandomVector(sys.size(), rng);
    const Vector y = RandomVector(sys.size(), rng);
    Vector Kx, Ky;
    sys.Apply(x, Kx);
    sys.Apply(y, Ky);
    EXPECT_LE((Kx - K * x).norm(), 1e-13 * Kx.norm());
    EXPECT_LE(std::abs(y.dot(Kx) - x.dot(Ky)), 1e-12 * x.norm() * Ky.norm());
  }
}

TEST(SvSystem, InitialAdjointSatisfiesBoundaryEquation)
{
  std::mt19937_64 rng(11);
  const auto prm = Params(3);
  auto space = std::make_shared<const P1Space>(MeshP1(3));
  Trajectory lin;
  ProblemData data;
  RandomProblem(space->mesh(), 3, Scheme::kStormerVerlet, true, rng, lin, data);
  const SaddleSystem sys = AssembleSv(prm, space, lin, data);
  const Vector w = sys.ToDense().partialPivLu().solve(sys.rhs);
  const Trajectory t = UnpackSv(sys, prm, data, w);

  const LagrangianOracle oracle(space->mesh(), prm, Scheme::kStormerVerlet, data);
  const Eigen::VectorXd res = oracle.InitialAdjointResidual(t);
  const double scale = (space->mass() * t.p[0]).norm() + (space->mass() * t.q[0]).norm();
  EXPECT_LE(res.norm(), 1e-8 * scale);
  EXPECT_TRUE(t.a[0].isApprox(prm.gamma / prm.beta1 * t.p[0]));
  EXPECT_TRUE(t.b[2].isApprox(prm.gamma / prm.beta2 * t.q[2]));
  EXPECT_TRUE(t.u[0].isApprox(data.u0));
}

// Eigenvalues of S_hat^{-1} S at the zero linearization.
Eigen::VectorXd SchurSpectrum(const SaddleSystem &sys)
{
  const Index h = sys.half();
  const Eigen::MatrixXd K = sys.ToDense();
  const Eigen::MatrixXd A = K.topLeftCorner(h, h);
  const Eigen::MatrixXd B = K.bottomLeftCorner(h, h);
  const Eigen::MatrixXd C = -K.bottomRightCorner(h, h);
  const Eigen::MatrixXd BD = B + sys.DenseMatched();
  const Eigen::LLT<Eigen::MatrixXd> Allt(A);
  const Eigen::MatrixXd S = C + B * Allt.solve(B.transpose());
  const Eigen::MatrixXd Shat = BD * Allt.solve(BD.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Shat);
  return es.eigenvalues();
}

TEST(SvSystem, MatchedSchurSpectrumAtZeroLinearization)
{
  for (const auto &[n, nt, beta] : {std::tuple{2, 3, 1e-2}, std::tuple{2, 3, 1e-3},
                                    std::tuple{4, 4, 1e-2}, std::tuple{3, 6, 1e-4}})
  {
    const auto prm = Params(nt, beta);
    auto space = std::make_shared<const P1Space>(MeshP1(n));
    const Index nx = space->size();
    const Trajectory lin = Trajectory::Zeros(Scheme::kStormerVerlet, nt, 1.0, nx);
    ProblemData data;
    data.u0 = data.v0 = NodalField::Zero(nx);
    data.u_hat.assign(nt + 1, NodalField::Zero(nx));
    data.v_hat = data.u_hat;
    const SaddleSystem sys = AssembleSv(prm, space, lin, data);
    const Eigen::VectorXd ev = SchurSpectrum(sys);
    EXPECT_GE(ev.minCoeff(), 0.5 - 1e-8) << "n=" << n << " nt=" << nt;
    EXPECT_LE(ev.maxCoeff(), 1.0 + 1e-8) << "n=" << n << " nt=" << nt;
  }
}

TEST(SvSystem, SchurInverseOperatorMatchesDenseAtZeroLinearization)
{
  // At the zero linearization the block sweeps are exact on a single-level mesh.
  const auto prm = Params(3);
  auto space = std::make_shared<const P1Space>(MeshP1(2));
  const Index nx = space->size();
  const Trajectory lin = Trajectory::Zeros(Scheme::kStormerVerlet, 3, 1.0, nx);
  ProblemData data;
  data.u0 = data.v0 = NodalField::Zero(nx);
  data.u_hat.assign(4, NodalField::Zero(nx));
  data.v_hat = data.u_hat;
  const SaddleSystem sys = AssembleSv(prm, space, lin, data);
  const MatchedPreconditioner P(sys, std::make_shared<MgTransfer>(space->mesh()));

  const Index h = sys.half();
  const Eigen::MatrixXd K = sys.ToDense();
  const Eigen::MatrixXd A = K.topLeftCorner(h, h);
  const Eigen::MatrixXd BD = K.bottomLeftCorner(h, h) + sys.DenseMatched();
  const Eigen::MatrixXd Shat = BD * A.llt().solve(BD.transpose());
  std::mt19937_64 rng(3);
  const Vector z = RandomVector(h, rng);
  Vector y(h);
  P.ApplySchurInverse(z.data(), y.data());
  const Vector y_ref = Shat.partialPivLu().solve(z);
  EXPECT_LE((y - y_ref).norm(), 1e-10 * y_ref.norm());
}

TEST(SvSystem, PreconditionerIsSymmetricPositive)
{
  std::mt19937_64 rng(5);
  const auto prm = Params(4);
  auto space = std::make_shared<const P1Space>(MeshP1(12));
  Trajectory lin;
  ProblemData data;
  RandomProblem(space->mesh(), 4, Scheme::kStormerVerlet, false, rng, lin, data);
  const SaddleSystem sys = AssembleSv(prm, space, lin, data);
  const MatchedPreconditioner P(sys, std::make_shared<MgTransfer>(space->mesh()));
  for (int probe = 0; probe < 5; ++probe)
  {
    const Vector x = RandomVector(sys.size(), rng);
    const Vector y = RandomVector(sys.size(), rng);
    Vector Px, Py;
    P.Apply(x, Px);
    P.Apply(y, Py);
    EXPECT_LE(std::abs(y.dot(Px) - x.dot(Py)), 1e-10 * std::abs(x.dot(Px)));
    EXPECT_GT(x.dot(Px), 0.0);
  }
}

TEST(SvSystem, PreconditionedMinresSolvesSystem)
{
  std::mt19937_64 rng(9);
  const auto prm = Params(10);
  auto space = std::make_shared<const P1Space>(MeshP1(10));
  Trajectory lin;
  ProblemData data;
  RandomProblem(space->mesh(), 10, Scheme::kStormerVerlet, true, rng, lin, data);
  for (auto &u : lin.u)
  {
    u.setConstant(0.9);
  }
  for (auto &v : lin.v)
  {
    v.setConstant(0.9);
  }
  data.u0 = lin.u[0];
  data.v0 = lin.v[0];
  const SaddleSystem sys = AssembleSv(prm, space, lin, data);
  const MatchedPreconditioner P(sys, std::make_shared<MgTransfer>(space->mesh()));
  MinresOptions opt;
  opt.tol = 1e-9;
  const MinresResult res = Minres(sys.AsOperator(), P.AsOperator(), sys.rhs, opt);
  EXPECT_EQ(res.status, MinresStatus::kConverged);
  EXPECT_LT(res.iterations, 80);
  Vector r;
  sys.Apply(res.x, r);
  EXPECT_LE((r - sys.rhs).norm(), 1e-6 * sys.rhs.norm());
}

TEST(SvSystem, RejectsMismatchedInputs)
{
  const auto prm = Params(3);
  auto space = std::make_shared<const P1Space>(MeshP1(2));
  const Index nx = space->size();
  Trajectory lin = Trajectory::Zeros(Scheme::kStormerVerlet, 4, 1.0, nx);
  ProblemData data;
  data.u0 = data.v0 = NodalField::Zero(nx);
  data.u_hat.assign(4, NodalField::Zero(nx));
  data.v_hat = data.u_hat;
  EXPECT_THROW(AssembleSv(prm, space, lin, data), InvalidArgument);
  lin = Trajectory::Zeros(Scheme::kBackwardEuler, 3, 1.0, nx);
  EXPECT_THROW(AssembleSv(prm, space, lin, data), InvalidArgument);
  lin = Trajectory::Zeros(Scheme::kStormerVerlet, 3, 1.0, nx);
  data.u_hat.pop_back();
  EXPECT_THROW(AssembleSv(prm, space, lin, data), InvalidArgument);
}

}  // namespace
}  // namespace schnak
