// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "schnak/errors.hpp"
#include "schnak/harness.hpp"
#include "schnak/io.hpp"

namespace schnak
{
namespace
{

namespace fs = std::filesystem;

fs::path ScratchDir()
{
  const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() /
                 (std::string("schnak_") + info->test_suite_name() + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Grid, LevelsAndDegreesOfFreedom)
{
  const LevelGrid sv1 = GridForLevel(Scheme::kStormerVerlet, 1, 1.0);
  const LevelGrid sv2 = GridForLevel(Scheme::kStormerVerlet, 2, 1.0);
  const LevelGrid be1 = GridForLevel(Scheme::kBackwardEuler, 1, 1.0);
  const LevelGrid be2 = GridForLevel(Scheme::kBackwardEuler, 2, 1.0);
  EXPECT_EQ(sv1.n, 10);
  EXPECT_EQ(sv1.nt, 50);
  EXPECT_EQ(sv2.n, 20);
  EXPECT_EQ(sv2.nt, 100);
  EXPECT_EQ(be1.nt, 50);
  EXPECT_EQ(be2.nt, 200);
  auto nodes = [](int n) { return static_cast<Index>((n + 1) * (n + 1)); };
  // Reference degrees of freedom of the level 1 and 2 grids.
  EXPECT_EQ(DegreesOfFreedom(Scheme::kStormerVerlet, sv1.nt, nodes(sv1.n)), 24200);
  EXPECT_EQ(DegreesOfFreedom(Scheme::kStormerVerlet, sv2.nt, nodes(sv2.n)), 176400);
  EXPECT_EQ(DegreesOfFreedom(Scheme::kBackwardEuler, be1.nt, nodes(be1.n)), 23716);
  EXPECT_EQ(DegreesOfFreedom(Scheme::kBackwardEuler, be2.nt, nodes(be2.n)), 351036);
  EXPECT_EQ(GridForLevel(Scheme::kStormerVerlet, 3, 1.0).nt, 200);
  EXPECT_THROW(GridForLevel(Scheme::kStormerVerlet, 0, 1.0), InvalidArgument);
  EXPECT_THROW(GridForLevel(Scheme::kStormerVerlet, 1, 0.03), InvalidArgument);
  EXPECT_THROW(GridForLevel(Scheme::kStormerVerlet, 1, -1.0), InvalidArgument);
}

TEST(WeightedError, ZeroForExactField)
{
  const MeshP1 mesh(5);
  auto g = [](double t, double x, double y) { return std::exp(t) * x - y * y; };
  std::vector<NodalField> f;
  std::vector<double> ts{0.0, 0.3, 0.7};
  for (double t : ts)
  {
    f.push_back(InterpolateNodal(mesh, [&](double x, double y) { return g(t, x, y); }));
  }
  EXPECT_EQ(WeightedError(f, ts, g, mesh), 0.0);
}

TEST(WeightedError, ConstantOffsetClosedForm)
{
  const MeshP1 mesh(4);
  const double c = 0.25;
  const Index nx = mesh.num_nodes();
  std::vector<NodalField> f{NodalField::Zero(nx), NodalField::Constant(nx, c),
                            NodalField::Constant(nx, 3.0 * c)};
  const std::vector<double> ts{0.0, 0.5, 1.0};
  auto zero = [](double, double, double) { return 0.0; };
  const double unit = mesh.h() * c * std::sqrt(static_cast<double>(nx));
  EXPECT_NEAR(WeightedError(f, ts, zero, mesh), 3.0 * unit, 1e-15);
  // Entries before `first` are skipped.
  f[2].setZero();
  EXPECT_NEAR(WeightedError(f, ts, zero, mesh, 1), unit, 1e-15);
  EXPECT_EQ(WeightedError(f, ts, zero, mesh, 2), 0.0);
  EXPECT_THROW(WeightedError(f, {0.0}, zero, mesh), InvalidArgument);
}

TEST(CostTerms, ZeroAndConstantControl)
{
  const P1Space space{MeshP1(4)};
  const int nt = 8;
  const double T = 2.0;
  for (Scheme s : {Scheme::kStormerVerlet, Scheme::kBackwardEuler})
  {
    Trajectory t = Trajectory::Zeros(s, nt, T, space.size());
    ProblemData d;
    d.u_hat.assign(nt + 1, NodalField::Zero(space.size()));
    d.v_hat = d.u_hat;
    d.u0 = d.v0 = NodalField::Zero(space.size());
    for (int i = 0; i <= nt; ++i)
    {
      t.u[i].setConstant(0.1 * i);
      d.u_hat[i] = t.u[i];
    }
    const CostTerms zero = ComputeCostTerms(t, d, space);
    EXPECT_EQ(zero.misfit_u + zero.misfit_v + zero.control_a + zero.control_b, 0.0);

    const double c = 0.7;
    for (auto &a : t.a)
    {
      a.setConstant(c);
    }
    // A misfit linear in time is integrated exactly by the trapezoid rule.
    for (int i = 0; i <= nt; ++i)
    {
      t.v[i].setConstant(t.StateTime(i));
    }
    const CostTerms ct = ComputeCostTerms(t, d, space);
    EXPECT_NEAR(ct.control_a, c * c * T, 1e-13);
    EXPECT_EQ(ct.control_b, 0.0);
    const double h = T / nt;
    double trap = 0.0;
    for (int i = 0; i <= nt; ++i)
    {
      trap += ((i == 0 || i == nt) ? 0.5 : 1.0) * h * (i * h) * (i * h);
    }
    EXPECT_NEAR(ct.misfit_v, trap, 1e-13);
  }
}

TEST(ControlMeans, OneEntryPerControlStep)
{
  const P1Space space{MeshP1(3)};
  Trajectory t = Trajectory::Zeros(Scheme::kStormerVerlet, 6, 1.2, space.size());
  for (int k = 0; k <= 6; ++k)
  {
    t.a[k].setConstant(k);
    t.b[k].setConstant(-2.0);
  }
  const ControlMeans m = ComputeControlMeans(t, space);
  ASSERT_EQ(m.a.size(), 6u);
  ASSERT_EQ(m.t.size(), 6u);
  EXPECT_NEAR(m.t.front(), 0.1, 1e-15);
  EXPECT_NEAR(m.t.back(), 1.1, 1e-15);
  EXPECT_NEAR(m.a.back(), 6.0, 1e-13);
  EXPECT_NEAR(m.b.front(), -2.0, 1e-13);
  std::ostringstream os;
  WriteMeansCsv(os, m);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), kMeansCsvHeader);
}

TEST(ExperimentConfig, Validation)
{
  ExperimentConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.levels = {};
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c.levels = {2, 1};
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c.levels = {1, 1};
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c = ExperimentConfig{};
  c.beta = 0.0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
  DatadrivenConfig d;
  EXPECT_NO_THROW(d.Validate());
  d.betas = {1e-2, -1.0};
  EXPECT_THROW(d.Validate(), InvalidArgument);
}

TEST(ConvergenceCsv, HeaderAndRows)
{
  LevelStats ok;
  ok.level = 1;
  ok.dof = 24200;
  ok.errors = {8.7e-2, 8.5e-2, 8.6e-3, 6.7e-3};
  ok.minres_mean = 25.5;
  ok.sqp_iters = 6;
  ok.cpu_s = 1.25;
  LevelStats bad = ok;
  bad.level = 2;
  bad.diverged = true;
  std::ostringstream os;
  WriteConvergenceCsv(os, {ok, bad});
  EXPECT_EQ(os.str(),
            "level,dof,u_err,v_err,p_err,q_err,minres_mean,sqp_iters,cpu_s\n"
            "1,24200,8.700000e-02,8.500000e-02,8.600000e-03,6.700000e-03,25.500000,6,"
            "1.250000\n"
            "2,24200,nan,nan,nan,nan,25.500000,6,1.250000\n");
}

// A short horizon keeps both levels cheap; the second must still improve on the first.
ExperimentConfig SmallStudy(Scheme s)
{
  ExperimentConfig c;
  c.scheme = s;
  c.T = 0.1;
  c.levels = {1, 2};
  return c;
}

TEST(ConvergenceStudy, SmallRunIsDeterministicAndConverges)
{
  for (Scheme s : {Scheme::kStormerVerlet, Scheme::kBackwardEuler})
  {
    int seen = 0;
    const auto a = ConvergenceStudy(SmallStudy(s), [&](const LevelStats &) { ++seen; });
    const auto b = ConvergenceStudy(SmallStudy(s));
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(seen, 2);
    for (std::size_t i = 0; i < a.size(); ++i)
    {
      EXPECT_TRUE(a[i].converged);
      EXPECT_FALSE(a[i].diverged);
      EXPECT_EQ(a[i].errors.u, b[i].errors.u);
      EXPECT_EQ(a[i].errors.q, b[i].errors.q);
      EXPECT_EQ(a[i].sqp_iters, b[i].sqp_iters);
      EXPECT_EQ(a[i].minres_mean, b[i].minres_mean);
      const LevelGrid g = GridForLevel(s, a[i].level, 0.1);
      EXPECT_EQ(a[i].dof, DegreesOfFreedom(s, g.nt, (g.n + 1) * (g.n + 1)));
    }
    EXPECT_LT(a[1].errors.u, a[0].errors.u);
    EXPECT_LT(a[1].errors.p, a[0].errors.p);
  }
}

TEST(Datadriven, TargetsRampAndMisfitsShrinkWithBeta)
{
  auto space = std::make_shared<const P1Space>(MeshP1(4));
  const NodalField uT =
    InterpolateNodal(space->mesh(), [](double x, double y) { return 1.0 + 0.3 * x * y; });
  const NodalField vT = NodalField::Constant(space->size(), 0.8);
  const ProblemData d = DatadrivenData(uT, vT, 10, 0.0, 0.0);
  ASSERT_EQ(d.u_hat.size(), 11u);
  EXPECT_EQ(d.u_hat[0].norm(), 0.0);
  EXPECT_EQ((d.v_hat[10] - vT).norm(), 0.0);
  EXPECT_THROW(DatadrivenData(uT, NodalField::Zero(3), 10, 0.0, 0.0), InvalidArgument);

  DatadrivenConfig cfg;
  cfg.betas = {1e-2, 1e-3};
  cfg.gamma = 2.0;
  cfg.T = 0.5;
  cfg.nt = 10;
  const auto runs = DatadrivenStudy(cfg, space, uT, vT);
  ASSERT_EQ(runs.size(), 2u);
  for (const auto &r : runs)
  {
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.means.a.size(), 10u);
  }
  EXPECT_LT(runs[1].cost.misfit_u, runs[0].cost.misfit_u);
  EXPECT_LT(runs[1].cost.misfit_v, runs[0].cost.misfit_v);
  std::ostringstream os;
  WriteCostCsv(os, runs);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), kCostCsvHeader);
  EXPECT_THROW(DatadrivenStudy(cfg, space, NodalField::Zero(3), NodalField::Zero(3)),
               InvalidArgument);
}

TEST(Io, VtkContainsMeshAndFields)
{
  const fs::path dir = ScratchDir();
  const MeshP1 mesh(2);
  const NodalField u = NodalField::LinSpaced(mesh.num_nodes(), 0.0, 1.0);
  const NodalField v = NodalField::Constant(mesh.num_nodes(), 2.5);
  WriteVtk((dir / "f.vtk").string(), mesh, {{"u", &u}, {"v", &v}});
  const std::string s = Slurp(dir / "f.vtk");
  EXPECT_EQ(s.rfind("# vtk DataFile Version", 0), 0u);
  EXPECT_NE(s.find("ASCII"), std::string::npos);
  EXPECT_NE(s.find("POINTS 9 double"), std::string::npos);
  EXPECT_NE(s.find("CELLS 8 32"), std::string::npos);
  EXPECT_NE(s.find("POINT_DATA 9"), std::string::npos);
  EXPECT_NE(s.find("SCALARS u double"), std::string::npos);
  EXPECT_NE(s.find("SCALARS v double"), std::string::npos);
  const NodalField short_field = NodalField::Zero(3);
  EXPECT_THROW(WriteVtk((dir / "g.vtk").string(), mesh, {{"u", &short_field}}),
               InvalidArgument);
}

TEST(Io, FieldDumpRoundTripIsBitExact)
{
  const fs::path dir = ScratchDir();
  FieldDump d;
  d.n = 3;
  d.h = 1.0 / 3.0;
  d.names = {"u", "v"};
  NodalField u(16), v(16);
  for (int i = 0; i < 16; ++i)
  {
    u[i] = std::sin(1.0 + i) / 3.0;
    v[i] = std::nextafter(1e-300 * i, 1.0);
  }
  d.fields = {u, v};
  const std::string base = (dir / "snap").string();
  WriteFieldDump(base, d);
  for (const std::string &path : {base, base + ".hdr", base + ".bin"})
  {
    const FieldDump r = ReadFieldDump(path);
    EXPECT_EQ(r.n, 3);
    EXPECT_EQ(r.h, d.h);
    ASSERT_EQ(r.names, d.names);
    EXPECT_EQ(std::memcmp(r.Get("u").data(), u.data(), sizeof(double) * 16), 0);
    EXPECT_EQ(std::memcmp(r.Get("v").data(), v.data(), sizeof(double) * 16), 0);
    EXPECT_THROW(r.Get("w"), InvalidArgument);
  }
}

TEST(Io, MissingOrTruncatedDumpIsRejected)
{
  const fs::path dir = ScratchDir();
  EXPECT_THROW(ReadFieldDump((dir / "absent").string()), InvalidArgument);
  FieldDump d;
  d.n = 1;
  d.h = 1.0;
  d.names = {"u"};
  d.fields = {NodalField::Ones(4)};
  const std::string base = (dir / "snap").string();
  WriteFieldDump(base, d);
  fs::resize_file(base + ".bin", 3 * sizeof(double));
  EXPECT_THROW(ReadFieldDump(base), InvalidArgument);
  WriteFieldDump(base, d);
  {
    std::ofstream hdr(base + ".hdr", std::ios::trunc);
    hdr << "n=1\n";
  }
  EXPECT_THROW(ReadFieldDump(base), InvalidArgument);
}

}  // namespace
}  // namespace schnak
