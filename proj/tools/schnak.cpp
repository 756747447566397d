// Copyright 2026 The schnak Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "schnak/errors.hpp"
#include "schnak/forward_sim.hpp"
#include "schnak/harness.hpp"
#include "schnak/io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

// One JSON object per line; silently inactive without a path.
class RunLog
{
public:
  explicit RunLog(const std::string &path)
  {
    if (!path.empty())
    {
      os_.open(path);
      if (!os_)
      {
        throw schnak::InvalidArgument("cannot open log file " + path);
      }
    }
  }
  void Write(const json &j)
  {
    if (os_.is_open())
    {
      os_ << j.dump() << '\n';
      os_.flush();
    }
  }

private:
  std::ofstream os_;
};

json IterationRecord(const schnak::SqpIteration &it)
{
  return {{"minres_iterations", it.minres_iterations},
          {"minres_relative_residual", it.minres_residual},
          {"minres_converged", it.minres_status == schnak::MinresStatus::kConverged},
          {"change", it.change},
          {"seconds", it.seconds},
          {"residual_history", it.residual_history}};
}

// "1..3", "2" or "1,2,4".
std::vector<int> ParseLevels(const std::string &s)
{
  std::smatch m;
  std::vector<int> out;
  if (std::regex_match(s, m, std::regex(R"(\s*(\d+)\s*\.\.\s*(\d+)\s*)")))
  {
    const int lo = std::stoi(m[1]), hi = std::stoi(m[2]);
    for (int i = lo; i <= hi; ++i)
    {
      out.push_back(i);
    }
  }
  else if (std::regex_match(s, std::regex(R"(\s*\d+\s*(,\s*\d+\s*)*)")))
  {
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ','))
    {
      out.push_back(std::stoi(tok));
    }
  }
  if (out.empty())
  {
    throw schnak::InvalidArgument("levels must look like 1..2 or 1,2: " + s);
  }
  return out;
}

void EnsureDir(const std::string &dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
  {
    throw schnak::InvalidArgument("cannot create output directory " + dir);
  }
}

std::string Tag(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

// Arguments after merging a "--config <file>" key=value file: every key becomes --key value
// unless the command line already sets it. Blank lines, '#' comments and [sections] are
// skipped; a list value is written comma separated.
std::vector<std::string> ExpandConfig(int argc, char **argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i)
  {
    if (args[i] == "--config" && i + 1 < args.size())
    {
      path = args[i + 1];
    }
    else if (args[i].rfind("--config=", 0) == 0)
    {
      path = args[i].substr(9);
    }
  }
  if (path.empty())
  {
    return args;
  }
  std::ifstream is(path);
  if (!is)
  {
    throw schnak::InvalidArgument("cannot open config file " + path);
  }
  auto trim = [](std::string x)
  {
    const auto b = x.find_first_not_of(" \t\r");
    const auto e = x.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
  };
  auto given = [&](const std::string &flag)
  {
    for (const auto &a : args)
    {
      if (a == flag || a.rfind(flag + "=", 0) == 0)
      {
        return true;
      }
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line))
  {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == '[')
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw schnak::InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    if (given(flag))
    {
      continue;
    }
    std::istringstream values(trim(line.substr(eq + 1)));
    std::string v;
    while (std::getline(values, v, ','))
    {
      extra.push_back(flag);
      extra.push_back(trim(v));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

struct ConvergeOptions
{
  std::string scheme = "sv";
  double beta = 1e-2;
  double gamma = 2.0;
  std::string levels = "1..2";
  double T = 1.0;
  double tol_minres = 1e-9;
  double tol_sqp = 1e-5;
  double sv_guess_scale = 0.4;
  std::string out = "out";
};

int RunConverge(const ConvergeOptions &o)
{
  schnak::ExperimentConfig cfg;
  cfg.scheme = schnak::ParseScheme(o.scheme);
  cfg.levels = ParseLevels(o.levels);
  cfg.beta = o.beta;
  cfg.gamma = o.gamma;
  cfg.T = o.T;
  cfg.sv_guess_scale = o.sv_guess_scale;
  cfg.sqp.tol_minres = o.tol_minres;
  cfg.sqp.tol_sqp = o.tol_sqp;
  cfg.Validate();
  EnsureDir(o.out);
  RunLog log((fs::path(o.out) / "run.jsonl").string());
  log.Write({{"event", "start"},
             {"command", "converge"},
             {"scheme", o.scheme},
             {"beta", o.beta},
             {"gamma", o.gamma},
             {"T", o.T},
             {"levels", cfg.levels}});

  const auto rows = schnak::ConvergenceStudy(
    cfg,
    [&](const schnak::LevelStats &r)
    {
      std::printf("level %d  n=%d  N_t=%d  DoF=%ld  u %.3e  v %.3e  p %.3e  q %.3e  "
                  "MINRES %.1f  SQP %d  CPU %.1fs%s%s\n",
                  r.level, r.n, r.nt, r.dof, r.errors.u, r.errors.v, r.errors.p, r.errors.q,
                  r.minres_mean, r.sqp_iters, r.cpu_s, r.message.empty() ? "" : "  ",
                  r.message.c_str());
      std::fflush(stdout);
      log.Write({{"event", "level"},
                 {"level", r.level},
                 {"dof", r.dof},
                 {"errors", {r.errors.u, r.errors.v, r.errors.p, r.errors.q}},
                 {"minres_mean", r.minres_mean},
                 {"sqp_iters", r.sqp_iters},
                 {"cpu_s", r.cpu_s},
                 {"converged", r.converged},
                 {"diverged", r.diverged},
                 {"message", r.message}});
    },
    [&](int level, int k, const schnak::SqpIteration &it)
    {
      json j = IterationRecord(it);
      j["event"] = "sqp_iteration";
      j["level"] = level;
      j["iteration"] = k;
      log.Write(j);
    });

  std::ofstream csv(fs::path(o.out) / "convergence.csv");
  schnak::WriteConvergenceCsv(csv, rows);
  for (const auto &r : rows)
  {
    if (r.diverged || !r.converged)
    {
      return kExitDiverged;
    }
  }
  return kExitOk;
}

struct ForwardOptions
{
  double a = schnak::kTargetA;
  double b = schnak::kTargetB;
  double gamma = 0.0;
  int n = 20;
  double T = 5.0;
  double dt = 1e-3;
  double amplitude = 1e-3;
  std::vector<double> snapshots;
  std::string out = "target";
};

int RunForward(const ForwardOptions &o)
{
  schnak::ForwardConfig cfg;
  cfg.a = o.a;
  cfg.b = o.b;
  cfg.gamma = o.gamma;
  cfg.n = o.n;
  cfg.T = o.T;
  cfg.dt = o.dt;
  cfg.amplitude = o.amplitude;
  cfg.snapshot_times = o.snapshots;
  cfg.Validate();
  const fs::path parent = fs::path(o.out).parent_path();
  if (!parent.empty())
  {
    EnsureDir(parent.string());
  }
  const schnak::P1Space space{schnak::MeshP1(cfg.n)};
  const auto res = schnak::Simulate(cfg, space);
  for (const auto &s : res.snapshots)
  {
    std::printf("t=%.4f  mean u %.6f  mean v %.6f  u in [%.4f, %.4f]\n", s.t, s.mass_u,
                s.mass_v, s.u.minCoeff(), s.u.maxCoeff());
    if (s.t < cfg.T)
    {
      const std::string stem = o.out + "_t" + Tag(s.t);
      schnak::WriteVtk(stem + ".vtk", space.mesh(), {{"u", &s.u}, {"v", &s.v}});
    }
  }
  const auto &last = res.snapshots.back();
  schnak::WriteVtk(o.out + ".vtk", space.mesh(), {{"u", &last.u}, {"v", &last.v}});
  schnak::FieldDump dump;
  dump.n = cfg.n;
  dump.h = space.mesh().h();
  dump.names = {"u", "v"};
  dump.fields = {last.u, last.v};
  schnak::WriteFieldDump(o.out, dump);
  std::printf("wrote %s.vtk, %s.hdr, %s.bin\n", o.out.c_str(), o.out.c_str(), o.out.c_str());
  return kExitOk;
}

struct IdentifyOptions
{
  std::string target;
  std::vector<double> betas{1e-2};
  double gamma = 0.0;
  double T = 2.0;
  int nt = 200;
  std::optional<int> n;
  double tol_minres = 1e-7;
  double tol_sqp = 1e-6;
  std::vector<double> vtk_times;
  std::string out = "identify";
};

int RunIdentify(const IdentifyOptions &o)
{
  const schnak::FieldDump dump = schnak::ReadFieldDump(o.target);
  const schnak::MeshP1 src(dump.n);
  if (src.num_nodes() != dump.fields.front().size())
  {
    throw schnak::InvalidArgument("target header does not match its node count");
  }
  const int n = o.n.value_or(dump.n);
  auto space = std::make_shared<const schnak::P1Space>(schnak::MeshP1(n));
  auto resample = [&](const schnak::NodalField &f)
  {
    return n == dump.n ? f
                       : schnak::InterpolateNodal(space->mesh(), [&](double x, double y)
                                                  { return src.Evaluate(f, x, y); });
  };
  const schnak::NodalField uT = resample(dump.Get("u")), vT = resample(dump.Get("v"));

  schnak::DatadrivenConfig cfg;
  cfg.betas = o.betas;
  cfg.gamma = o.gamma;
  cfg.T = o.T;
  cfg.nt = o.nt;
  cfg.sqp.tol_minres = o.tol_minres;
  cfg.sqp.tol_sqp = o.tol_sqp;
  cfg.Validate();
  EnsureDir(o.out);
  RunLog log((fs::path(o.out) / "run.jsonl").string());
  log.Write({{"event", "start"},
             {"command", "identify"},
             {"target", o.target},
             {"betas", o.betas},
             {"gamma", o.gamma},
             {"T", o.T},
             {"nt", o.nt},
             {"n", n}});

  const auto runs = schnak::DatadrivenStudy(cfg, space, uT, vT,
                                            [&](int j, int k, const schnak::SqpIteration &it)
                                            {
                                              json rec = IterationRecord(it);
                                              rec["event"] = "sqp_iteration";
                                              rec["beta"] = o.betas[j];
                                              rec["iteration"] = k;
                                              log.Write(rec);
                                            });
  std::ofstream csv(fs::path(o.out) / "cost.csv");
  schnak::WriteCostCsv(csv, runs);
  const schnak::ProblemData data = schnak::DatadrivenData(uT, vT, cfg.nt, cfg.u0, cfg.v0);
  bool ok = true;
  for (const auto &r : runs)
  {
    ok = ok && r.converged;
    std::printf("beta %.0e  |u-uh|^2 %.3e  |v-vh|^2 %.3e  |a|^2 %.4f  |b|^2 %.4f  "
                "MINRES %.1f  SQP %d  mean a(T) %.4f  mean b(T) %.4f%s\n",
                r.beta, r.cost.misfit_u, r.cost.misfit_v, r.cost.control_a, r.cost.control_b,
                r.minres_mean, r.sqp_iters, r.means.a.back(), r.means.b.back(),
                r.converged ? "" : "  (not converged)");
    log.Write({{"event", "beta"},
               {"beta", r.beta},
               {"misfit_u", r.cost.misfit_u},
               {"misfit_v", r.cost.misfit_v},
               {"control_a", r.cost.control_a},
               {"control_b", r.cost.control_b},
               {"minres_mean", r.minres_mean},
               {"sqp_iters", r.sqp_iters},
               {"converged", r.converged}});
    const std::string tag = "beta" + Tag(r.beta);
    std::ofstream means(fs::path(o.out) / ("means_" + tag + ".csv"));
    schnak::WriteMeansCsv(means, r.means);
    const auto &t = r.solution;
    for (double time : o.vtk_times)
    {
      const int i = static_cast<int>(std::lround(time / t.tau()));
      if (i < 0 || i > t.nt)
      {
        throw schnak::InvalidArgument("vtk time outside [0, T]");
      }
      // Controls live on the adjoint grid; take the point just before the state time.
      const int k = t.scheme == schnak::Scheme::kStormerVerlet ? std::max(i, 1) : i;
      const std::string file =
        (fs::path(o.out) / (tag + "_t" + Tag(t.StateTime(i)) + ".vtk")).string();
      schnak::WriteVtk(file, space->mesh(),
                       {{"u", &t.u[i]},
                        {"v", &t.v[i]},
                        {"u_hat", &data.u_hat[i]},
                        {"v_hat", &data.v_hat[i]},
                        {"a", &t.a[k]},
                        {"b", &t.b[k]}});
    }
  }
  return ok ? kExitOk : kExitDiverged;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Schnakenberg parameter identification with Stormer-Verlet all-at-once solves"};
  app.require_subcommand(1);

  ConvergeOptions co;
  auto *converge = app.add_subcommand("converge", "manufactured-solution convergence study");
  converge->add_option("--scheme", co.scheme, "sv or bwe")
    ->check(CLI::IsMember({"sv", "bwe"}))
    ->capture_default_str();
  converge->add_option("--beta", co.beta, "control cost weight")->capture_default_str();
  converge->add_option("--gamma", co.gamma, "reaction strength")->capture_default_str();
  converge->add_option("--levels", co.levels, "mesh levels, e.g. 1..2")->capture_default_str();
  converge->add_option("--T", co.T, "final time")->capture_default_str();
  converge->add_option("--tol-minres", co.tol_minres)->capture_default_str();
  converge->add_option("--tol-sqp", co.tol_sqp)->capture_default_str();
  converge->add_option("--sv-guess-scale", co.sv_guess_scale,
                       "target scale of the SV coarsest-level state guess")
    ->capture_default_str();
  converge->add_option("--out", co.out, "output directory")->capture_default_str();

  ForwardOptions fo;
  auto *forward = app.add_subcommand("forward", "forward simulation generating target patterns");
  forward->add_option("--a", fo.a)->capture_default_str();
  forward->add_option("--b", fo.b)->capture_default_str();
  forward->add_option("--gamma", fo.gamma, "reaction strength (required)");
  forward->add_option("--n", fo.n, "mesh intervals per side")->capture_default_str();
  forward->add_option("--T", fo.T, "final time")->capture_default_str();
  forward->add_option("--dt", fo.dt, "time step")->capture_default_str();
  forward->add_option("--amplitude", fo.amplitude, "initial bump on u")->capture_default_str();
  forward->add_option("--snapshot", fo.snapshots, "extra VTK snapshot times");
  forward->add_option("--out", fo.out, "output path without extension")->capture_default_str();

  IdentifyOptions io;
  auto *identify = app.add_subcommand("identify", "identify controls from a target snapshot");
  identify->add_option("--target", io.target, "snapshot dump (.hdr/.bin)")->required();
  identify->add_option("--beta", io.betas, "one or more control cost weights")
    ->capture_default_str();
  identify->add_option("--gamma", io.gamma, "reaction strength")->required();
  identify->add_option("--T", io.T, "final time")->capture_default_str();
  identify->add_option("--nt", io.nt, "time steps")->capture_default_str();
  identify->add_option("--n", io.n, "resample the target onto this mesh");
  identify->add_option("--tol-minres", io.tol_minres)->capture_default_str();
  identify->add_option("--tol-sqp", io.tol_sqp)->capture_default_str();
  identify->add_option("--vtk-time", io.vtk_times, "write VTK snapshots at these times");
  identify->add_option("--out", io.out, "output directory")->capture_default_str();

  std::string config_path;
  for (auto *sub : {converge, forward, identify})
  {
    sub->add_option("--config", config_path,
                    "key=value file; command-line flags take precedence");
  }

  try
  {
    std::vector<std::string> args = ExpandConfig(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  }
  catch (const CLI::CallForHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForAllHelp &e)
  {
    return app.exit(e);
  }
  catch (const CLI::CallForVersion &e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError &e)
  {
    app.exit(e);
    return kExitConfig;
  }
  catch (const schnak::InvalidArgument &e)
  {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  }

  try
  {
    if (converge->parsed())
    {
      return RunConverge(co);
    }
    if (forward->parsed())
    {
      return RunForward(fo);
    }
    return RunIdentify(io);
  }
  catch (const schnak::InvalidArgument &e)
  {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  }
  catch (const schnak::DivergedError &e)
  {
    std::cerr << "diverged at step " << e.step() << ": " << e.what() << '\n';
    return kExitDiverged;
  }
  catch (const schnak::SolverError &e)
  {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitDiverged;
  }
}
