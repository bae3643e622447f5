// saptlab: symbolic expansions, fixture/defect verification and grid
// experiments for the two-scaling adiabatic machinery.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sapt/grid.hpp"
#include "sapt/recursion.hpp"

namespace {

using namespace sapt;

enum ExitCode : int {
  kOk = 0,
  kVerifyMismatch = 1,
  kUsage = 2,
  kUnsupportedOrder = 3,
  kNumericFailure = 4,
};

std::filesystem::path out_dir() {
  const char* env = std::getenv("SAPTLAB_OUTDIR");
  std::filesystem::path p = env ? env : ".";
  std::filesystem::create_directories(p);
  return p;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream os(p);
  os << content;
  std::cout << "wrote " << p.string() << "\n";
}

struct GeoOptions {
  int N = 256;
  double L = 32.0, eps = 1.0, m = 1.0, k2 = 0.0, k3 = 0.0;
  std::string preset = "mixed";
  Geometry build() const {
    Geometry g;
    g.N = N;
    g.L = L;
    g.eps = eps;
    g.m = m;
    g.k2 = k2;
    g.k3 = k3;
    g.preset = preset;
    g.fields = preset_fields(preset);
    return g;
  }
};

int cmd_expand(const std::string& scaling, int order, const std::string& format,
               const std::string& what) {
  Scaling tag = scaling_from_name(scaling);
  AdiabaticChain chain = build_chain(tag, order);
  auto emit = [&](const std::string& name, const PowerSeries& s) {
    if (what != "all" && what != name) return;
    const std::string base = "expand_" + scaling + "_" + name + "_K" + std::to_string(order);
    if (format == "latex")
      write_file(out_dir() / (base + ".tex"), s.latex() + "\n");
    else
      write_file(out_dir() / (base + ".json"), s.to_json().dump(2) + "\n");
  };
  emit("pi", chain.pi);
  emit("u", chain.u);
  emit("h", chain.h);
  emit("heff", chain.h_eff);
  return kOk;
}

int cmd_verify(const std::string& scaling, int order) {
  bool all_pass = true;
  nlohmann::json report;
  report["fixture_version"] = fixture_version();

  auto run_scaling = [&](Scaling tag, int K) {
    ScalingConfig cfg = make_config(tag, K);
    PowerSeries pi = build_projection(cfg, K);
    PowerSeries u = build_unitary(cfg, K, pi);
    PowerSeries h = diagonalize_hamiltonian(cfg, K, u);
    PowerSeries heff = effective_hamiltonian(cfg, K, h);

    nlohmann::json defects = nlohmann::json::array();
    for (const auto& rep : verify_defects(cfg, pi, u, K)) {
      defects.push_back(rep.to_json());
      if (!rep.pass) all_pass = false;
      std::cout << scaling_name(tag) << " defect " << rep.kind << " through order " << K << ": "
                << (rep.pass ? "pass" : "FAIL") << "\n";
    }
    report[scaling_name(tag)]["defects"] = defects;

    nlohmann::json fixtures = nlohmann::json::array();
    auto check = [&](const std::string& name, const PowerSeries& computed) {
      FixtureDiff d = compare_fixture(name, computed);
      fixtures.push_back(d.to_json());
      if (!d.pass) all_pass = false;
      std::cout << "fixture " << name << ": " << (d.pass ? "pass" : "FAIL") << "\n";
    };
    if (tag == Scaling::nr) {
      if (K >= 3) {
        check("nr_pi3", pi);
        check("nr_pi3_defect", pi);
        check("nr_h3", h);
      }
      if (K >= 4) check("nr_heff4", heff);
      report["nr"]["u3_adjudication"] = adjudicate_u3().to_json();
    } else if (K >= 3) {
      check("sr_heff3", heff);
    }
    report[scaling_name(tag)]["fixtures"] = fixtures;
  };

  if (scaling == "nr" || scaling == "all") run_scaling(Scaling::nr, std::min(order, 4));
  if (scaling == "sr" || scaling == "all") run_scaling(Scaling::sr, std::min(order, 3));

  TaylorReport taylor = taylor_compare_scalings(4);
  report["taylor"] = taylor.to_json();
  MatrixSymbol darwin =
      (MatrixSymbol::laplace_v() * MatrixSymbol::pi_ref())
          .scaled(ScalarExpr::eps(2) * ScalarExpr::mass(-2).scaled(Rational(1, 8)));
  const bool taylor_ok = taylor.zero_through(3) && taylor.residual.coeff(4) == darwin;
  report["taylor"]["pass"] = taylor_ok;
  if (!taylor_ok) all_pass = false;
  std::cout << "taylor consistency: " << (taylor_ok ? "pass" : "FAIL") << "\n";

  write_file(out_dir() / "verify_report.json", report.dump(2) + "\n");
  return all_pass ? kOk : kVerifyMismatch;
}

std::vector<double> parse_clist(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.empty()) throw CLI::ValidationError("--clist", "empty c list");
  return out;
}

void emit_report(const ExperimentReport& rep, const std::string& base) {
  write_file(out_dir() / (base + ".csv"), rep.csv());
  write_file(out_dir() / (base + ".json"), rep.to_json().dump(2) + "\n");
  std::cout << rep.kind << ": slope=" << rep.fit.slope << " intercept=" << rep.fit.intercept
            << " r2=" << rep.fit.r_squared << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-scaling adiabatic expansions for the Dirac equation: "
               "symbolic series, fixture verification, grid experiments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string scaling = "nr", format = "json", what = "all", clist = "4,8,16,32";
  int order = 3;
  double time = 1.0;
  std::uint64_t seed = 0;
  GeoOptions geo;

  auto add_geo = [&](CLI::App* cmd) {
    cmd->add_option("--N", geo.N, "grid points (power of two)");
    cmd->add_option("--L", geo.L, "box length");
    cmd->add_option("--eps", geo.eps, "semiclassical parameter");
    cmd->add_option("--mass", geo.m, "particle mass");
    cmd->add_option("--k2", geo.k2, "transverse momentum 2");
    cmd->add_option("--k3", geo.k3, "transverse momentum 3");
    cmd->add_option("--preset", geo.preset, "free | electric | magnetic | mixed");
    cmd->add_option("--clist", clist, "comma-separated c values");
    cmd->add_option("--seed", seed, "seed recorded in reports");
  };

  auto* expand = app.add_subcommand("expand", "emit pi/u/h/h_eff series");
  expand->fallthrough();
  expand->add_option("--scaling", scaling, "nr | sr")->required();
  expand->add_option("--order", order, "truncation order")->required();
  expand->add_option("--format", format, "json | latex");
  expand->add_option("--what", what, "pi | u | h | heff | all");

  auto* verify = app.add_subcommand("verify", "defect suites + fixture comparisons");
  verify->fallthrough();
  verify->add_option("--scaling", scaling, "nr | sr | all");
  verify->add_option("--order", order, "maximum order to verify");

  auto* simulate = app.add_subcommand("simulate", "dynamics error-scaling experiment");
  simulate->fallthrough();
  simulate->add_option("--scaling", scaling, "nr | sr");
  simulate->add_option("--order", order, "effective order");
  simulate->add_option("--time", time, "propagation time");
  add_geo(simulate);

  auto* residual = app.add_subcommand("residual", "spectral residual experiment");
  residual->fallthrough();
  residual->add_option("--scaling", scaling, "nr | sr");
  residual->add_option("--order", order, "series order k");
  add_geo(residual);

  auto* oracle = app.add_subcommand("oracle", "composition oracle Op(f)Op(g) vs Op(f#g)");
  oracle->fallthrough();
  oracle->add_option("--scaling", scaling, "nr | sr");
  oracle->add_option("--order", order, "number of expansion orders kept");
  add_geo(oracle);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config mirroring the flags");
  app.allow_config_extras(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw std::invalid_argument("cannot open config: " + config_path);
      nlohmann::json j;
      is >> j;
      if (j.contains("scaling")) scaling = j["scaling"].get<std::string>();
      if (j.contains("order")) order = j["order"].get<int>();
      if (j.contains("format")) format = j["format"].get<std::string>();
      if (j.contains("time")) time = j["time"].get<double>();
      if (j.contains("seed")) seed = j["seed"].get<std::uint64_t>();
      if (j.contains("preset")) geo.preset = j["preset"].get<std::string>();
      if (j.contains("c_list")) {
        clist.clear();
        for (auto& v : j["c_list"]) clist += (clist.empty() ? "" : ",") + std::to_string(v.get<double>());
      }
      if (j.contains("geometry")) {
        auto& g = j["geometry"];
        if (g.contains("N")) geo.N = g["N"].get<int>();
        if (g.contains("L")) geo.L = g["L"].get<double>();
        if (g.contains("eps")) geo.eps = g["eps"].get<double>();
        if (g.contains("m")) geo.m = g["m"].get<double>();
        if (g.contains("k2")) geo.k2 = g["k2"].get<double>();
        if (g.contains("k3")) geo.k3 = g["k3"].get<double>();
      }
    }

    if (expand->parsed()) return cmd_expand(scaling, order, format, what);
    if (verify->parsed()) return cmd_verify(scaling == "nr" || scaling == "sr" ? scaling : "all",
                                            order);
    if (simulate->parsed()) {
      auto rep = error_scaling_experiment(order, scaling_from_name(scaling), parse_clist(clist),
                                          time, StateSpec{}, geo.build(), seed);
      emit_report(rep, "simulate_" + scaling + "_K" + std::to_string(order) + "_" + geo.preset);
      return kOk;
    }
    if (residual->parsed()) {
      auto rep = spectral_residual_experiment(order, scaling_from_name(scaling),
                                              parse_clist(clist), geo.build(), seed);
      emit_report(rep, "residual_" + scaling + "_K" + std::to_string(order) + "_" + geo.preset);
      return kOk;
    }
    if (oracle->parsed()) {
      MatrixSymbol f = MatrixSymbol::xi_dot_alpha();
      auto rep = composition_oracle(f, f, order, scaling_from_name(scaling), parse_clist(clist),
                                    geo.build(), seed);
      emit_report(rep, "oracle_" + scaling + "_N" + std::to_string(order) + "_" + geo.preset);
      return kOk;
    }
  } catch (const UnsupportedOrder& e) {
    std::cerr << "unsupported order: " << e.what() << "\n";
    return kUnsupportedOrder;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  }
  return kUsage;
}
