#include "sloworbit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sloworbit/error.hpp"
#include "sloworbit/report.hpp"
#include "sloworbit/spectral.hpp"
#include "sloworbit/theorems.hpp"
#include "sloworbit/verification.hpp"
#include "sloworbit/zoo.hpp"

namespace sloworbit {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string model = "shift";
  double s_max = 0.0;  // 0: model default
  std::size_t n = 0;
  double p = 2.0;
  int k_max = 20;
  std::string matrix;
  double t_max = 0.0;
  double dt = 0.0;
  std::vector<double> m{5.0, 10.0, 20.0};
  int k = 3;
  double delta = 0.1;
  int n_smooth = 0;
  double smooth_delta = 0.1;
  bool skip_s0_check = false;
  std::string h = "identity";
  double horizon = 10.0;
  double t0 = 20.0;
  double beta = 0.0;
  double plateau = 0.0;
  double ramp = 0.0;
  int probes = 8;
  int samples = 50;
  std::string witness;
  std::string out = "out";
  std::uint64_t seed = 1;
  bool serial = false;
  std::string target;
  std::string zoo_action;
};

ModelParams model_params(const RunConfig& c) {
  ModelParams p;
  p.name = c.model;
  if (c.model == "shift") {
    p.s_max = c.s_max > 0 ? c.s_max : 400.0;
    p.n = c.n > 0 ? c.n : 4000;
  } else if (c.model == "gvw") {
    p.s_max = c.s_max > 0 ? c.s_max : 8.0;
    p.n = c.n > 0 ? c.n : 80000;
    p.p = c.p;
  } else if (c.model == "zabczyk") {
    p.k_max = c.k_max;
  } else if (c.model == "matrix") {
    if (c.matrix.empty()) throw Error(ErrorKind::Usage, "--model matrix needs --matrix PATH");
    if (!fs::exists(c.matrix)) throw Error(ErrorKind::Io, "matrix file not found: " + c.matrix);
    p.path = c.matrix;
  } else {
    throw Error(ErrorKind::Usage, "unknown model '" + c.model + "' (shift, gvw, zabczyk, matrix)");
  }
  return p;
}

TimeGrid time_grid(const RunConfig& c, const ModelDescriptor& model) {
  const TimeGrid def = default_time_grid(model);
  return TimeGrid(c.t_max > 0 ? c.t_max : def.t_max(), c.dt > 0 ? c.dt : def.dt());
}

json config_json(const RunConfig& c, const std::string& command) {
  return {{"command", command},
          {"target", c.target},
          {"model", c.model},
          {"s_max", c.s_max},
          {"n", c.n},
          {"p", c.p},
          {"k_max", c.k_max},
          {"matrix", c.matrix},
          {"t_max", c.t_max},
          {"dt", c.dt},
          {"m", c.m},
          {"k", c.k},
          {"delta", c.delta},
          {"n_smooth", c.n_smooth},
          {"smooth_delta", c.smooth_delta},
          {"skip_s0_check", c.skip_s0_check},
          {"h", c.h},
          {"horizon", c.horizon},
          {"t0", c.t0},
          {"beta", c.beta},
          {"plateau", c.plateau},
          {"ramp", c.ramp},
          {"probes", c.probes},
          {"samples", c.samples},
          {"seed", c.seed}};
}

void write_vector(const fs::path& file, const CVector& v, const SpaceGrid& g) {
  std::ostringstream s;
  write_csv(s, v, g);
  std::ofstream f(file, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + file.string());
  f << s.str();
}

json stamp(json body, const json& config) {
  body["config"] = config;
  body["config_hash"] = config_hash(config);
  body["tolerances"] = tolerances_json();
  return body;
}

int cmd_zoo(const RunConfig& c, std::ostream& out) {
  if (c.zoo_action != "list") throw Error(ErrorKind::Usage, "zoo supports: list");
  out << zoo_catalog().dump(2) << "\n";
  return kExitOk;
}

int cmd_spectral(const RunConfig& c, std::ostream& out) {
  const auto model = build_model(model_params(c));
  SpectralOptions opt;
  opt.t_max = c.t_max;
  opt.dt = c.dt;
  opt.seed = c.seed;
  const auto rep = spectral_report(model, opt);
  const auto diagram = diagram_check(rep, 1e-3);
  const json cfg = config_json(c, "spectral");
  const fs::path dir(c.out);
  emit_report(stamp(spectral_json(rep, diagram), cfg), ReportFormat::Json, dir / "spectral_report.json");
  emit_report(scan_csv_rows(rep), ReportFormat::Csv, dir / "scan.csv");
  bool ok = true;
  for (const auto& e : diagram) ok = ok && e.pass;
  out << "s = " << rep.s << ", omega1 = " << rep.omega1.omega1 << ", omega0 = " << rep.omega0.omega0
      << " (" << rep.omega0.bound_side << "), diagram " << (ok ? "PASS" : "FAIL") << "\n";
  return ok ? kExitOk : kExitVerification;
}

int cmd_construct(const RunConfig& c, std::ostream& out) {
  const auto model = build_model(model_params(c));
  const TimeGrid tg = time_grid(c, model);
  const json cfg = config_json(c, "construct");
  const fs::path dir(c.out);
  const SpaceGrid& g = *model.grid();
  TheoremOptions opt;
  opt.delta = c.delta;
  opt.seed = c.seed;
  opt.check_s0 = !c.skip_s0_check;
  opt.exec = c.serial ? Exec::Serial : Exec::Parallel;

  if (c.target == "theorem1" || c.target == "theorem2") {
    const auto w = c.target == "theorem1"
                       ? theorem1_construct(model, c.m, c.k, tg, opt)
                       : theorem2_construct(model, c.m, c.k, tg, c.n_smooth, c.smooth_delta, opt);
    write_witness(w, model, tg, dir, cfg);
    for (const auto& lv : w.levels) {
      out << "level " << lv.k << ": mu(U) = " << lv.U.measure() << ", gamma = " << lv.gamma
          << ", signs " << lv.signs.str() << "\n";
    }
    out << "witness written to " << (dir / "witness.json").string() << "\n";
    return kExitOk;
  }
  if (c.target == "theorem0") {
    const auto h = DivergenceSpec::parse(c.h);
    auto [x, ev] = theorem0_construct(model, h, c.horizon, tg);
    json body = theorem0_json(ev);
    body["x"] = "x.csv";
    body["model"] = model_params_json(model.params);
    body["h"] = h.description;
    emit_report(stamp(body, cfg), ReportFormat::Json, dir / "theorem0.json");
    write_vector(dir / "x.csv", x.values, g);
    out << "lower bound (global C) = " << ev.lower_bound_global
        << ", lower bound (unit window) = " << ev.lower_bound_window << "\n";
    return kExitOk;
  }
  if (c.target == "lemma1") {
    Lemma1Options lo;
    lo.dt = tg.dt();
    lo.beta = c.beta;
    const auto p = lemma1_construct(model, c.delta, c.t0, lo);
    json body = pair_json(p);
    body["y"] = "y.csv";
    emit_report(stamp(body, cfg), ReportFormat::Json, dir / "lemma1.json");
    write_vector(dir / "y.csv", p.y.values, g);
    out << "beta = " << p.beta << ", sup deviation = " << p.cert_sup_dev << " < " << c.delta << "\n";
    return kExitOk;
  }
  if (c.target == "lemma2") {
    Lemma2Options lo;
    lo.plateau = c.plateau;
    lo.ramp = c.ramp;
    lo.dt = tg.dt();
    const int order = c.n_smooth > 0 ? c.n_smooth : 3;
    const auto r = lemma2_construct(model, c.delta, order, lo);
    json body = lemma2_json(r);
    body["y"] = "y.csv";
    emit_report(stamp(body, cfg), ReportFormat::Json, dir / "lemma2.json");
    write_vector(dir / "y.csv", r.y.values, g);
    out << "||A^k y|| for k = 0.." << order << ":";
    for (double v : r.budget.norms) out << " " << v;
    out << "\n";
    return kExitOk;
  }
  throw Error(ErrorKind::Usage, "construct target must be theorem1, theorem2, theorem0, lemma1 or lemma2");
}

int cmd_verify(const RunConfig& c, bool model_given, std::ostream& out) {
  if (c.witness.empty()) throw Error(ErrorKind::Usage, "verify needs --witness PATH");
  std::ifstream in(c.witness);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + c.witness);
  json head;
  try {
    in >> head;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("witness: ") + e.what());
  }
  const ModelParams params = model_params_from_json(head.at("model"));
  if (model_given && params.name != c.model) {
    throw Error(ErrorKind::Usage, "witness was built on model '" + params.name + "', not '" + c.model + "'");
  }
  const auto model = build_model(params);
  const auto w = read_witness(c.witness, model);
  const TimeGrid tg(w.t_max, w.dt);
  const auto audit = audit_witness(w, model, tg);
  const auto div = divergence_ledger(w, model, DivergenceSpec::parse(c.h), tg);
  json body{{"witness", audit_json(audit)}, {"divergence", divergence_json(div)}, {"h", c.h}};
  body["ledger"] = ledger_json(w.ledger);
  emit_report(stamp(body, config_json(c, "verify")), ReportFormat::Json, fs::path(c.out) / "verify.json");
  for (const auto& l : audit.levels) {
    out << "level " << l.k << ": mu = " << l.measure << " (m = " << l.m << "), min |<x',T_t x>| = " << l.min_pairing
        << " vs gamma = " << l.gamma << (l.pass ? "  ok" : "  FAIL") << "\n";
  }
  out << "divergence floor " << div.lower_bound << ", quadrature " << div.final_partial << "\n";
  if (!audit.pass) {
    throw Error(ErrorKind::Verification, "witness check failed at t = " + format_number(audit.first_failure_t) +
                                             ": " + audit.message);
  }
  if (!div.pass) throw Error(ErrorKind::Verification, "quadrature falls below the divergence floor");
  return kExitOk;
}

int cmd_report(const RunConfig& c, std::ostream& out) {
  const auto model = build_model(model_params(c));
  const TimeGrid tg = time_grid(c, model);
  SpectralOptions opt;
  opt.t_max = c.t_max;
  opt.dt = c.dt;
  opt.seed = c.seed;
  const auto rep = spectral_report(model, opt);
  const auto diagram = diagram_check(rep, 1e-3);
  const auto global = check_backward_estimate(model, tg, BackwardMode::Global, c.probes, c.seed);
  const auto window = check_backward_estimate(model, tg, BackwardMode::UnitWindow, c.probes, c.seed);
  json body{{"model", model_params_json(model.params)},
            {"spectral", spectral_json(rep, diagram)},
            {"backward_global", backward_json(global)},
            {"backward_window", backward_json(window)}};
  bool ok = global.pass && window.pass;
  for (const auto& e : diagram) ok = ok && e.pass;
  if (model.name == "gvw") {
    const auto wl = weak_l1_check(model, c.samples, model.grid()->s_max() / 2.0, 1e-6, c.seed);
    body["weak_l1"] = weak_l1_json(wl);
    ok = ok && wl.pass && wl.non_ues;
  }
  emit_report(stamp(body, config_json(c, "report")), ReportFormat::Json, fs::path(c.out) / "report.json");
  out << "report " << (ok ? "PASS" : "FAIL") << ": " << (fs::path(c.out) / "report.json").string() << "\n";
  return ok ? kExitOk : kExitVerification;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Verification:
      return kExitVerification;
    case ErrorKind::ConstructionFailure:
    case ErrorKind::Horizon:
    case ErrorKind::Precision:
    case ErrorKind::Infeasible:
    case ErrorKind::Precondition:
    case ErrorKind::Degenerate:
    case ErrorKind::Singular:
      return kExitConstruction;
    default:
      return kExitUsage;
  }
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Slowly decaying weak orbits of C0-semigroups", "sloworbit"};
  app.set_config("--config", "", "key=value file mirroring the long flags");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--model", c.model, "shift | gvw | zabczyk | matrix");
  app.add_option("--s-max", c.s_max, "spatial window length");
  app.add_option("--n", c.n, "spatial cells");
  app.add_option("--p", c.p, "Lp exponent of the gvw norm");
  app.add_option("--k-max", c.k_max, "largest Zabczyk block");
  app.add_option("--matrix", c.matrix, "matrix JSON file for --model matrix");
  app.add_option("--t-max", c.t_max, "time grid length (0: model default)");
  app.add_option("--dt", c.dt, "time step (0: model default)");
  app.add_option("--m", c.m, "level measures m_1, m_2, ...")->delimiter(',');
  app.add_option("--k", c.k, "number of levels K");
  app.add_option("--delta", c.delta, "approximate eigenvector accuracy");
  app.add_option("--n-smooth", c.n_smooth, "smoothness order");
  app.add_option("--smooth-delta", c.smooth_delta, "bound on ||A^k y||");
  app.add_flag("--skip-s0-check", c.skip_s0_check, "skip the resolvent blowup precondition");
  app.add_option("--divergence", c.h, "identity | power:q | indicator:t | log1p | table:path");
  app.add_option("--horizon", c.horizon, "construct theorem0 horizon");
  app.add_option("--t0", c.t0, "certificate horizon for lemma1");
  app.add_option("--beta", c.beta, "window frequency for lemma1 on shift models");
  app.add_option("--plateau", c.plateau, "lemma2 window plateau");
  app.add_option("--ramp", c.ramp, "lemma2 window ramp");
  app.add_option("--probes", c.probes, "probe vectors for backward estimates");
  app.add_option("--samples", c.samples, "random samples for the weak L1 check");
  app.add_option("--out", c.out, "output directory (SLOWORBIT_OUTPUT_DIR overrides)");
  app.add_option("--seed", c.seed, "seed for randomized probes");
  app.add_flag("--serial", c.serial, "use the serial reference kernels");

  auto* zoo = app.add_subcommand("zoo", "model catalog");
  zoo->add_option("action", c.zoo_action, "list")->required();
  auto* spectral = app.add_subcommand("spectral", "s, s0 indicator, omega1, omega0 and the inequality diagram");
  auto* construct = app.add_subcommand("construct", "build a witness or approximate eigenvector");
  construct->add_option("target", c.target, "theorem1 | theorem2 | theorem0 | lemma1 | lemma2")->required();
  auto* verify = app.add_subcommand("verify", "re-check a witness from scratch");
  verify->add_option("--witness", c.witness, "witness.json path");
  auto* report = app.add_subcommand("report", "spectral, backward-estimate and weak L1 report for a model");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "sloworbit: " << e.what() << "\n";
    return kExitUsage;
  }
  if (const char* env = std::getenv("SLOWORBIT_OUTPUT_DIR"); env != nullptr && *env != '\0') c.out = env;

  try {
    if (zoo->parsed()) return cmd_zoo(c, out);
    if (spectral->parsed()) return cmd_spectral(c, out);
    if (construct->parsed()) return cmd_construct(c, out);
    if (verify->parsed()) return cmd_verify(c, app.count("--model") > 0, out);
    if (report->parsed()) return cmd_report(c, out);
  } catch (const Error& e) {
    err << "sloworbit: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "sloworbit: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run_command(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_command(args, std::cout, std::cerr);
}

}  // namespace sloworbit
