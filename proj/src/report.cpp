#include "sloworbit/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sloworbit/error.hpp"
#include "sloworbit/kernels.hpp"

namespace sloworbit {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& file, const std::string& content) {
  if (file.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(file.parent_path(), ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + file.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + file.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed: " + file.string());
}

json pairs_json(const std::vector<std::pair<double, double>>& v) {
  json a = json::array();
  for (const auto& [x, y] : v) a.push_back({x, y});
  return a;
}

json scale_json(const GraphNormScale& s) { return {{"order", s.order}, {"norms", s.norms}}; }

}  // namespace

std::string config_hash(const json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : config.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json tolerances_json() {
  return {{"measure", 1e-9},
          {"eq2", 1e-6},
          {"divergence_floor", 1e-6},
          {"backward_slack", -1e-9},
          {"diagram", 1e-3},
          {"resolvent_singular_sigma", 1e-12},
          {"time_alignment", 1e-9}};
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_report(const json& results, ReportFormat format, const fs::path& file) {
  if (format == ReportFormat::Json) {
    write_file(file, results.dump(2) + "\n");
    return;
  }
  if (!results.contains("columns") || !results.contains("rows")) {
    throw Error(ErrorKind::Usage, "csv report needs columns and rows");
  }
  std::ostringstream out;
  bool first = true;
  for (const auto& c : results["columns"]) {
    out << (first ? "" : ",") << c.get<std::string>();
    first = false;
  }
  out << "\n";
  for (const auto& row : results["rows"]) {
    first = true;
    for (const auto& v : row) {
      out << (first ? "" : ",");
      if (v.is_number_integer()) {
        out << v.get<long long>();
      } else if (v.is_number()) {
        out << format_number(v.get<double>());
      } else {
        out << v.get<std::string>();
      }
      first = false;
    }
    out << "\n";
  }
  write_file(file, out.str());
}

json timeset_json(const TimeSet& u) { return pairs_json(u.intervals()); }

TimeSet timeset_from_json(const json& j, double dt) {
  std::vector<std::pair<double, double>> iv;
  for (const auto& p : j) iv.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return TimeSet::from_intervals(iv, dt);
}

json ledger_json(const ConstructionLedger& l) {
  json conditions = json::array();
  for (const auto& c : l.conditions) {
    conditions.push_back({{"name", c.name},
                          {"level", c.level},
                          {"i", c.i},
                          {"holds", c.holds},
                          {"slack", c.slack},
                          {"measured", c.measured},
                          {"bound", c.bound}});
  }
  json cross = json::array();
  for (const auto& c : l.cross_terms) {
    cross.push_back({{"l", c.l}, {"i", c.i}, {"max_s", c.max_s}, {"below_three", c.below_three}});
  }
  json bounds = json::array();
  for (const auto& b : l.level_bounds) {
    bounds.push_back({{"after_level", b.after_level},
                      {"i", b.i},
                      {"measured_min", b.measured_min},
                      {"bound", b.bound},
                      {"slack", b.slack}});
  }
  json pairs = json::array();
  for (const auto& p : l.pairs) {
    pairs.push_back({{"level", p.level},
                     {"source", p.source},
                     {"beta", p.beta},
                     {"t0", p.t0},
                     {"cert_sup_dev", p.cert_sup_dev},
                     {"residual", p.residual},
                     {"residual_budget", p.residual_budget},
                     {"certified", p.certified},
                     {"norm_min", p.norm_min},
                     {"norm_max", p.norm_max},
                     {"window", {{"left", p.window_left}, {"plateau", p.window_plateau}, {"ramp", p.window_ramp}}}});
  }
  json u_tilde = json::array();
  for (const auto& u : l.u_tilde) u_tilde.push_back(timeset_json(u));
  json tails = json::array();
  for (const auto& [i, m] : l.tail_margins) tails.push_back({{"i", i}, {"margin", m}});
  json out{{"conditions", conditions},
           {"cross_terms", cross},
           {"level_bounds", bounds},
           {"pairs", pairs},
           {"u_tilde", u_tilde},
           {"weak_limit_decay", l.weak_limit_decay},
           {"eq5_min", l.eq5_min},
           {"eq4_bracket", l.eq4_bracket},
           {"short_circuit", l.short_circuit},
           {"short_circuit_note", l.short_circuit_note},
           {"warnings", l.warnings},
           {"tail_margins", tails}};
  if (l.smooth_order > 0) {
    json budgets = json::array();
    for (const auto& b : l.smooth_budgets) budgets.push_back(scale_json(b));
    out["smooth"] = {{"order", l.smooth_order},
                     {"budgets", budgets},
                     {"partial_sums", l.smooth_partial_sums},
                     {"tails", l.smooth_tails}};
  }
  return out;
}

json witness_json(const SlowOrbitWitness& w, const std::string& x_ref, const std::string& xp_ref) {
  json levels = json::array();
  for (const auto& lv : w.levels) {
    levels.push_back({{"k", lv.k},
                      {"n_k", lv.n_k},
                      {"gamma", lv.gamma},
                      {"m", lv.m},
                      {"measure", lv.U.measure()},
                      {"U", timeset_json(lv.U)},
                      {"signs", lv.signs.str()},
                      {"coefficient", lv.coefficient},
                      {"beta", lv.beta}});
  }
  return {{"theorem", w.theorem},
          {"model", model_params_json(w.model)},
          {"dt", w.dt},
          {"t_max", w.t_max},
          {"seed", w.seed},
          {"x", x_ref},
          {"xp", xp_ref},
          {"levels", levels},
          {"ledger", ledger_json(w.ledger)}};
}

void write_witness(const SlowOrbitWitness& w, const ModelDescriptor& model, const TimeGrid& tg, const fs::path& dir,
                   const json& config) {
  const SpaceGrid& g = *model.grid();
  json j = witness_json(w, "x.csv", "xp.csv");
  j["config"] = config;
  j["config_hash"] = config_hash(config);
  j["tolerances"] = tolerances_json();
  write_file(dir / "witness.json", j.dump(2) + "\n");

  std::ostringstream xs, xps;
  write_csv(xs, w.x.values, g);
  write_csv(xps, w.xp.values, g);
  write_file(dir / "x.csv", xs.str());
  write_file(dir / "xp.csv", xps.str());

  const std::size_t steps = tg.size() - 1;
  const auto z = weak_orbit(*model.evaluator, w.xp.values, w.x.values, steps, tg.dt());
  std::ostringstream orbit;
  orbit << "t,pairing_abs,level_mask\n";
  for (std::size_t k = 0; k <= steps; ++k) {
    unsigned mask = 0;
    for (const auto& lv : w.levels) {
      if (lv.U.contains(k)) mask |= 1u << (lv.k - 1);
    }
    orbit << format_number(tg[k]) << "," << format_number(std::abs(z[k])) << "," << mask << "\n";
  }
  write_file(dir / "orbit.csv", orbit.str());
}

SlowOrbitWitness read_witness(const fs::path& file, const ModelDescriptor& model) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, "witness " + file.string() + ": " + e.what());
  }
  SlowOrbitWitness w;
  try {
    w.theorem = j.at("theorem").get<std::string>();
    w.model = model_params_from_json(j.at("model"));
    w.dt = j.at("dt").get<double>();
    w.t_max = j.at("t_max").get<double>();
    w.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& lj : j.at("levels")) {
      WitnessLevel lv;
      lv.k = lj.at("k").get<int>();
      lv.n_k = lj.at("n_k").get<double>();
      lv.gamma = lj.at("gamma").get<double>();
      lv.m = lj.at("m").get<double>();
      lv.U = timeset_from_json(lj.at("U"), w.dt);
      lv.signs = SignPair::parse(lj.at("signs").get<std::string>());
      lv.coefficient = lj.at("coefficient").get<double>();
      lv.beta = lj.at("beta").get<double>();
      w.levels.push_back(lv);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, "witness " + file.string() + ": " + e.what());
  }
  const fs::path base = file.parent_path();
  auto load = [&](const std::string& key) {
    const fs::path p = base / j.at(key).get<std::string>();
    std::ifstream f(p);
    if (!f) throw Error(ErrorKind::Io, "cannot read " + p.string());
    return read_csv(f, *model.grid());
  };
  w.x = GridFunction(load("x"), model.grid(), model.norm_spec);
  w.xp = DualGridFunction(load("xp"), model.grid(), model.norm_spec);
  return w;
}

json spectral_json(const SpectralReport& r, const std::vector<DiagramEntry>& diagram) {
  json scans = json::array();
  for (const auto& s : r.s0_indicator) {
    scans.push_back({{"alpha", s.alpha},
                     {"peak_beta", s.peak_beta},
                     {"peak_norm", s.peak_norm},
                     {"peak_singular", s.peak_singular},
                     {"alpha_times_peak", s.alpha * s.peak_norm}});
  }
  json d = json::array();
  for (const auto& e : diagram) {
    d.push_back({{"inequality", e.inequality}, {"pass", e.pass}, {"slack", e.slack}, {"note", e.note}});
  }
  json s0 = r.s0_available ? json(r.s0_estimate) : json(nullptr);
  return {{"model", r.model},
          {"s", r.s},
          {"s_source", r.s_source},
          {"s0_estimate", s0},
          {"s0_available", r.s0_available},
          {"s0_indicator", scans},
          {"omega0",
           {{"value", r.omega0.omega0},
            {"bound_side", r.omega0.bound_side},
            {"fit_window", {r.omega0.t_lo, r.omega0.t_hi}},
            {"points", r.omega0.points}}},
          {"omega1",
           {{"value", r.omega1.omega1},
            {"order", r.omega1.order},
            {"samples", r.omega1.samples},
            {"slopes", r.omega1.slopes},
            {"fit_window", {r.omega1.t_lo, r.omega1.t_hi}},
            {"smoothing", r.omega1.smoothing}}},
          {"growth_constant", r.growth_constant},
          {"diagram", d}};
}

json scan_csv_rows(const SpectralReport& r) {
  json rows = json::array();
  for (const auto& s : r.s0_indicator) {
    for (std::size_t i = 0; i < s.betas.size(); ++i) rows.push_back({s.alpha, s.betas[i], s.norms[i]});
  }
  return {{"columns", {"alpha", "beta", "resolvent_norm"}}, {"rows", rows}};
}

json pair_json(const ApproxEigenpair& p) {
  return {{"beta", p.beta},
          {"residual", p.residual},
          {"generator_norm", p.generator_norm},
          {"abs_beta", std::abs(p.beta)},
          {"delta", p.delta},
          {"t0", p.t0},
          {"cert_sup_dev", p.cert_sup_dev},
          {"sup_norm", p.sup_norm},
          {"residual_budget", p.residual_budget},
          {"certified", p.certified},
          {"method", p.method},
          {"window", {{"left", p.window_left}, {"plateau", p.window_plateau}, {"ramp", p.window_ramp}}}};
}

json lemma2_json(const Lemma2Result& r) {
  return {{"budget", scale_json(r.budget)},
          {"resolvent_at_epsilon", r.resolvent_at_epsilon},
          {"stacked_sigma", r.stacked_sigma},
          {"cert_sup_dev", r.cert_sup_dev},
          {"window", {{"left", r.window_left}, {"plateau", r.window_plateau}, {"ramp", r.window_ramp}}}};
}

json theorem0_json(const Theorem0Evidence& e) {
  return {{"alphas", e.alphas},
          {"norms_at_n", e.norms_at_n},
          {"c_global", e.c_global},
          {"c_window", e.c_window},
          {"norm_side", e.norm_side},
          {"lb_global", e.lb_global},
          {"lb_window", e.lb_window},
          {"lower_bound_global", e.lower_bound_global},
          {"lower_bound_window", e.lower_bound_window},
          {"quadrature", e.partials.empty() ? 0.0 : e.partials.back().second},
          {"hump_times", e.hump_times},
          {"min_operator_norm", e.min_operator_norm}};
}

json audit_json(const WitnessAudit& a) {
  json levels = json::array();
  for (const auto& l : a.levels) {
    levels.push_back({{"k", l.k},
                      {"measure", l.measure},
                      {"m", l.m},
                      {"gamma", l.gamma},
                      {"min_pairing", l.min_pairing},
                      {"slack", l.min_pairing - l.gamma},
                      {"argmin_t", l.argmin_t},
                      {"pass", l.pass}});
  }
  json tails = json::array();
  for (const auto& t : a.tails) {
    tails.push_back({{"i", t.i}, {"bound", t.bound}, {"target", t.target}, {"slack", t.bound - t.target}, {"pass", t.pass}});
  }
  json out{{"levels", levels}, {"tails", tails}, {"pass", a.pass}};
  if (!a.pass) {
    out["first_failure_t"] = a.first_failure_t;
    out["message"] = a.message;
  }
  return out;
}

json backward_json(const BackwardReport& r) {
  return {{"mode", std::string(to_string(r.mode))},
          {"c", r.c},
          {"c_side", r.c_side},
          {"worst_slack", r.worst_slack},
          {"worst_t", r.worst_t},
          {"worst_t0", r.worst_t0},
          {"checks", r.checks},
          {"pass", r.pass}};
}

json eq2_json(const Eq2Result& r) {
  return {{"lhs", r.lhs}, {"rhs", r.rhs}, {"sup_norm", r.sup_norm}, {"pass", r.pass}};
}

json divergence_json(const DivergenceLedger& d) {
  return {{"lower_bound", d.lower_bound}, {"final_partial", d.final_partial}, {"pass", d.pass}};
}

json weak_l1_json(const WeakL1Report& r) {
  return {{"support_end", r.support_end},
          {"sweep_time", r.sweep_time},
          {"tails", r.tails},
          {"max_tail", r.max_tail},
          {"pass", r.pass},
          {"probe_time", r.probe_time},
          {"non_ues_ratio", r.non_ues_ratio},
          {"non_ues", r.non_ues}};
}

}  // namespace sloworbit
