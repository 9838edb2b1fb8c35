#include "sloworbit/zoo.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include "sloworbit/error.hpp"

namespace sloworbit {

using nlohmann::json;

bool ModelDescriptor::hilbert_norm() const {
  return norm_spec.kind == NormSpec::Kind::Euclidean ||
         (norm_spec.kind == NormSpec::Kind::Lp && norm_spec.p == 2.0);
}

CMatrix upper_shift(int k) {
  CMatrix s = CMatrix::Zero(k, k);
  for (int i = 0; i + 1 < k; ++i) s(i, i + 1) = 1.0;
  return s;
}

ModelDescriptor build_shift_model(double s_max, std::size_t n) {
  if (n < 16) throw Error(ErrorKind::Domain, "shift model needs n >= 16");
  auto grid = make_space_grid(s_max, n);
  ModelDescriptor m;
  m.name = "shift";
  m.params = ModelParams{"shift", s_max, n, 2.0, 0, {}, NormSpec::euclidean()};
  m.evaluator = std::make_shared<const SemigroupEvaluator>(GridOperator::shift(grid));
  m.norm_spec = NormSpec::euclidean();
  m.analytic_s = 0.0;
  m.default_dt = 0.1;
  m.expected["s"] = {0.0, 1e-9, "left shift on L2(R+): spectrum is the closed left half-plane"};
  m.expected["operator_norm"] = {1.0, 1e-12, "isometry until truncation"};
  m.metadata["operator_norm"] = "||T_t|| = 1 for t < s_max (attained by far-out bumps)";
  m.metadata["boundary"] = "zero fill past s_max";
  return m;
}

ModelDescriptor build_gvw_model(double s_max, std::size_t n, double p) {
  if (!(p > 1.0)) throw Error(ErrorKind::Domain, "GVW model needs p > 1");
  if (n < 16) throw Error(ErrorKind::Domain, "GVW model needs n >= 16");
  auto grid = make_space_grid(s_max, n);
  const NormSpec spec = NormSpec::intersection({NormSpec::weighted_l1(WeightTag::Exp), NormSpec::lp(p)});
  ModelDescriptor m;
  m.name = "gvw";
  m.params = ModelParams{"gvw", s_max, n, p, 0, {}, spec};
  m.evaluator = std::make_shared<const SemigroupEvaluator>(GridOperator::shift(grid));
  m.norm_spec = spec;
  m.analytic_s = -1.0;
  m.default_dt = 0.01;
  m.expected["s"] = {-1.0, 1e-9, "eigenfunctions e^{lambda s} lie in L1(e^s ds) iff Re lambda < -1"};
  m.metadata["norm"] = spec.describe();
  m.metadata["boundary"] = "zero fill past s_max";
  return m;
}

ModelDescriptor build_zabczyk_model(int k_max) {
  if (k_max < 2 || k_max > 64) throw Error(ErrorKind::Domain, "k_max must lie in [2, 64]");
  std::vector<CMatrix> blocks;
  std::size_t dim = 0;
  for (int k = 1; k <= k_max; ++k) {
    CMatrix b = upper_shift(k);
    b.diagonal().setConstant(Complex(0.0, static_cast<double>(k)));
    blocks.push_back(std::move(b));
    dim += static_cast<std::size_t>(k);
  }
  auto grid = make_space_grid(static_cast<double>(dim), dim);
  ModelDescriptor m;
  m.name = "zabczyk";
  m.params = ModelParams{"zabczyk", static_cast<double>(dim), dim, 2.0, k_max, {}, NormSpec::euclidean()};
  m.evaluator = std::make_shared<const SemigroupEvaluator>(GridOperator::block_diagonal(std::move(blocks), grid));
  m.norm_spec = NormSpec::euclidean();
  m.default_dt = 0.1;
  m.expected["s"] = {0.0, 1e-9, "triangular blocks with diagonal i k"};
  m.metadata["blocks"] = "A_k = i k I_k + S_k, k = 1.." + std::to_string(k_max);
  return m;
}

ModelDescriptor build_dense_model(CMatrix a, std::string name, NormSpec norm) {
  norm.validate();
  const auto n = static_cast<std::size_t>(a.rows());
  if (n == 0) throw Error(ErrorKind::Dimension, "empty matrix");
  auto grid = make_space_grid(static_cast<double>(n), n);
  ModelDescriptor m;
  m.name = std::move(name);
  m.params = ModelParams{"matrix", static_cast<double>(n), n, 2.0, 0, {}, norm};
  m.evaluator = std::make_shared<const SemigroupEvaluator>(GridOperator::dense(std::move(a), grid));
  m.norm_spec = std::move(norm);
  m.default_dt = 0.1;
  return m;
}

CMatrix parse_matrix_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (n <= 0) throw Error(ErrorKind::Parse, "matrix size must be positive");
    if (!re.is_array() || !im.is_array()) throw Error(ErrorKind::Parse, "re/im must be arrays");
    if (static_cast<int>(re.size()) != n || static_cast<int>(im.size()) != n) {
      throw Error(ErrorKind::Dimension, "matrix is not n x n");
    }
    CMatrix a(n, n);
    for (int r = 0; r < n; ++r) {
      if (static_cast<int>(re[r].size()) != n || static_cast<int>(im[r].size()) != n) {
        throw Error(ErrorKind::Dimension, "matrix is not square");
      }
      for (int c = 0; c < n; ++c) a(r, c) = Complex(re[r][c].get<double>(), im[r][c].get<double>());
    }
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("matrix JSON: ") + e.what());
  }
}

json matrix_to_json(const CMatrix& a) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      rr.push_back(a(r, c).real());
      ir.push_back(a(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return json{{"n", a.rows()}, {"re", re}, {"im", im}};
}

ModelDescriptor load_matrix_model(const std::string& path, const NormSpec& norm) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open matrix file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("matrix file: ") + e.what());
  }
  auto m = build_dense_model(parse_matrix_json(j), "matrix", norm);
  m.params.path = path;
  return m;
}

ModelDescriptor build_model(const ModelParams& p) {
  if (p.name == "shift") return build_shift_model(p.s_max, p.n);
  if (p.name == "gvw") return build_gvw_model(p.s_max, p.n, p.p);
  if (p.name == "zabczyk") return build_zabczyk_model(p.k_max);
  if (p.name == "matrix") return load_matrix_model(p.path, p.norm);
  throw Error(ErrorKind::Usage, "unknown model '" + p.name + "'");
}

json norm_to_json(const NormSpec& spec) {
  switch (spec.kind) {
    case NormSpec::Kind::Euclidean: return json{{"kind", "euclidean"}};
    case NormSpec::Kind::Lp: return json{{"kind", "lp"}, {"p", spec.p}};
    case NormSpec::Kind::WeightedL1:
      return json{{"kind", "weighted_l1"}, {"weight", spec.weight == WeightTag::Exp ? "exp" : "one"}};
    case NormSpec::Kind::Intersection: {
      json members = json::array();
      for (const auto& m : spec.members) members.push_back(norm_to_json(m));
      return json{{"kind", "intersection"}, {"members", members}};
    }
  }
  return {};
}

NormSpec norm_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "euclidean") return NormSpec::euclidean();
  if (kind == "lp") return NormSpec::lp(j.at("p").get<double>());
  if (kind == "weighted_l1") {
    return NormSpec::weighted_l1(j.at("weight").get<std::string>() == "exp" ? WeightTag::Exp : WeightTag::One);
  }
  if (kind == "intersection") {
    std::vector<NormSpec> members;
    for (const auto& m : j.at("members")) members.push_back(norm_from_json(m));
    return NormSpec::intersection(std::move(members));
  }
  throw Error(ErrorKind::Parse, "unknown norm kind '" + kind + "'");
}

json model_params_json(const ModelParams& p) {
  json j{{"name", p.name}};
  if (p.name == "shift" || p.name == "gvw") {
    j["s_max"] = p.s_max;
    j["n"] = p.n;
  }
  if (p.name == "gvw") j["p"] = p.p;
  if (p.name == "zabczyk") j["k_max"] = p.k_max;
  if (p.name == "matrix") {
    j["path"] = p.path;
    j["norm"] = norm_to_json(p.norm);
  }
  return j;
}

ModelParams model_params_from_json(const json& j) {
  try {
    ModelParams p;
    p.name = j.at("name").get<std::string>();
    if (j.contains("s_max")) p.s_max = j["s_max"].get<double>();
    if (j.contains("n")) p.n = j["n"].get<std::size_t>();
    if (j.contains("p")) p.p = j["p"].get<double>();
    if (j.contains("k_max")) p.k_max = j["k_max"].get<int>();
    if (j.contains("path")) p.path = j["path"].get<std::string>();
    if (j.contains("norm")) p.norm = norm_from_json(j["norm"]);
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("model parameters: ") + e.what());
  }
}

CVector smooth_bump(const SpaceGrid& grid, double center, double width, const NormSpec& spec) {
  const auto n = static_cast<Eigen::Index>(grid.n());
  CVector v = CVector::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = (grid.node(static_cast<std::size_t>(i)) - center) / (0.5 * width);
    if (std::abs(u) < 1.0) v[i] = 0.5 * (1.0 + std::cos(std::numbers::pi * u));
  }
  const double nv = norm(v, grid, spec);
  if (!(nv > 0.0)) throw Error(ErrorKind::Degenerate, "bump narrower than a grid cell");
  return v / nv;
}

std::vector<CVector> probe_family(const ModelDescriptor& model, double reach, std::size_t count) {
  if (!model.is_shift()) throw Error(ErrorKind::Unsupported, "probe family is defined for shift models");
  const SpaceGrid& g = *model.grid();
  std::vector<CVector> probes;
  if (model.name == "gvw") {
    // Single-cell spikes: the e^s weight sees little mass, so ratios stay near one
    // while the spike is inside the window.
    const auto n = g.n();
    for (std::size_t j = 0; j < count; ++j) {
      const auto i = std::min(n - 1, static_cast<std::size_t>(std::ceil(
                                         (reach + (g.s_max() - reach) * static_cast<double>(j) /
                                                      static_cast<double>(count)) / g.h())));
      CVector v = CVector::Zero(static_cast<Eigen::Index>(n));
      v[static_cast<Eigen::Index>(i)] = 1.0;
      probes.push_back(v / norm(v, g, model.norm_spec));
    }
    return probes;
  }
  const double width = std::max(8.0 * g.h(), std::min(10.0, 0.05 * g.s_max()));
  const double lo = std::min(reach + width, g.s_max() - width / 2.0);
  const double hi = g.s_max() - width / 2.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double c = count == 1 ? hi : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(count - 1);
    probes.push_back(smooth_bump(g, c, width, model.norm_spec));
  }
  return probes;
}

json zoo_catalog() {
  json models = json::array();
  models.push_back({{"name", "shift"},
                    {"description", "left shift on L2(R+), truncated to [0, s_max) with zero fill"},
                    {"params", {{"s_max", 400.0}, {"n", 4000}}},
                    {"norm", "Euclidean"},
                    {"evaluator", "ExactShift"},
                    {"expected", {{"s", 0.0}, {"operator_norm", 1.0}}}});
  models.push_back({{"name", "gvw"},
                    {"description", "left shift on L1(R+, e^s ds) intersect Lp(R+), sum norm"},
                    {"params", {{"s_max", 8.0}, {"n", 80000}, {"p", 2.0}}},
                    {"norm", "Intersection(WeightedL1(e^s), Lp(p))"},
                    {"evaluator", "ExactShift"},
                    {"expected", {{"s", -1.0}}}});
  models.push_back({{"name", "zabczyk"},
                    {"description", "direct sum of blocks i k I_k + S_k, k = 1..k_max"},
                    {"params", {{"k_max", 20}}},
                    {"norm", "Euclidean"},
                    {"evaluator", "BlockExponential"},
                    {"expected", {{"s", 0.0}}}});
  models.push_back({{"name", "matrix"},
                    {"description", "dense generator loaded from {n, re, im} JSON"},
                    {"params", {{"path", "<file>"}}},
                    {"norm", "Euclidean"},
                    {"evaluator", "MatrixExponential"}});
  return json{{"models", models}};
}

}  // namespace sloworbit
