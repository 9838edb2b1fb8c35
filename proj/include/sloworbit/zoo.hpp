#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sloworbit/generator.hpp"
#include "sloworbit/norm.hpp"
#include "sloworbit/semigroup.hpp"

namespace sloworbit {

struct ExpectedValue {
  double value = 0.0;
  double tol = 0.0;
  std::string provenance;
};

/// Parameters that rebuild a model; serialized into reports and witnesses.
struct ModelParams {
  std::string name = "shift";  ///< shift | gvw | zabczyk | matrix
  double s_max = 400.0;
  std::size_t n = 4000;
  double p = 2.0;
  int k_max = 20;
  std::string path;  ///< matrix file for name == "matrix"
  NormSpec norm = NormSpec::euclidean();
};

struct ModelDescriptor {
  std::string name;
  ModelParams params;
  std::shared_ptr<const SemigroupEvaluator> evaluator;
  NormSpec norm_spec;
  std::map<std::string, ExpectedValue> expected;
  std::map<std::string, std::string> metadata;
  std::optional<double> analytic_s;
  double default_dt = 0.1;

  const GridOperator& generator() const { return evaluator->generator(); }
  const SpaceGridPtr& grid() const { return evaluator->grid(); }
  bool is_shift() const { return evaluator->method() == SemigroupEvaluator::Method::ExactShift; }
  /// True for norms whose resolvent norm we can compute (Euclidean or L2).
  bool hilbert_norm() const;
};

ModelDescriptor build_shift_model(double s_max, std::size_t n);
ModelDescriptor build_gvw_model(double s_max, std::size_t n, double p = 2.0);
ModelDescriptor build_zabczyk_model(int k_max);
/// Dense model on a unit-weight grid (h = 1).
ModelDescriptor build_dense_model(CMatrix a, std::string name, NormSpec norm = NormSpec::euclidean());
/// Reads {"n": int, "re": [[...]], "im": [[...]]}.
ModelDescriptor load_matrix_model(const std::string& path, const NormSpec& norm = NormSpec::euclidean());
CMatrix parse_matrix_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& a);

ModelDescriptor build_model(const ModelParams& params);
nlohmann::json model_params_json(const ModelParams& params);
ModelParams model_params_from_json(const nlohmann::json& j);

/// Nilpotent upper shift: ones on the superdiagonal.
CMatrix upper_shift(int k);

/// Unit-norm probe vectors used to bound ||T_t|| from below on structured models.
/// Shift models get smooth bumps placed at or beyond `reach`; GVW models get single-cell spikes.
std::vector<CVector> probe_family(const ModelDescriptor& model, double reach, std::size_t count);

/// Raised-cosine bump of the given width centred at `center`, unit norm in `spec`.
CVector smooth_bump(const SpaceGrid& grid, double center, double width, const NormSpec& spec);

nlohmann::json norm_to_json(const NormSpec& spec);
NormSpec norm_from_json(const nlohmann::json& j);

nlohmann::json zoo_catalog();

}  // namespace sloworbit
