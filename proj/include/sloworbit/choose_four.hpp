#pragma once

#include <array>
#include <string>
#include <vector>

#include "sloworbit/kernels.hpp"
#include "sloworbit/semigroup.hpp"
#include "sloworbit/timeset.hpp"

namespace sloworbit {

/// Signs of x_{l+1} = x_l + primal * c and x'_{l+1} = x'_l + dual * c'.
struct SignPair {
  int primal = 1;
  int dual = 1;
  std::string str() const;
  static SignPair parse(const std::string& text);
  friend bool operator==(const SignPair&, const SignPair&) = default;
};

/// Tie-break order: ++, +-, -+, --.
inline constexpr std::array<SignPair, 4> kSignOrder{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

struct ChooseFourResult {
  SignPair signs;
  TimeSet U;
  std::array<std::size_t, 4> qualifying_cells{};  ///< per pair, in kSignOrder
  /// |<x' + d c', T_t (x + p c)>| at every point of U~, per pair.
  std::array<std::vector<double>, 4> values;
};

/// Picks the sign pair whose set {t in U~ : |pairing| >= gamma} is largest.
ChooseFourResult choose_four(const CVector& xl, const CVector& xlp, const CVector& c, const CVector& cp,
                             const TimeSet& u_tilde, double gamma, const SemigroupEvaluator& ev,
                             Exec exec = Exec::Parallel);

/// Same selection from precomputed |pairing| values (one vector per pair, aligned with U~ cells).
ChooseFourResult choose_four_from_values(std::array<std::vector<double>, 4> values, const TimeSet& u_tilde,
                                         double gamma);

}  // namespace sloworbit
