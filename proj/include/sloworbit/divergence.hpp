#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sloworbit {

/// Non-decreasing h : [0, inf) -> [0, inf).
struct DivergenceSpec {
  std::function<double(double)> h;
  std::string description;

  double operator()(double u) const { return h(u); }

  static DivergenceSpec identity();
  static DivergenceSpec power(double q);
  static DivergenceSpec indicator(double threshold);
  static DivergenceSpec log1p();
  /// Piecewise-linear table; rejects non-monotone or negative values.
  static DivergenceSpec table(std::vector<double> u, std::vector<double> h);
  /// Reads "u,h" rows (optional header) from a file.
  static DivergenceSpec table_file(const std::string& path);
  /// identity | power:q | indicator:threshold | log1p | table:path
  static DivergenceSpec parse(const std::string& text);
};

}  // namespace sloworbit
