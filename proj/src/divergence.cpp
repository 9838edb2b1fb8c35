#include "sloworbit/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "sloworbit/error.hpp"

namespace sloworbit {

DivergenceSpec DivergenceSpec::identity() {
  return {[](double u) { return u; }, "identity"};
}

DivergenceSpec DivergenceSpec::power(double q) {
  if (!(q > 0.0)) throw Error(ErrorKind::Domain, "power exponent must be positive");
  std::ostringstream d;
  d << "power(" << q << ")";
  return {[q](double u) { return std::pow(std::max(u, 0.0), q); }, d.str()};
}

DivergenceSpec DivergenceSpec::indicator(double threshold) {
  std::ostringstream d;
  d << "indicator(u >= " << threshold << ")";
  return {[threshold](double u) { return u >= threshold ? 1.0 : 0.0; }, d.str()};
}

DivergenceSpec DivergenceSpec::log1p() {
  return {[](double u) { return std::log1p(std::max(u, 0.0)); }, "log1p"};
}

DivergenceSpec DivergenceSpec::table(std::vector<double> u, std::vector<double> h) {
  if (u.size() != h.size() || u.size() < 2) throw Error(ErrorKind::Parse, "table needs at least two (u, h) rows");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (h[i] < 0.0) throw Error(ErrorKind::Domain, "table h values must be non-negative");
    if (i > 0 && !(u[i] > u[i - 1])) throw Error(ErrorKind::Domain, "table u values must increase");
    if (i > 0 && h[i] < h[i - 1]) throw Error(ErrorKind::Domain, "table h is not non-decreasing");
  }
  auto us = std::make_shared<const std::vector<double>>(std::move(u));
  auto hs = std::make_shared<const std::vector<double>>(std::move(h));
  auto f = [us, hs](double x) {
    const auto& U = *us;
    const auto& H = *hs;
    if (x <= U.front()) return H.front();
    if (x >= U.back()) return H.back();
    const auto j = static_cast<std::size_t>(std::upper_bound(U.begin(), U.end(), x) - U.begin());
    const double w = (x - U[j - 1]) / (U[j] - U[j - 1]);
    return H[j - 1] + w * (H[j] - H[j - 1]);
  };
  return {f, "table(" + std::to_string(us->size()) + " rows)"};
}

DivergenceSpec DivergenceSpec::table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open h table " + path);
  std::vector<double> u, h;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (!(row >> a >> b)) {
      if (u.empty()) continue;  // header
      throw Error(ErrorKind::Parse, "bad h table row: " + line);
    }
    u.push_back(a);
    h.push_back(b);
  }
  auto spec = table(std::move(u), std::move(h));
  spec.description = "table(" + path + ")";
  return spec;
}

DivergenceSpec DivergenceSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto number = [&]() {
    try {
      std::size_t used = 0;
      const double v = std::stod(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::Usage, "h spec '" + text + "' needs a numeric argument");
    }
  };
  if (name == "identity") return identity();
  if (name == "power") return power(number());
  if (name == "indicator") return indicator(number());
  if (name == "log1p") return log1p();
  if (name == "table") return table_file(arg);
  throw Error(ErrorKind::Usage, "unknown h spec '" + text + "'");
}

}  // namespace sloworbit
