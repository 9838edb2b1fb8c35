#include "sloworbit/choose_four.hpp"

#include <sstream>

#include "sloworbit/error.hpp"

namespace sloworbit {

std::string SignPair::str() const {
  return std::string(primal > 0 ? "+" : "-") + (dual > 0 ? "+" : "-");
}

SignPair SignPair::parse(const std::string& text) {
  if (text.size() != 2) throw Error(ErrorKind::Parse, "sign pair must be two characters");
  auto one = [&](char ch) {
    if (ch == '+') return 1;
    if (ch == '-') return -1;
    throw Error(ErrorKind::Parse, "sign must be + or -");
  };
  return {one(text[0]), one(text[1])};
}

ChooseFourResult choose_four_from_values(std::array<std::vector<double>, 4> values, const TimeSet& u_tilde,
                                         double gamma) {
  if (u_tilde.empty()) throw Error(ErrorKind::Domain, "choose_four needs a non-empty U~");
  const auto& idx = u_tilde.indices();
  ChooseFourResult out;
  std::size_t best = 0;
  for (std::size_t p = 0; p < 4; ++p) {
    if (values[p].size() != idx.size()) throw Error(ErrorKind::Dimension, "pairing values do not match U~");
    std::size_t count = 0;
    for (double v : values[p]) count += v >= gamma ? 1 : 0;
    out.qualifying_cells[p] = count;
    if (count > out.qualifying_cells[best]) best = p;
  }
  if (out.qualifying_cells[best] == 0) {
    std::ostringstream msg;
    double top = 0.0;
    for (const auto& v : values) {
      for (double x : v) top = std::max(top, x);
    }
    msg << "no sign pair reaches gamma = " << gamma << " on U~ (largest pairing " << top << ")";
    throw Error(ErrorKind::ConstructionFailure, msg.str());
  }
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (values[best][j] >= gamma) keep.push_back(idx[j]);
  }
  out.signs = kSignOrder[best];
  out.U = TimeSet(std::move(keep), u_tilde.dt());
  out.values = std::move(values);
  return out;
}

ChooseFourResult choose_four(const CVector& xl, const CVector& xlp, const CVector& c, const CVector& cp,
                             const TimeSet& u_tilde, double gamma, const SemigroupEvaluator& ev, Exec exec) {
  std::array<std::vector<double>, 4> values;
  for (std::size_t p = 0; p < 4; ++p) {
    const auto [primal, dual] = kSignOrder[p];
    const CVector x = xl + static_cast<double>(primal) * c;
    const CVector xp = xlp + static_cast<double>(dual) * cp;
    const auto orbit = weak_orbit_at(ev, xp, x, u_tilde.indices(), u_tilde.dt(), exec);
    values[p].reserve(orbit.size());
    for (const auto& z : orbit) values[p].push_back(std::abs(z));
  }
  return choose_four_from_values(std::move(values), u_tilde, gamma);
}

}  // namespace sloworbit
