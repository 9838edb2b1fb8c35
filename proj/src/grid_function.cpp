#include "sloworbit/grid_function.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "sloworbit/error.hpp"

namespace sloworbit {

namespace {

void check_finite(const CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      throw Error(ErrorKind::Domain, "grid function has a non-finite entry");
    }
  }
}

void check_grid(const CVector& v, const SpaceGridPtr& g) {
  if (!g) throw Error(ErrorKind::Dimension, "grid function without grid");
  if (static_cast<std::size_t>(v.size()) != g->n()) {
    throw Error(ErrorKind::Dimension, "values length differs from grid size");
  }
}

}  // namespace

GridFunction::GridFunction(CVector v, SpaceGridPtr g, NormSpec spec)
    : values(std::move(v)), grid(std::move(g)), norm_spec(std::move(spec)) {
  check_grid(values, grid);
  check_finite(values);
}

GridFunction GridFunction::zero(SpaceGridPtr g, NormSpec spec) {
  const auto n = static_cast<Eigen::Index>(g->n());
  return GridFunction(CVector::Zero(n), std::move(g), std::move(spec));
}

DualGridFunction::DualGridFunction(CVector v, SpaceGridPtr g, NormSpec spec)
    : values(std::move(v)), grid(std::move(g)), dual_of(std::move(spec)) {
  check_grid(values, grid);
  check_finite(values);
}

Complex pairing_raw(const CVector& xp, const CVector& x, const std::vector<double>& weights) {
  Complex acc{};
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += xp[i] * x[i] * weights[i];
  return acc;
}

Complex pairing(const DualGridFunction& xp, const GridFunction& x) {
  if (!xp.grid || !x.grid || !xp.grid->same_as(*x.grid) || xp.values.size() != x.values.size()) {
    throw Error(ErrorKind::Dimension, "pairing across different grids");
  }
  return pairing_raw(xp.values, x.values, x.grid->quad_weights());
}

double norm(const GridFunction& x) { return norm(x.values, *x.grid, x.norm_spec); }
double norm(const GridFunction& x, const NormSpec& spec) { return norm(x.values, *x.grid, spec); }
double dual_norm(const DualGridFunction& xp) { return dual_norm(xp.values, *xp.grid, xp.dual_of); }

DualGridFunction dual_vector(const GridFunction& y) { return dual_vector(y, y.norm_spec); }

DualGridFunction dual_vector(const GridFunction& y, const NormSpec& spec) {
  const double ny = norm(y.values, *y.grid, spec);
  if (!(ny > 0.0)) throw Error(ErrorKind::Degenerate, "dual of the zero vector");
  CVector f = norming_functional(y.values, *y.grid, spec) / ny;
  return DualGridFunction(std::move(f), y.grid, spec);
}

void write_csv(std::ostream& out, const CVector& values, const SpaceGrid& grid) {
  out << "s,re,im\n";
  char buf[128];
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", grid.node(static_cast<std::size_t>(i)),
                  values[i].real(), values[i].imag());
    out << buf;
  }
}

CVector read_csv(std::istream& in, const SpaceGrid& grid) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("s,re,im", 0) != 0) {
    throw Error(ErrorKind::Parse, "grid function CSV must start with header s,re,im");
  }
  CVector out(static_cast<Eigen::Index>(grid.n()));
  std::size_t i = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (i >= grid.n()) throw Error(ErrorKind::Parse, "grid function CSV has too many rows");
    std::istringstream row(line);
    double s = 0, re = 0, im = 0;
    char c1 = 0, c2 = 0;
    if (!(row >> s >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
      throw Error(ErrorKind::Parse, "malformed CSV row: " + line);
    }
    if (std::abs(s - grid.node(i)) > 1e-9 * std::max(1.0, grid.s_max())) {
      throw Error(ErrorKind::Parse, "CSV node position does not match grid");
    }
    out[static_cast<Eigen::Index>(i)] = Complex(re, im);
    ++i;
  }
  if (i != grid.n()) throw Error(ErrorKind::Parse, "grid function CSV has too few rows");
  return out;
}

}  // namespace sloworbit
