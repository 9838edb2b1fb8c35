#include "sloworbit/norm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sloworbit/error.hpp"

namespace sloworbit {

NormSpec NormSpec::euclidean() { return NormSpec{}; }

NormSpec NormSpec::lp(double p) {
  NormSpec spec;
  spec.kind = Kind::Lp;
  spec.p = p;
  spec.validate();
  return spec;
}

NormSpec NormSpec::weighted_l1(WeightTag weight) {
  NormSpec spec;
  spec.kind = Kind::WeightedL1;
  spec.p = 1.0;
  spec.weight = weight;
  return spec;
}

NormSpec NormSpec::intersection(std::vector<NormSpec> members) {
  NormSpec spec;
  spec.kind = Kind::Intersection;
  spec.members = std::move(members);
  spec.validate();
  return spec;
}

void NormSpec::validate() const {
  switch (kind) {
    case Kind::Lp:
      if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::Domain, "Lp norm needs finite p >= 1");
      break;
    case Kind::Intersection:
      if (members.empty()) throw Error(ErrorKind::Domain, "intersection norm needs members");
      for (const auto& m : members) m.validate();
      break;
    default:
      break;
  }
}

std::string NormSpec::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Euclidean: out << "Euclidean"; break;
    case Kind::Lp: out << "Lp(" << p << ")"; break;
    case Kind::WeightedL1: out << "WeightedL1(" << (weight == WeightTag::Exp ? "exp" : "one") << ")"; break;
    case Kind::Intersection: {
      out << "Intersection(";
      for (std::size_t i = 0; i < members.size(); ++i) out << (i ? "," : "") << members[i].describe();
      out << ")";
      break;
    }
  }
  return out.str();
}

double weight_value(WeightTag tag, double s) { return tag == WeightTag::Exp ? std::exp(s) : 1.0; }

namespace {

void check_size(const CVector& values, const SpaceGrid& grid) {
  if (static_cast<std::size_t>(values.size()) != grid.n()) {
    throw Error(ErrorKind::Dimension, "vector length does not match grid");
  }
}

double lp_norm(const CVector& x, const std::vector<double>& w, double p) {
  double acc = 0.0;
  if (p == 2.0) {
    for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::norm(x[i]) * w[i];
    return std::sqrt(acc);
  }
  if (p == 1.0) {
    for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::abs(x[i]) * w[i];
    return acc;
  }
  // Scale by the max modulus to avoid overflow for large p.
  double peak = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) peak = std::max(peak, std::abs(x[i]));
  if (peak == 0.0) return 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]) / peak, p) * w[i];
  return peak * std::pow(acc, 1.0 / p);
}

// Dual exponent norm: Lq with 1/p + 1/q = 1; q = inf for p = 1.
double lq_dual(const CVector& f, const std::vector<double>& w, double p) {
  if (p == 1.0) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    return m;
  }
  const double q = p / (p - 1.0);
  return lp_norm(f, w, q);
}

bool sup_type(const NormSpec& m) {
  return m.kind == NormSpec::Kind::WeightedL1 || (m.kind == NormSpec::Kind::Lp && m.p == 1.0);
}

double member_p(const NormSpec& m) { return m.kind == NormSpec::Kind::Euclidean ? 2.0 : m.p; }

// Dual of the sum norm: inf over f = a + b of max(||a||*, ||b||*). Sup-type members
// constrain a pointwise (|a_i| <= tau * u_i), so the optimal remainder is the
// pointwise shrinkage of f and the problem reduces to bisection on tau.
double intersection_dual(const CVector& f, const SpaceGrid& grid, const NormSpec& spec) {
  const auto& w = grid.quad_weights();
  std::vector<double> box(f.size(), 0.0);
  const NormSpec* other = nullptr;
  for (const auto& m : spec.members) {
    if (sup_type(m)) {
      for (Eigen::Index i = 0; i < f.size(); ++i) {
        box[i] += m.kind == NormSpec::Kind::WeightedL1 ? weight_value(m.weight, grid.node(i)) : 1.0;
      }
    } else if (m.kind == NormSpec::Kind::Intersection) {
      throw Error(ErrorKind::Unsupported, "nested intersection norms");
    } else if (other == nullptr) {
      other = &m;
    }
  }
  auto remainder_norm = [&](double tau) {
    CVector b(f.size());
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      b[i] = std::max(0.0, std::abs(f[i]) - tau * box[i]);
    }
    return other == nullptr ? lq_dual(b, w, 1.0) : lq_dual(b, w, member_p(*other));
  };
  double hi = 0.0;
  {
    double m = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) m = std::max(m, std::abs(f[i]));
    if (m == 0.0) return 0.0;
    hi = other == nullptr ? 0.0 : lq_dual(f, w, member_p(*other));
    if (other == nullptr) {
      for (Eigen::Index i = 0; i < f.size(); ++i) {
        if (box[i] > 0.0) hi = std::max(hi, std::abs(f[i]) / box[i]);
      }
      return hi;
    }
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (remainder_norm(mid) <= mid) hi = mid; else lo = mid;
  }
  return hi;
}

}  // namespace

double norm(const CVector& values, const SpaceGrid& grid, const NormSpec& spec) {
  check_size(values, grid);
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i].real()) || !std::isfinite(values[i].imag())) {
      throw Error(ErrorKind::Domain, "non-finite entry");
    }
  }
  const auto& w = grid.quad_weights();
  switch (spec.kind) {
    case NormSpec::Kind::Euclidean: return lp_norm(values, w, 2.0);
    case NormSpec::Kind::Lp: return lp_norm(values, w, spec.p);
    case NormSpec::Kind::WeightedL1: {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < values.size(); ++i) {
        acc += std::abs(values[i]) * weight_value(spec.weight, grid.node(i)) * w[i];
      }
      return acc;
    }
    case NormSpec::Kind::Intersection: {
      double acc = 0.0;
      for (const auto& m : spec.members) acc += norm(values, grid, m);
      return acc;
    }
  }
  return 0.0;
}

double dual_norm(const CVector& values, const SpaceGrid& grid, const NormSpec& spec) {
  check_size(values, grid);
  const auto& w = grid.quad_weights();
  switch (spec.kind) {
    case NormSpec::Kind::Euclidean: return lq_dual(values, w, 2.0);
    case NormSpec::Kind::Lp: return lq_dual(values, w, spec.p);
    case NormSpec::Kind::WeightedL1: {
      double m = 0.0;
      for (Eigen::Index i = 0; i < values.size(); ++i) {
        m = std::max(m, std::abs(values[i]) / weight_value(spec.weight, grid.node(i)));
      }
      return m;
    }
    case NormSpec::Kind::Intersection: return intersection_dual(values, grid, spec);
  }
  return 0.0;
}

bool dual_norm_is_exact(const NormSpec& spec) {
  if (spec.kind != NormSpec::Kind::Intersection) return true;
  int others = 0;
  for (const auto& m : spec.members) others += sup_type(m) ? 0 : 1;
  return others <= 1;
}

CVector norming_functional(const CVector& y, const SpaceGrid& grid, const NormSpec& spec) {
  const double ny = norm(y, grid, spec);
  if (!(ny > 0.0)) throw Error(ErrorKind::Degenerate, "norming functional of the zero vector");
  CVector f = CVector::Zero(y.size());
  auto phase = [](Complex z) { return z == Complex{} ? Complex{} : std::conj(z) / std::abs(z); };
  switch (spec.kind) {
    case NormSpec::Kind::Euclidean:
      f = y.conjugate() / ny;
      break;
    case NormSpec::Kind::Lp: {
      if (spec.p == 1.0) {
        for (Eigen::Index i = 0; i < y.size(); ++i) f[i] = phase(y[i]);
      } else {
        for (Eigen::Index i = 0; i < y.size(); ++i) {
          f[i] = phase(y[i]) * std::pow(std::abs(y[i]) / ny, spec.p - 1.0);
        }
      }
      break;
    }
    case NormSpec::Kind::WeightedL1:
      for (Eigen::Index i = 0; i < y.size(); ++i) f[i] = phase(y[i]) * weight_value(spec.weight, grid.node(i));
      break;
    case NormSpec::Kind::Intersection:
      // Sum of member norming functionals: pairs to the sum of member norms and
      // splits into pieces of member-dual norm 1.
      for (const auto& m : spec.members) f += norming_functional(y, grid, m);
      break;
  }
  return f;
}

}  // namespace sloworbit
