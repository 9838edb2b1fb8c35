#include "sloworbit/error.hpp"

namespace sloworbit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::Alignment: return "alignment error";
    case ErrorKind::Degenerate: return "degenerate input";
    case ErrorKind::Parse: return "parse error";
    case ErrorKind::Singular: return "singularity error";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::ConstructionFailure: return "construction failure";
    case ErrorKind::Horizon: return "horizon error";
    case ErrorKind::Precision: return "precision error";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Precondition: return "precondition error";
    case ErrorKind::Verification: return "verification failure";
    case ErrorKind::Usage: return "usage error";
    case ErrorKind::Io: return "I/O error";
  }
  return "error";
}

}  // namespace sloworbit
