#include "adhesion/errors.hpp"

namespace adhesion {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::domain: return "domain";
    case ErrorKind::range_exceeded: return "range_exceeded";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::unsupported_law: return "unsupported_law";
    case ErrorKind::no_solution: return "no_solution";
    case ErrorKind::bracket: return "bracket";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::unidentifiable: return "unidentifiable";
  }
  return "unknown";
}

}  // namespace adhesion
