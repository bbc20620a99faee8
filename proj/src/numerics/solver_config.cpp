#include "adhesion/numerics/solver_config.hpp"

#include "adhesion/errors.hpp"

namespace adhesion::numerics {

void SolverConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(root_tol > 0.0)) {
    fail(ErrorKind::validation, "solver tolerances must be positive");
  }
  if (max_evaluations == 0) {
    fail(ErrorKind::validation, "max_evaluations must be positive");
  }
  if (!(bracket_growth > 1.0)) {
    fail(ErrorKind::validation, "bracket_growth must exceed 1");
  }
}

}  // namespace adhesion::numerics
