#pragma once

#include <cstdint>

namespace dsirs {

/// Process-wide tally of the "d = 0 iff rho = 1" check that every plan
/// evaluation performs. Test drivers read it at exit.
struct InvariantStats {
  std::uint64_t plans_checked = 0;
  std::uint64_t violations = 0;
};

InvariantStats invariant_stats();
void reset_invariant_stats();

namespace detail {
void record_equitability_check(bool d_is_zero, bool rho_is_one);
}

}  // namespace dsirs
