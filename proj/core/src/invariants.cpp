#include "dsirs/invariants.hpp"

#include <atomic>

namespace dsirs {
namespace {
std::atomic<std::uint64_t> g_checked{0};
std::atomic<std::uint64_t> g_violations{0};
}  // namespace

InvariantStats invariant_stats() {
  return {g_checked.load(std::memory_order_relaxed), g_violations.load(std::memory_order_relaxed)};
}

void reset_invariant_stats() {
  g_checked.store(0, std::memory_order_relaxed);
  g_violations.store(0, std::memory_order_relaxed);
}

namespace detail {
void record_equitability_check(bool d_is_zero, bool rho_is_one) {
  g_checked.fetch_add(1, std::memory_order_relaxed);
  if (d_is_zero != rho_is_one) g_violations.fetch_add(1, std::memory_order_relaxed);
}
}  // namespace detail

}  // namespace dsirs
