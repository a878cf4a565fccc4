#pragma once

// Mask-based Adjusted-Winner-derived sub-plan for instances of at most 64
// resources. Phase 1 is independent of the sale set and the ratio order of a
// subset is the subsequence of the full order, so both are precomputed once
// and each call is a single linear scan.

#include <bit>
#include <cstdint>
#include <vector>

#include "dsirs/adjusted_winner.hpp"
#include "dsirs/instance.hpp"

namespace dsirs::detail {

using Mask = std::uint64_t;

inline Mask bit(std::size_t i) { return Mask{1} << i; }

inline ResourceSet set_from_mask(Mask m) {
  ResourceSet out;
  while (m) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(m)));
    m &= m - 1;
  }
  return out;
}

inline Mask mask_from_set(const ResourceSet& s) {
  Mask m = 0;
  for (auto i : s) m |= bit(i);
  return m;
}

struct AwMasks {
  Mask s1 = 0;
  Mask s2 = 0;
  HaltReason halted_by = HaltReason::equality;
};

class AwEvaluator {
 public:
  explicit AwEvaluator(const Instance& instance);

  AwMasks subplan(Mask sold) const;

  std::int64_t sum_u1(Mask m) const;
  std::int64_t sum_u2(Mask m) const;
  std::int64_t sum_price(Mask m) const;

 private:
  const Instance* instance_;
  Mask phase1_agent1_ = 0;  // resources with u1 > u2
  std::vector<std::size_t> order_from1_;  // transfer order when Agent 1 is advantaged
  std::vector<std::size_t> order_from2_;
};

}  // namespace dsirs::detail
