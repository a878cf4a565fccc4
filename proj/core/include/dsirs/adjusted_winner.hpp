#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dsirs/instance.hpp"

namespace dsirs {

enum class Agent { one = 1, two = 2 };

constexpr Agent other(Agent a) { return a == Agent::one ? Agent::two : Agent::one; }

/// Transfer order used by Phase 2: the advantaged agent's resources by
/// u_adv(r) / u_other(r) non-decreasing, u_other(r) = 0 last, ties by index.
struct RatioOrder {
  std::vector<std::size_t> order;
  Agent advantaged = Agent::one;
};

RatioOrder ratio_order(const Instance& instance, const ResourceSet& held, Agent advantaged);

struct Split {
  std::size_t resource = 0;
  Agent holder = Agent::one;  // the advantaged agent, who keeps `retained`
  Rational retained;          // in (0, 1)
};

struct ClassicAwOutcome {
  ResourceSet s1;  // whole resources of Agent 1 (split resource excluded)
  ResourceSet s2;
  std::optional<Split> split;
  std::vector<std::size_t> transfers;  // whole resources moved in Phase 2, in order
  Rational w1;
  Rational w2;
};

/// Classic Adjusted Winner on the utilities alone (prices, costs and budget
/// are ignored). Throws Error(ZeroTotalUtility) when both agents value
/// everything at zero.
ClassicAwOutcome classic_aw(const Instance& instance);

enum class HaltReason { split_guard, revenue_guard, equality };

std::string_view to_string(HaltReason reason);

struct AwSubplan {
  ResourceSet g1;
  ResourceSet g2;
  HaltReason halted_by = HaltReason::equality;
  std::vector<std::size_t> transfers;
};

/// Adjusted Winner on R \ s0 without splitting: stops as soon as the sale
/// revenue p(s0) can cover the gap, before a transfer that would reverse the
/// advantage, or at exact equality.
AwSubplan aw_subplan(const ResourceSet& s0, const Instance& instance);

/// The sub-plan wrapped as a plan with derived revenue share.
Plan aw_derived_plan(const ResourceSet& s0, const Instance& instance);

}  // namespace dsirs
