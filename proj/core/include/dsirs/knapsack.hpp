#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dsirs/instance.hpp"

namespace dsirs {

struct KnapsackItem {
  std::int64_t value = 0;
  std::int64_t weight = 0;
};

struct KnapsackSelection {
  std::vector<std::size_t> items;  // indices into the input, increasing
  std::int64_t value = 0;
  std::int64_t weight = 0;
};

/// Profit-scaling FPTAS: total weight <= capacity and value >= (1 - eps) * OPT.
/// Runs the exact profit DP when the scaling factor would be below one.
/// Throws Error(InvalidArgument) for eps <= 0 or negative inputs.
KnapsackSelection knapsack_fptas(const std::vector<KnapsackItem>& items, std::int64_t capacity,
                                 const Rational& eps);

/// Which item value the O2 reduction uses for a sellable resource.
enum class O2Valuation {
  net_gain,  // p - u2: revenue minus the forgone Agent-2 utility
  price,     // p alone, as the reduction is literally stated
};

struct O2Result {
  std::int64_t value = 0;  // u2(R_S) plus the knapsack value
  ResourceSet sold;        // resources of R_S chosen for sale
};

/// Agent 2's best welfare over R_S when each resource is kept by Agent 2 or
/// sold within `budget` and Agent 2 receives all revenue.
O2Result o2_value(const Instance& instance, const ResourceSet& subset, Budget budget, const Rational& eps,
                  O2Valuation valuation = O2Valuation::net_gain);

/// The resource r with u1(r) > 2 * O2(R \ {r}), if any. With equal totals
/// there is at most one and finding two throws std::logic_error.
std::optional<std::size_t> detect_heavy_resource(const Instance& instance, const Rational& eps,
                                                 O2Valuation valuation = O2Valuation::net_gain);

}  // namespace dsirs
