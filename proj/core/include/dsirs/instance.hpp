#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsirs/rational.hpp"

namespace dsirs {

/// Largest magnitude accepted for any utility, price, cost or budget. Keeps
/// every sum over a 64-resource instance, and the pairwise products used when
/// comparing welfare ratios, inside 128-bit integers.
inline constexpr std::int64_t kMaxValue = std::int64_t{1} << 40;

/// Selling cost of a resource. Unsellable resources exceed every budget,
/// including an unlimited one.
class Cost {
 public:
  constexpr Cost() = default;
  constexpr explicit Cost(std::int64_t units) : units_(units) {}
  static constexpr Cost unsellable() {
    Cost c;
    c.unsellable_ = true;
    return c;
  }

  constexpr bool is_unsellable() const noexcept { return unsellable_; }
  /// Zero for unsellable resources; check is_unsellable() first.
  constexpr std::int64_t units() const noexcept { return unsellable_ ? 0 : units_; }

  friend constexpr bool operator==(const Cost&, const Cost&) = default;

 private:
  std::int64_t units_ = 0;
  bool unsellable_ = false;
};

class Budget {
 public:
  constexpr Budget() = default;
  constexpr explicit Budget(std::int64_t units) : units_(units) {}
  static constexpr Budget unlimited() {
    Budget b;
    b.unlimited_ = true;
    b.units_ = std::numeric_limits<std::int64_t>::max();
    return b;
  }

  constexpr bool is_unlimited() const noexcept { return unlimited_; }
  /// INT64_MAX when unlimited, which every finite spend fits under.
  constexpr std::int64_t units() const noexcept { return units_; }
  constexpr bool admits(std::int64_t spent) const noexcept { return spent <= units_; }

  friend constexpr bool operator==(const Budget&, const Budget&) = default;

 private:
  std::int64_t units_ = 0;
  bool unlimited_ = false;
};

struct Resource {
  std::string name;
  std::int64_t u1 = 0;
  std::int64_t u2 = 0;
  std::int64_t price = 0;
  Cost cost;
};

/// A DSIRS instance. Construction does not validate; call validate_instance
/// on untrusted input. Solvers also accept derived instances (resource
/// replacement, forced sales) that intentionally break the common-scale
/// invariant.
struct Instance {
  std::vector<Resource> resources;
  Budget budget;

  std::size_t size() const noexcept { return resources.size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;
};

/// Sorted, duplicate-free resource indices.
using ResourceSet = std::vector<std::size_t>;

ResourceSet make_set(std::vector<std::size_t> indices);
/// Looks names up in the instance; throws Error(UnknownResource).
ResourceSet set_from_names(const Instance& instance, std::span<const std::string> names);
std::vector<std::string> names_of(const Instance& instance, const ResourceSet& set);

std::int64_t sum_u1(const Instance& instance, const ResourceSet& set);
std::int64_t sum_u2(const Instance& instance, const ResourceSet& set);
std::int64_t sum_price(const Instance& instance, const ResourceSet& set);
/// Total selling cost; nullopt if the set holds an unsellable resource.
std::optional<std::int64_t> sum_cost(const Instance& instance, const ResourceSet& set);

struct Plan {
  ResourceSet s0;  // sold
  ResourceSet s1;  // Agent 1
  ResourceSet s2;  // Agent 2
  Rational q{0};   // fraction of revenue paid to Agent 1
  bool q_pinned = false;

  friend bool operator==(const Plan& a, const Plan& b) {
    return a.s0 == b.s0 && a.s1 == b.s1 && a.s2 == b.s2 && a.q == b.q && a.q_pinned == b.q_pinned;
  }
};

struct WelfareReport {
  Rational w1;
  Rational w2;
  Rational d;
  ExtRational rho;
  Rational envy1;
  Rational envy2;
  bool budget_ok = false;
  bool feasible = false;
};

struct EnvyReport {
  Rational envy1;
  Rational envy2;
  bool envy_free = false;
};

/// Returns the instance unchanged when every DSIRS invariant holds.
/// Throws Error with kind UnequalTotals, PriceExceedsMaxUtility,
/// NegativeValue, ValueOutOfRange or DuplicateName.
const Instance& validate_instance(const Instance& instance);

/// Throws Error(NotAPartition) unless the three sets partition the instance.
void require_partition(const Instance& instance, const ResourceSet& s0, const ResourceSet& s1,
                       const ResourceSet& s2);

/// The revenue share that balances the two welfares as closely as possible.
/// Zero when nothing of value is sold.
Rational revenue_share(const ResourceSet& s0, const ResourceSet& s1, const ResourceSet& s2,
                       const Instance& instance);

/// Plan with q derived from its sets.
Plan make_plan(const Instance& instance, ResourceSet s0, ResourceSet s1, ResourceSet s2);
/// Plan with a caller-supplied revenue share.
Plan make_pinned_plan(const Instance& instance, ResourceSet s0, ResourceSet s1, ResourceSet s2,
                      Rational q);

/// Envy against the mirrored plan (bundles swapped, share 1 - q).
EnvyReport envy(const Plan& plan, const Instance& instance);

WelfareReport welfare(const Plan& plan, const Instance& instance);

/// Plans not Pareto dominated within the input. Plans with identical welfare
/// pairs are all kept. Throws Error(EmptyInput).
std::vector<Plan> pareto_filter(const std::vector<Plan>& plans, const Instance& instance);

}  // namespace dsirs
