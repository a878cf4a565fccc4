#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "dsirs/instance.hpp"
#include "dsirs/knapsack.hpp"
#include "dsirs/solve_result.hpp"

namespace dsirs {

struct ResourceClasses {
  ResourceSet r0;  // u1 == u2
  ResourceSet r1;  // u1 > u2
  ResourceSet r2;  // u2 > u1
};

ResourceClasses classify_resources(const Instance& instance);

/// One naming of the agents plus one placement of the tied resources R0.
struct RoleAssignment {
  bool swapped = false;   // Agent 1 of this assignment is the instance's Agent 2
  bool r0_in_a1 = false;  // R0 joins A1 instead of A2
  ResourceSet a1;         // in this assignment's naming
  ResourceSet a2;
};

/// The four assignments: {unswapped, swapped} x {R0 with A2, R0 with A1}.
/// The first one is A1 = R1, A2 = R2 u R0.
std::vector<RoleAssignment> partition_roles(const Instance& instance);

/// The instance with u1 and u2 exchanged.
Instance swap_agents(const Instance& instance);

/// Resource indices by u1/u2 non-increasing, ties by index. u2 = 0 < u1 is
/// +inf and 0/0 counts as 1.
std::vector<std::size_t> ratio_descending_order(const Instance& instance);

/// Indices bounding the maxima of S0 (price), S1 (u1) and S2 (u2).
/// nullopt is the "empty" marker: that set stays empty under the guess.
struct Guess {
  std::optional<std::size_t> j0;
  std::optional<std::size_t> j1;
  std::optional<std::size_t> j2;

  friend bool operator==(const Guess&, const Guess&) = default;
};

inline constexpr std::int64_t kScaledPlusInf = std::numeric_limits<std::int64_t>::max();
inline constexpr std::int64_t kScaledMinusInf = std::numeric_limits<std::int64_t>::min();

struct ScaledInstance {
  std::vector<std::int64_t> u1_scaled;      // rounded up, or kScaledPlusInf
  std::vector<std::int64_t> u2_scaled;      // rounded down, or kScaledMinusInf
  std::vector<std::int64_t> p_scaled_down;  // or kScaledMinusInf
  std::vector<std::int64_t> p_scaled_up;    // or kScaledPlusInf
  Rational k_param;                         // K = eps' * m_max / n
  Rational eps_prime;                       // eps / (eps + 2)
  std::int64_t m_max = 0;
  Guess guess;

  /// ceil(2n / eps') + 1, the bound on every finite scaled value.
  std::int64_t value_bound() const;
};

/// Throws Error(BadGuess) when a designated index is out of range or the
/// guess has no positive maximum, Error(InvalidArgument) for eps <= 0.
ScaledInstance scale_instance(const Instance& instance, const Guess& guess, const Rational& eps);

/// Every (n+1)^3 guess with a positive maximum when `exhaustive`; otherwise
/// one guess per distinct m_max, with each index pointing at the largest
/// value of its kind not above 2 * m_max (ties to the lowest index).
std::vector<Guess> enumerate_guesses(const Instance& instance, bool exhaustive);

enum class TransferDirection { one_to_two, two_to_one };

/// Positions are 1-based in ratio order; 0 and n + 1 are the open ends.
/// one_to_two reads only i_left, two_to_one only i_right.
struct TransferWindow {
  std::size_t i_left = 0;
  std::size_t i_right = 0;
  TransferDirection direction = TransferDirection::one_to_two;
};

struct DpKey {
  std::int64_t o = 0;
  std::int64_t su1 = 0;
  std::int64_t su2 = 0;
  std::int64_t sp = 0;

  friend auto operator<=>(const DpKey&, const DpKey&) = default;
};

struct DpEntry {
  ResourceSet s0;
  ResourceSet s1;
  ResourceSet s2;
  std::int64_t cost = 0;
};

/// Terminal cells of the table for one window, sorted by key. `a1` is the
/// role set A1 in the instance's own naming.
std::vector<std::pair<DpKey, DpEntry>> dp_solve(const Instance& instance, const ScaledInstance& scaled,
                                                const ResourceSet& a1, const TransferWindow& window,
                                                Budget budget);

struct FptasOptions {
  bool exhaustive_guesses = false;
  O2Valuation o2_valuation = O2Valuation::net_gain;
  bool heavy_branch = true;
  /// Also score the AW-derived plan of every frontier sale set.
  bool rederive_aw = true;
};

struct FptasDiagnostics {
  std::uint64_t guesses = 0;
  std::uint64_t dp_passes = 0;
  std::uint64_t frontier_plans = 0;
  std::uint64_t aw_plans = 0;
  std::uint64_t heavy_resources = 0;  // across both roles and all recursion levels
  bool best_from_aw_only = false;     // no frontier plan reached the reported ratio
};

/// Min-ratio plans over the scaled DP frontiers of every role assignment,
/// guess and window, plus the heavy-resource cases. Plans are scored on the
/// original values. Throws Error(Infeasible) when no feasible plan is found.
SolveResult fptas_awns_rho(const Instance& instance, const Rational& eps, const FptasOptions& options = {},
                           FptasDiagnostics* diagnostics = nullptr);

}  // namespace dsirs
