#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <variant>

#include "dsirs/instance.hpp"
#include "dsirs/solve_result.hpp"

namespace dsirs {

enum class ObjectiveKind { min_d, min_rho, min_cost_given_d, min_cost_given_rho, max_nash };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::min_rho;
  std::optional<Rational> threshold;  // only for the two constrained kinds

  static Objective min_d() { return {ObjectiveKind::min_d, std::nullopt}; }
  static Objective min_rho() { return {ObjectiveKind::min_rho, std::nullopt}; }
  static Objective max_nash() { return {ObjectiveKind::max_nash, std::nullopt}; }
  static Objective min_cost_given_d(Rational d) { return {ObjectiveKind::min_cost_given_d, std::move(d)}; }
  static Objective min_cost_given_rho(Rational rho) { return {ObjectiveKind::min_cost_given_rho, std::move(rho)}; }

  /// Throws Error(InvalidArgument) when the threshold is missing, present
  /// on an unconstrained kind, negative for d, or below one for rho.
  void check() const;
};

struct ExactOptions {
  std::size_t max_resources = 20;
};

/// Enumerates every affordable sale set, evaluates its AW-derived plan and
/// returns the optimum. Throws Error(Infeasible) or Error(InstanceTooLarge).
SolveResult solve_awns_exact(const Instance& instance, const Objective& objective,
                             const ExactOptions& options = {});

enum class OracleCriterion { min_d, min_rho, exists_envy_free, max_nash };

/// How the oracle treats q when checking envy-freeness: the plan's derived
/// share, or any share in [0, 1] (for fixtures that pin q).
enum class ShareMode { derived, any };

struct OracleOptions {
  std::size_t max_resources = 15;
  ShareMode share_mode = ShareMode::derived;
};

struct EnvyFreeReport {
  bool exists = false;
  std::optional<Plan> witness;  // first envy-free feasible plan found
  std::uint64_t plans_examined = 0;
};

using OracleOutcome = std::variant<SolveResult, EnvyFreeReport>;

/// Ground truth over all tripartitions with affordable S0. Returns an
/// EnvyFreeReport for exists_envy_free, a SolveResult otherwise.
/// Throws Error(Infeasible) or Error(InstanceTooLarge).
OracleOutcome oracle_best_plan(const Instance& instance, OracleCriterion criterion,
                               const OracleOptions& options = {});

}  // namespace dsirs
