#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dsirs/instance.hpp"

namespace dsirs {

enum class SolverKind { exact_awns, oracle, fptas };

std::string_view to_string(SolverKind kind);

struct SolveResult {
  std::vector<Plan> plans;  // Pareto-filtered, canonically sorted, all optimal
  Rational objective;
  std::int64_t cost = 0;  // c(S0) of plans.front()
  SolverKind solver = SolverKind::exact_awns;
  std::optional<Rational> epsilon;  // set for the FPTAS
};

/// Pareto-filters `plans`, sorts them by serialized form and fills
/// `cost` from the first one.
SolveResult finalize_result(std::vector<Plan> plans, Rational objective, SolverKind solver,
                            const Instance& instance);

}  // namespace dsirs
