#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dsirs/fptas.hpp"
#include "dsirs/instance.hpp"

namespace dsirs {

struct UtilityMatrix {
  std::string id;
  std::vector<std::vector<std::int64_t>> rows;  // one per agent, each summing to 1000

  std::size_t agents() const { return rows.size(); }
  std::size_t items() const { return rows.empty() ? 0 : rows.front().size(); }
};

inline constexpr std::int64_t kTokenTotal = 1000;

struct MatrixFilter {
  std::size_t first_n = 5000;
  std::size_t min_items = 4;
  std::size_t max_items = 15;
  std::size_t min_agents = 2;
};

/// Blocks of "instance,<id>" followed by one comma-separated row per agent.
/// Every parsed block is checked; accepted blocks keep file order.
/// Throws Error(MalformedRow) or Error(RowSumNot1000).
std::vector<UtilityMatrix> parse_utility_matrices(std::istream& in, const MatrixFilter& filter = {});
std::vector<UtilityMatrix> load_utility_matrices(const std::filesystem::path& path,
                                                 const MatrixFilter& filter = {});
void write_utility_matrices(std::ostream& out, const std::vector<UtilityMatrix>& matrices);

/// m uniform in [4, 15], agents uniform in [2, 6], rows are uniform random
/// compositions of 1000. Deterministic for a seed.
std::vector<UtilityMatrix> synthesize_matrices(std::size_t count, std::uint64_t seed);

enum class ModeOp { avg, max, min };

std::string_view to_string(ModeOp op);
ModeOp parse_mode_op(std::string_view text);

struct ModePair {
  ModeOp cost_op = ModeOp::avg;
  ModeOp price_op = ModeOp::avg;

  friend bool operator==(const ModePair&, const ModePair&) = default;
};

/// (avg,avg), (max,max), (avg,max), (max,avg), (max,min), (avg,min)
const std::array<ModePair, 6>& studied_modes();

struct BuiltInstance {
  Instance instance;
  std::vector<std::int64_t> raw_prices;  // before clamping to max(u1, u2)
  std::size_t clamped = 0;
};

/// Utilities from the two sampled rows, costs from the pair, prices from all
/// agents then clamped. Throws Error(SameAgentSampled).
BuiltInstance build_dsirs_instance(const UtilityMatrix& matrix, std::pair<std::size_t, std::size_t> agents,
                                   ModePair mode, Budget budget);

/// Two distinct agents drawn from a generator keyed on (seed, index).
std::pair<std::size_t, std::size_t> sample_agent_pair(std::size_t agents, std::uint64_t seed, std::uint64_t index);

struct SweepConfig {
  std::vector<std::int64_t> budgets{0, 1, 2, 4, 8, 16, 32, 64};
  std::vector<ModePair> modes{studied_modes().begin(), studied_modes().end()};
  Rational epsilon{1, 10};
  std::uint64_t seed = 42;
  /// u_a >= ratio * u_b marks a resource as heavily dominated.
  std::int64_t dominance_ratio = 10;
  /// Reuse a cheaper budget's plan when the solver does worse at a larger one.
  bool carry_incumbent = true;
  unsigned jobs = 1;
  FptasOptions fptas;
};

struct SweepRecord {
  std::string instance_id;
  ModePair mode;
  std::int64_t budget = 0;
  ExtRational rho;
  Rational d;
  std::size_t s0 = 0;
  std::size_t s1 = 0;  // the first sampled agent's bundle
  std::size_t s2 = 0;
  std::string variant;  // which run produced the plan; "none" when infeasible
  bool feasible = false;
};

struct SweepStats {
  std::uint64_t cells = 0;
  std::uint64_t fptas_runs = 0;
  std::uint64_t carried = 0;     // cells where an earlier budget's plan was kept
  std::uint64_t infeasible = 0;
};

/// One record per (matrix, mode, budget), in that nesting order, with
/// budgets ascending.
std::vector<SweepRecord> run_sweep(const std::vector<UtilityMatrix>& matrices, const SweepConfig& config,
                                   SweepStats* stats = nullptr);

struct AggregateRow {
  ModePair mode;
  std::int64_t budget = 0;
  std::optional<Rational> mean_rho;  // nullopt when nothing was feasible
  std::optional<Rational> mean_d;
  std::size_t n_feasible = 0;
  std::size_t n_infeasible = 0;
};

/// Means over feasible records per (mode, budget). Throws Error(EmptyInput).
std::vector<AggregateRow> aggregate(const std::vector<SweepRecord>& records);

void write_results_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_aggregates_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Reads {"budgets","modes","epsilon","seed","dominance_ratio","jobs",...}.
/// Missing keys keep their defaults. Throws Error(ParseError).
SweepConfig sweep_config_from_json(const nlohmann::json& doc);

}  // namespace dsirs
