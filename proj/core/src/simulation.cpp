#include "dsirs/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "dsirs/errors.hpp"

namespace dsirs {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, stream tag, index).
std::mt19937_64 keyed_generator(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ splitmix64(tag)) ^ index));
}

// Uniform in [0, n) by rejection; the standard distributions are not
// portable across library implementations.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

constexpr std::uint64_t kSynthesisTag = 1;
constexpr std::uint64_t kPairTag = 2;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::int64_t parse_token(const std::string& cell, const std::string& where) {
  if (cell.empty() || cell.find_first_not_of("0123456789") != std::string::npos || cell.size() > 12) {
    throw Error(ErrorKind::MalformedRow, where + ": '" + cell + "' is not a nonnegative integer");
  }
  return std::stoll(cell);
}

std::int64_t combine(ModeOp op, const std::vector<std::int64_t>& values) {
  switch (op) {
    case ModeOp::max: return *std::max_element(values.begin(), values.end());
    case ModeOp::min: return *std::min_element(values.begin(), values.end());
    case ModeOp::avg: {
      std::int64_t sum = 0;
      for (auto v : values) sum += v;
      const auto n = static_cast<std::int64_t>(values.size());
      return (2 * sum + n) / (2 * n);  // half up
    }
  }
  return 0;
}

}  // namespace

std::vector<UtilityMatrix> parse_utility_matrices(std::istream& in, const MatrixFilter& filter) {
  std::vector<UtilityMatrix> accepted;
  std::optional<UtilityMatrix> block;
  std::size_t line_no = 0;

  auto close = [&] {
    if (!block) return;
    const UtilityMatrix& m = *block;
    for (std::size_t a = 0; a < m.rows.size(); ++a) {
      std::int64_t sum = 0;
      for (auto v : m.rows[a]) sum += v;
      if (sum != kTokenTotal) {
        throw Error(ErrorKind::RowSumNot1000, "instance " + m.id + " row " + std::to_string(a + 1) + " sums to " +
                                                  std::to_string(sum));
      }
    }
    if (m.items() >= filter.min_items && m.items() <= filter.max_items && m.agents() >= filter.min_agents &&
        accepted.size() < filter.first_n) {
      accepted.push_back(m);
    }
    block.reset();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto cells = split_commas(line);
    if (cells.front() == "instance") {
      close();
      if (accepted.size() >= filter.first_n) break;
      if (cells.size() != 2 || cells[1].empty()) throw Error(ErrorKind::MalformedRow, where + ": bad instance header");
      block = UtilityMatrix{cells[1], {}};
      continue;
    }
    if (!block) throw Error(ErrorKind::MalformedRow, where + ": row outside an instance block");
    std::vector<std::int64_t> row;
    for (const auto& c : cells) row.push_back(parse_token(c, where));
    if (!block->rows.empty() && row.size() != block->items()) {
      throw Error(ErrorKind::MalformedRow, where + ": instance " + block->id + " has rows of different lengths");
    }
    block->rows.push_back(std::move(row));
  }
  close();
  return accepted;
}

std::vector<UtilityMatrix> load_utility_matrices(const std::filesystem::path& path, const MatrixFilter& filter) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  return parse_utility_matrices(in, filter);
}

void write_utility_matrices(std::ostream& out, const std::vector<UtilityMatrix>& matrices) {
  for (const auto& m : matrices) {
    out << "instance," << m.id << '\n';
    for (const auto& row : m.rows) {
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << row[j];
      out << '\n';
    }
  }
}

std::vector<UtilityMatrix> synthesize_matrices(std::size_t count, std::uint64_t seed) {
  std::vector<UtilityMatrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    auto rng = keyed_generator(seed, kSynthesisTag, k);
    const std::size_t m = 4 + bounded(rng, 12);
    const std::size_t agents = 2 + bounded(rng, 5);
    UtilityMatrix matrix{"syn" + std::to_string(k), {}};
    for (std::size_t a = 0; a < agents; ++a) {
      std::vector<std::int64_t> cuts(m - 1);
      for (auto& c : cuts) c = static_cast<std::int64_t>(bounded(rng, kTokenTotal + 1));
      std::sort(cuts.begin(), cuts.end());
      std::vector<std::int64_t> row(m);
      std::int64_t prev = 0;
      for (std::size_t j = 0; j + 1 < m; ++j) {
        row[j] = cuts[j] - prev;
        prev = cuts[j];
      }
      row[m - 1] = kTokenTotal - prev;
      matrix.rows.push_back(std::move(row));
    }
    out.push_back(std::move(matrix));
  }
  return out;
}

std::string_view to_string(ModeOp op) {
  switch (op) {
    case ModeOp::avg: return "avg";
    case ModeOp::max: return "max";
    case ModeOp::min: return "min";
  }
  return "?";
}

ModeOp parse_mode_op(std::string_view text) {
  if (text == "avg") return ModeOp::avg;
  if (text == "max") return ModeOp::max;
  if (text == "min") return ModeOp::min;
  throw Error(ErrorKind::ParseError, "unknown mode operator '" + std::string(text) + "'");
}

const std::array<ModePair, 6>& studied_modes() {
  static const std::array<ModePair, 6> modes{{{ModeOp::avg, ModeOp::avg},
                                              {ModeOp::max, ModeOp::max},
                                              {ModeOp::avg, ModeOp::max},
                                              {ModeOp::max, ModeOp::avg},
                                              {ModeOp::max, ModeOp::min},
                                              {ModeOp::avg, ModeOp::min}}};
  return modes;
}

BuiltInstance build_dsirs_instance(const UtilityMatrix& matrix, std::pair<std::size_t, std::size_t> agents,
                                   ModePair mode, Budget budget) {
  const auto [a, b] = agents;
  if (a == b) throw Error(ErrorKind::SameAgentSampled, "agent " + std::to_string(a) + " sampled twice");
  if (a >= matrix.agents() || b >= matrix.agents()) {
    throw Error(ErrorKind::InvalidArgument, "agent index out of range for instance " + matrix.id);
  }
  BuiltInstance out;
  out.instance.budget = budget;
  std::vector<std::int64_t> column(matrix.agents());
  for (std::size_t j = 0; j < matrix.items(); ++j) {
    Resource r;
    r.name = "r" + std::to_string(j + 1);
    r.u1 = matrix.rows[a][j];
    r.u2 = matrix.rows[b][j];
    r.cost = Cost(combine(mode.cost_op, {r.u1, r.u2}));
    for (std::size_t i = 0; i < matrix.agents(); ++i) column[i] = matrix.rows[i][j];
    const std::int64_t raw = combine(mode.price_op, column);
    out.raw_prices.push_back(raw);
    r.price = std::min(raw, std::max(r.u1, r.u2));
    if (r.price < raw) ++out.clamped;
    out.instance.resources.push_back(std::move(r));
  }
  return out;
}

std::pair<std::size_t, std::size_t> sample_agent_pair(std::size_t agents, std::uint64_t seed, std::uint64_t index) {
  if (agents < 2) throw Error(ErrorKind::InvalidArgument, "need at least two agents to sample a pair");
  auto rng = keyed_generator(seed, kPairTag, index);
  const auto first = static_cast<std::size_t>(bounded(rng, agents));
  auto second = static_cast<std::size_t>(bounded(rng, agents - 1));
  if (second >= first) ++second;
  return {first, second};
}

namespace {

struct CellOutcome {
  bool feasible = false;
  ExtRational rho = ExtRational::infinity();
  Rational d;
  std::size_t s0 = 0;
  std::size_t s1 = 0;
  std::size_t s2 = 0;
  std::string variant = "none";
};

bool better(const CellOutcome& x, const CellOutcome& y) {
  if (x.feasible != y.feasible) return x.feasible;
  if (!x.feasible) return false;
  if (x.rho != y.rho) return x.rho < y.rho;
  return x.d < y.d;
}

bool dominated(const Resource& r, std::int64_t ratio) {
  const std::int64_t hi = std::max(r.u1, r.u2);
  const std::int64_t lo = std::min(r.u1, r.u2);
  return hi > 0 && hi >= ratio * lo;
}

// The FPTAS on one variant of the cell instance. `presold` resources were
// replaced by valueless copies before solving and join S0 afterwards.
CellOutcome solve_variant(const Instance& cell, const Instance& solved, const ResourceSet& presold, bool swapped,
                          const SweepConfig& config, const std::string& name, SweepStats& stats) {
  CellOutcome out;
  out.variant = name;
  ++stats.fptas_runs;
  SolveResult result;
  try {
    result = fptas_awns_rho(solved, config.epsilon, config.fptas);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Infeasible) throw;
    out.variant = "none";
    return out;
  }
  bool have = false;
  for (const Plan& raw : result.plans) {
    ResourceSet s0 = raw.s0;
    ResourceSet s1 = swapped ? raw.s2 : raw.s1;
    ResourceSet s2 = swapped ? raw.s1 : raw.s2;
    if (!presold.empty()) {
      auto drop = [&](ResourceSet& s) {
        std::erase_if(s, [&](std::size_t i) { return std::binary_search(presold.begin(), presold.end(), i); });
      };
      drop(s1);
      drop(s2);
      s0.insert(s0.end(), presold.begin(), presold.end());
      s0 = make_set(std::move(s0));
    }
    Plan plan = raw.q_pinned ? make_pinned_plan(cell, s0, s1, s2, swapped ? Rational(1 - raw.q) : raw.q)
                             : make_plan(cell, s0, s1, s2);
    const WelfareReport w = welfare(plan, cell);
    if (!w.feasible) continue;
    CellOutcome c;
    c.feasible = true;
    c.rho = w.rho;
    c.d = w.d;
    c.s0 = plan.s0.size();
    c.s1 = plan.s1.size();
    c.s2 = plan.s2.size();
    c.variant = name;
    if (!have || better(c, out)) out = c;
    have = true;
  }
  return out;
}

CellOutcome solve_cell(const UtilityMatrix& matrix, std::pair<std::size_t, std::size_t> pair, ModePair mode,
                       std::int64_t budget, const SweepConfig& config, SweepStats& stats) {
  const Instance cell = build_dsirs_instance(matrix, pair, mode, Budget(budget)).instance;
  const Instance cell_swapped =
      build_dsirs_instance(matrix, {pair.second, pair.first}, mode, Budget(budget)).instance;

  ResourceSet heavy;
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (dominated(cell.resources[i], config.dominance_ratio)) heavy.push_back(i);
  }

  CellOutcome best;
  auto consider = [&](const CellOutcome& c) {
    if (better(c, best)) best = c;
  };
  consider(solve_variant(cell, cell, {}, false, config, "plain", stats));
  consider(solve_variant(cell, cell_swapped, {}, true, config, "swapped", stats));
  if (heavy.empty()) return best;

  auto forced_allocation = [&](Instance inst) {
    for (auto i : heavy) inst.resources[i].cost = Cost::unsellable();
    return inst;
  };
  consider(solve_variant(cell, forced_allocation(cell), {}, false, config, "forced-allocation", stats));
  consider(solve_variant(cell, forced_allocation(cell_swapped), {}, true, config, "forced-allocation-swapped", stats));

  // sell dominated resources up front, in index order, while the budget lasts
  ResourceSet presold;
  std::int64_t left = budget;
  for (auto i : heavy) {
    const Cost& c = cell.resources[i].cost;
    if (!c.is_unsellable() && c.units() <= left) {
      presold.push_back(i);
      left -= c.units();
    }
  }
  if (presold.empty()) return best;
  auto forced_sale = [&](Instance inst) {
    for (auto i : presold) {
      Resource& r = inst.resources[i];
      r = Resource{r.name, 0, 0, r.price, Cost(0)};
    }
    inst.budget = Budget(left);
    return inst;
  };
  consider(solve_variant(cell, forced_sale(cell), presold, false, config, "forced-sale", stats));
  consider(solve_variant(cell, forced_sale(cell_swapped), presold, true, config, "forced-sale-swapped", stats));
  return best;
}

std::vector<SweepRecord> sweep_matrix(const UtilityMatrix& matrix, std::uint64_t index, const SweepConfig& config,
                                      const std::vector<std::int64_t>& budgets, SweepStats& stats) {
  const auto pair = sample_agent_pair(matrix.agents(), config.seed, index);
  std::vector<SweepRecord> out;
  for (const ModePair& mode : config.modes) {
    CellOutcome incumbent;
    for (std::int64_t budget : budgets) {
      ++stats.cells;
      CellOutcome cell = solve_cell(matrix, pair, mode, budget, config, stats);
      if (config.carry_incumbent && better(incumbent, cell)) {
        ++stats.carried;
        cell = incumbent;
        if (!cell.variant.starts_with("carried:")) cell.variant = "carried:" + cell.variant;
      }
      if (!cell.feasible) ++stats.infeasible;
      incumbent = cell;
      out.push_back({matrix.id, mode, budget, cell.rho, cell.d, cell.s0, cell.s1, cell.s2, cell.variant,
                     cell.feasible});
    }
  }
  return out;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const std::vector<UtilityMatrix>& matrices, const SweepConfig& config,
                                   SweepStats* stats) {
  std::vector<std::int64_t> budgets = config.budgets;
  std::sort(budgets.begin(), budgets.end());
  budgets.erase(std::unique(budgets.begin(), budgets.end()), budgets.end());
  for (auto b : budgets) {
    if (b < 0) throw Error(ErrorKind::NegativeValue, "negative budget in the sweep grid");
  }

  std::vector<std::vector<SweepRecord>> per_matrix(matrices.size());
  std::vector<SweepStats> per_worker(std::max(1u, config.jobs));
  std::atomic<std::size_t> next{0};
  auto work = [&](SweepStats& local) {
    for (std::size_t k = next++; k < matrices.size(); k = next++) {
      per_matrix[k] = sweep_matrix(matrices[k], k, config, budgets, local);
    }
  };
  if (per_worker.size() == 1) {
    work(per_worker[0]);
  } else {
    std::vector<std::thread> pool;
    for (auto& local : per_worker) pool.emplace_back(work, std::ref(local));
    for (auto& t : pool) t.join();
  }

  std::vector<SweepRecord> out;
  for (auto& recs : per_matrix) {
    for (auto& r : recs) out.push_back(std::move(r));
  }
  if (stats) {
    *stats = {};
    for (const auto& s : per_worker) {
      stats->cells += s.cells;
      stats->fptas_runs += s.fptas_runs;
      stats->carried += s.carried;
      stats->infeasible += s.infeasible;
    }
  }
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw Error(ErrorKind::EmptyInput, "no sweep records to aggregate");
  std::vector<AggregateRow> rows;
  std::vector<Rational> rho_sum;
  std::vector<Rational> d_sum;
  std::map<std::tuple<int, int, std::int64_t>, std::size_t> slot;
  for (const auto& r : records) {
    const auto key = std::make_tuple(static_cast<int>(r.mode.cost_op), static_cast<int>(r.mode.price_op), r.budget);
    auto [it, fresh] = slot.try_emplace(key, rows.size());
    if (fresh) {
      rows.push_back({r.mode, r.budget, std::nullopt, std::nullopt, 0, 0});
      rho_sum.emplace_back(0);
      d_sum.emplace_back(0);
    }
    const std::size_t k = it->second;
    if (r.feasible && !r.rho.is_infinite()) {
      ++rows[k].n_feasible;
      rho_sum[k] += r.rho.value();
      d_sum[k] += r.d;
    } else {
      ++rows[k].n_infeasible;
    }
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].n_feasible == 0) continue;
    const Rational n(static_cast<unsigned long>(rows[k].n_feasible));
    rows[k].mean_rho = Rational(rho_sum[k] / n);
    rows[k].mean_d = Rational(d_sum[k] / n);
  }
  return rows;
}

void write_results_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  out << "instance_id,mode_cost,mode_price,budget,rho_num,rho_den,d_num,d_den,s0_size,s1_size,s2_size,variant,"
         "feasible\n";
  for (const auto& r : records) {
    out << r.instance_id << ',' << to_string(r.mode.cost_op) << ',' << to_string(r.mode.price_op) << ','
        << r.budget << ',';
    if (r.feasible) {
      out << r.rho.value().get_num().get_str() << ',' << r.rho.value().get_den().get_str() << ','
          << r.d.get_num().get_str() << ',' << r.d.get_den().get_str() << ',' << r.s0 << ',' << r.s1 << ','
          << r.s2;
    } else {
      out << "inf,1,,,,,";
    }
    out << ',' << r.variant << ',' << (r.feasible ? 1 : 0) << '\n';
  }
}

void write_aggregates_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "mode_cost,mode_price,budget,mean_rho,mean_d,n_feasible,n_infeasible\n";
  for (const auto& r : rows) {
    out << to_string(r.mode.cost_op) << ',' << to_string(r.mode.price_op) << ',' << r.budget << ','
        << (r.mean_rho ? to_decimal_string(*r.mean_rho, 12) : "nan") << ','
        << (r.mean_d ? to_decimal_string(*r.mean_d, 12) : "nan") << ',' << r.n_feasible << ',' << r.n_infeasible
        << '\n';
  }
}

SweepConfig sweep_config_from_json(const nlohmann::json& doc) {
  SweepConfig config;
  try {
    if (!doc.is_object()) throw Error(ErrorKind::ParseError, "sweep config must be a JSON object");
    if (doc.contains("budgets")) config.budgets = doc.at("budgets").get<std::vector<std::int64_t>>();
    if (doc.contains("modes")) {
      config.modes.clear();
      for (const auto& m : doc.at("modes")) {
        const auto pair = m.get<std::vector<std::string>>();
        if (pair.size() != 2) throw Error(ErrorKind::ParseError, "a mode is a [cost, price] pair");
        config.modes.push_back({parse_mode_op(pair[0]), parse_mode_op(pair[1])});
      }
    }
    if (doc.contains("epsilon")) {
      const auto& e = doc.at("epsilon");
      config.epsilon = parse_rational(e.is_string() ? e.get<std::string>() : e.dump());
    }
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("dominance_ratio")) config.dominance_ratio = doc.at("dominance_ratio").get<std::int64_t>();
    if (doc.contains("carry_incumbent")) config.carry_incumbent = doc.at("carry_incumbent").get<bool>();
    if (doc.contains("jobs")) config.jobs = doc.at("jobs").get<unsigned>();
    if (doc.contains("exhaustive_guesses")) config.fptas.exhaustive_guesses = doc.at("exhaustive_guesses").get<bool>();
    if (doc.contains("o2_valuation")) {
      const auto v = doc.at("o2_valuation").get<std::string>();
      if (v == "net-gain") {
        config.fptas.o2_valuation = O2Valuation::net_gain;
      } else if (v == "price") {
        config.fptas.o2_valuation = O2Valuation::price;
      } else {
        throw Error(ErrorKind::ParseError, "o2_valuation must be \"net-gain\" or \"price\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("sweep config: ") + e.what());
  }
  if (config.epsilon <= 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  return config;
}

}  // namespace dsirs
