#include "dsirs/exact.hpp"

#include <algorithm>

#include "dsirs/adjusted_winner.hpp"
#include "dsirs/detail/aw_fast.hpp"
#include "dsirs/detail/doubled_welfare.hpp"
#include "dsirs/errors.hpp"

namespace dsirs {

using detail::DoubledWelfare;
using detail::Mask;

void Objective::check() const {
  const bool constrained = kind == ObjectiveKind::min_cost_given_d || kind == ObjectiveKind::min_cost_given_rho;
  if (constrained != threshold.has_value()) {
    throw Error(ErrorKind::InvalidArgument,
                constrained ? "constrained objective needs a threshold" : "threshold given for an unconstrained objective");
  }
  if (kind == ObjectiveKind::min_cost_given_d && *threshold < 0) {
    throw Error(ErrorKind::InvalidArgument, "d threshold must be nonnegative");
  }
  if (kind == ObjectiveKind::min_cost_given_rho && *threshold < 1) {
    throw Error(ErrorKind::InvalidArgument, "rho threshold must be at least 1");
  }
}

namespace {

struct Candidate {
  Mask s0 = 0;
  Mask s1 = 0;
  Mask s2 = 0;
  DoubledWelfare w;
  std::int64_t cost = 0;
};

// Orders two feasible candidates under the objective: negative if `a` is better.
class Ranker {
 public:
  explicit Ranker(const Objective& objective) : objective_(objective) {}

  bool admissible(const Candidate& c) const {
    if (!c.w.feasible()) return false;
    switch (objective_.kind) {
      case ObjectiveKind::min_cost_given_d:
        return Rational(make_rational(c.w.d_x2(), 2)) <= *objective_.threshold;
      case ObjectiveKind::min_cost_given_rho:
        return c.w.rho() <= *objective_.threshold;
      default:
        return true;
    }
  }

  int compare(const Candidate& a, const Candidate& b) const {
    switch (objective_.kind) {
      case ObjectiveKind::min_d: return a.w.d_x2() < b.w.d_x2() ? -1 : (a.w.d_x2() > b.w.d_x2() ? 1 : 0);
      case ObjectiveKind::min_rho: return compare_rho(a.w, b.w);
      case ObjectiveKind::max_nash: return -compare_nash(a.w, b.w);
      case ObjectiveKind::min_cost_given_d:
      case ObjectiveKind::min_cost_given_rho: return a.cost < b.cost ? -1 : (a.cost > b.cost ? 1 : 0);
    }
    return 0;
  }

  Rational value(const Candidate& c) const {
    switch (objective_.kind) {
      case ObjectiveKind::min_d: return c.w.d();
      case ObjectiveKind::min_rho: return c.w.rho();
      case ObjectiveKind::max_nash: {
        Rational p(mpz_class(static_cast<long>(c.w.w1x2)) * mpz_class(static_cast<long>(c.w.w2x2)), mpz_class(4));
        p.canonicalize();
        return p;
      }
      case ObjectiveKind::min_cost_given_d:
      case ObjectiveKind::min_cost_given_rho: return make_rational(c.cost);
    }
    return Rational(0);
  }

 private:
  const Objective& objective_;
};

// Keeps every candidate tied for the best objective value.
class BestSet {
 public:
  explicit BestSet(const Ranker& ranker) : ranker_(ranker) {}

  void offer(const Candidate& c) {
    if (!ranker_.admissible(c)) return;
    if (best_.empty()) {
      best_.push_back(c);
      return;
    }
    const int cmp = ranker_.compare(c, best_.front());
    if (cmp < 0) {
      best_.clear();
      best_.push_back(c);
    } else if (cmp == 0) {
      best_.push_back(c);
    }
  }

  const std::vector<Candidate>& best() const { return best_; }

 private:
  const Ranker& ranker_;
  std::vector<Candidate> best_;
};

std::vector<std::int64_t> finite_costs(const Instance& instance) {
  std::vector<std::int64_t> c(instance.size());
  for (std::size_t i = 0; i < instance.size(); ++i) {
    c[i] = instance.resources[i].cost.is_unsellable() ? -1 : instance.resources[i].cost.units();
  }
  return c;
}

// Visits every sale set with affordable cost, by increasing cardinality and
// lexicographically within a cardinality.
template <class Visit>
void for_each_affordable_sale(const Instance& instance, Visit&& visit) {
  const std::size_t n = instance.size();
  const auto costs = finite_costs(instance);
  std::vector<std::size_t> comb;
  for (std::size_t k = 0; k <= n; ++k) {
    comb.resize(k);
    for (std::size_t i = 0; i < k; ++i) comb[i] = i;
    while (true) {
      Mask m = 0;
      std::int64_t cost = 0;
      bool ok = true;
      for (auto i : comb) {
        if (costs[i] < 0) {
          ok = false;
          break;
        }
        cost += costs[i];
        m |= detail::bit(i);
      }
      if (ok && instance.budget.admits(cost)) visit(m, cost);
      // next combination in lexicographic order
      std::size_t pos = k;
      while (pos > 0 && comb[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++comb[pos - 1];
      for (std::size_t j = pos; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
}

Plan to_plan(const Instance& instance, const Candidate& c) {
  return make_plan(instance, detail::set_from_mask(c.s0), detail::set_from_mask(c.s1), detail::set_from_mask(c.s2));
}

void require_size(const Instance& instance, std::size_t cap) {
  if (instance.size() > cap || instance.size() > 64) {
    throw Error(ErrorKind::InstanceTooLarge, std::to_string(instance.size()) + " resources exceed the cap of " +
                                                 std::to_string(std::min<std::size_t>(cap, 64)));
  }
}

}  // namespace

SolveResult solve_awns_exact(const Instance& instance, const Objective& objective, const ExactOptions& options) {
  objective.check();
  require_size(instance, options.max_resources);
  const detail::AwEvaluator aw(instance);
  const Ranker ranker(objective);
  BestSet best(ranker);

  for_each_affordable_sale(instance, [&](Mask sold, std::int64_t cost) {
    const detail::AwMasks sub = aw.subplan(sold);
    Candidate c{sold, sub.s1, sub.s2, {}, cost};
    c.w = detail::evaluate_doubled(aw.sum_u1(sub.s1), aw.sum_u2(sub.s2), aw.sum_price(sold));
    best.offer(c);
  });

  if (best.best().empty()) {
    throw Error(ErrorKind::Infeasible, "no affordable sale set yields a feasible AW-derived plan" +
                                           std::string(objective.threshold ? " within the threshold" : ""));
  }
  std::vector<Plan> plans;
  for (const auto& c : best.best()) plans.push_back(to_plan(instance, c));
  return finalize_result(std::move(plans), ranker.value(best.best().front()), SolverKind::exact_awns, instance);
}

namespace {

struct SubsetTables {
  std::vector<std::int64_t> u1;
  std::vector<std::int64_t> u2;
  std::vector<std::int64_t> price;

  explicit SubsetTables(const Instance& instance) {
    const std::size_t size = std::size_t{1} << instance.size();
    u1.assign(size, 0);
    u2.assign(size, 0);
    price.assign(size, 0);
    for (std::size_t m = 1; m < size; ++m) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
      const std::size_t rest = m & (m - 1);
      const Resource& r = instance.resources[low];
      u1[m] = u1[rest] + r.u1;
      u2[m] = u2[rest] + r.u2;
      price[m] = price[rest] + r.price;
    }
  }
};

// True and a witness share when some q admits an envy-free feasible plan.
std::optional<Rational> envy_free_share(std::int64_t own1, std::int64_t own2, std::int64_t other1,
                                        std::int64_t other2, std::int64_t price) {
  // own1 = u1(S1), own2 = u2(S2), other1 = u1(S2), other2 = u2(S1).
  if (price == 0) {
    if (own1 > 0 && own2 > 0 && other1 <= own1 && other2 <= own2) return Rational(0);
    return std::nullopt;
  }
  // Work in t = 2qP in [0, 2P].
  const std::int64_t two_p = 2 * price;
  std::int64_t lo = std::max<std::int64_t>(0, other1 + price - own1);
  std::int64_t hi = std::min<std::int64_t>(two_p, own2 + price - other2);
  bool lo_strict = false;
  bool hi_strict = false;
  if (own1 == 0 && lo <= 0) {
    lo = 0;
    lo_strict = true;
  }
  if (own2 == 0 && hi >= two_p) {
    hi = two_p;
    hi_strict = true;
  }
  if (lo > hi || (lo == hi && (lo_strict || hi_strict))) return std::nullopt;
  Rational t = lo == hi ? make_rational(lo) : make_rational(lo + hi, 2);
  return Rational(t / two_p);
}

}  // namespace

OracleOutcome oracle_best_plan(const Instance& instance, OracleCriterion criterion, const OracleOptions& options) {
  require_size(instance, options.max_resources);
  const std::size_t n = instance.size();
  const Mask all = n == 0 ? 0 : (detail::bit(n) - 1);
  const SubsetTables sums(instance);

  if (criterion == OracleCriterion::exists_envy_free) {
    EnvyFreeReport report;
    for_each_affordable_sale(instance, [&](Mask sold, std::int64_t) {
      if (report.exists) return;
      const Mask rest = all & ~sold;
      const std::int64_t price = sums.price[sold];
      for (Mask s1 = rest;; s1 = (s1 - 1) & rest) {
        const Mask s2 = rest & ~s1;
        ++report.plans_examined;
        const std::int64_t own1 = sums.u1[s1];
        const std::int64_t own2 = sums.u2[s2];
        const std::int64_t other1 = sums.u1[s2];
        const std::int64_t other2 = sums.u2[s1];
        std::optional<Plan> witness;
        if (options.share_mode == ShareMode::derived) {
          const DoubledWelfare w = detail::evaluate_doubled(own1, own2, price);
          // doubled envies against the mirrored plan with share 1 - q
          // t = 2qP; the mirror pays Agent 1 (1 - q)P and Agent 2 qP
          const std::int64_t t = w.q_num;
          const std::int64_t envy1 = 2 * other1 + 2 * price - t - w.w1x2;
          const std::int64_t envy2 = 2 * other2 + t - w.w2x2;
          if (w.feasible() && envy1 <= 0 && envy2 <= 0) {
            witness = make_plan(instance, detail::set_from_mask(sold), detail::set_from_mask(s1),
                                detail::set_from_mask(s2));
          }
        } else if (auto q = envy_free_share(own1, own2, other1, other2, price)) {
          witness = make_pinned_plan(instance, detail::set_from_mask(sold), detail::set_from_mask(s1),
                                     detail::set_from_mask(s2), *q);
        }
        if (witness) {
          report.exists = true;
          report.witness = std::move(witness);
          return;
        }
        if (s1 == 0) break;
      }
    });
    return report;
  }

  Objective objective = criterion == OracleCriterion::min_d     ? Objective::min_d()
                        : criterion == OracleCriterion::min_rho ? Objective::min_rho()
                                                                : Objective::max_nash();
  const Ranker ranker(objective);
  BestSet best(ranker);
  for_each_affordable_sale(instance, [&](Mask sold, std::int64_t cost) {
    const Mask rest = all & ~sold;
    const std::int64_t price = sums.price[sold];
    for (Mask s1 = rest;; s1 = (s1 - 1) & rest) {
      const Mask s2 = rest & ~s1;
      Candidate c{sold, s1, s2, detail::evaluate_doubled(sums.u1[s1], sums.u2[s2], price), cost};
      best.offer(c);
      if (s1 == 0) break;
    }
  });
  if (best.best().empty()) throw Error(ErrorKind::Infeasible, "no feasible plan exists");
  std::vector<Plan> plans;
  for (const auto& c : best.best()) plans.push_back(to_plan(instance, c));
  return finalize_result(std::move(plans), ranker.value(best.best().front()), SolverKind::oracle, instance);
}

}  // namespace dsirs
