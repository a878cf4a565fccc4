#include "dsirs/fptas.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

#include "dsirs/detail/aw_fast.hpp"
#include "dsirs/detail/doubled_welfare.hpp"
#include "dsirs/detail/window_dp.hpp"
#include "dsirs/errors.hpp"

namespace dsirs {

namespace {

using detail::DoubledWelfare;
using detail::Mask;

// q of a candidate: derived, or pinned to all revenue for one agent.
enum class Share { derived, to_agent1, to_agent2 };

struct Candidate {
  Mask m0 = 0;
  Mask m1 = 0;
  Mask m2 = 0;
  Share share = Share::derived;
  DoubledWelfare w;
};

struct MaskTriple {
  Mask m0, m1, m2;
  Share share;
  bool operator==(const MaskTriple&) const = default;
};

struct MaskTripleHash {
  std::size_t operator()(const MaskTriple& t) const noexcept {
    std::size_t h = std::hash<Mask>{}(t.m0);
    h = h * 1000003u ^ std::hash<Mask>{}(t.m1);
    h = h * 1000003u ^ std::hash<Mask>{}(t.m2);
    return h * 31u + static_cast<std::size_t>(t.share);
  }
};

// Scores plans on the original instance and keeps those tied for the least ratio.
class CandidatePool {
 public:
  CandidatePool(const Instance& instance, bool rederive, FptasDiagnostics& diag)
      : aw_(instance), rederive_(rederive), diag_(diag) {}

  void offer_frontier(Mask m0, Mask m1, Mask m2, Share share) {
    ++diag_.frontier_plans;
    offer(m0, m1, m2, share, false);
    if (rederive_ && seen_sales_.insert(m0).second) {
      ++diag_.aw_plans;
      const detail::AwMasks sub = aw_.subplan(m0);
      offer(m0, sub.s1, sub.s2, Share::derived, true);
    }
  }

  bool empty() const { return best_.empty(); }
  const std::vector<Candidate>& best() const { return best_; }
  bool best_has_frontier_plan() const { return best_has_frontier_; }

 private:
  void offer(Mask m0, Mask m1, Mask m2, Share share, bool from_aw) {
    const std::int64_t u1 = aw_.sum_u1(m1);
    const std::int64_t u2 = aw_.sum_u2(m2);
    const std::int64_t p = aw_.sum_price(m0);
    DoubledWelfare w;
    if (share == Share::derived) {
      w = detail::evaluate_doubled(u1, u2, p);
    } else {
      const bool one = share == Share::to_agent1;
      w.w1x2 = 2 * (u1 + (one ? p : 0));
      w.w2x2 = 2 * (u2 + (one ? 0 : p));
      w.q_num = one ? 1 : 0;
      w.q_den = 1;
      if (w.feasible()) detail::record_equitability_check(w.w1x2 == w.w2x2, w.w1x2 == w.w2x2);
    }
    if (!w.feasible()) return;
    const int cmp = best_.empty() ? -1 : compare_rho(w, best_.front().w);
    if (cmp > 0) return;
    if (cmp < 0) {
      best_.clear();
      members_.clear();
      best_has_frontier_ = false;
    }
    if (!members_.insert({m0, m1, m2, share}).second) {
      if (!from_aw) best_has_frontier_ = true;
      return;
    }
    if (!from_aw) best_has_frontier_ = true;
    best_.push_back({m0, m1, m2, share, w});
  }

  detail::AwEvaluator aw_;
  bool rederive_;
  FptasDiagnostics& diag_;
  std::vector<Candidate> best_;
  std::unordered_set<MaskTriple, MaskTripleHash> members_;
  std::unordered_set<Mask> seen_sales_;
  bool best_has_frontier_ = false;
};

using Sink = std::function<void(Mask, Mask, Mask, Share)>;

Share swap_share(Share s, bool swapped) {
  if (!swapped || s == Share::derived) return s;
  return s == Share::to_agent1 ? Share::to_agent2 : Share::to_agent1;
}

void run_main_branch(const Instance& instance, const Rational& eps, const FptasOptions& options,
                     FptasDiagnostics& diag, const Sink& sink) {
  const std::vector<RoleAssignment> roles = partition_roles(instance);
  for (bool swapped : {false, true}) {
    const Instance named = swapped ? swap_agents(instance) : instance;
    const bool has_ties = !classify_resources(named).r0.empty();
    for (const Guess& guess : enumerate_guesses(named, options.exhaustive_guesses)) {
      ++diag.guesses;
      const ScaledInstance scaled = scale_instance(named, guess, eps);
      for (const RoleAssignment& role : roles) {
        if (role.swapped != swapped) continue;
        // without tied resources both placements of R0 coincide
        if (role.r0_in_a1 && !has_ties) continue;
        detail::WindowDp dp(named, scaled, role.a1, instance.budget);
        diag.dp_passes += dp.for_each_distinct_window([&](const std::vector<detail::DpState>& frontier) {
          for (const auto& s : frontier) {
            if (swapped) {
              sink(s.m0, s.m2, s.m1, Share::derived);
            } else {
              sink(s.m0, s.m1, s.m2, Share::derived);
            }
          }
        });
      }
    }
  }
}

void run_level(const Instance& instance, const Rational& eps, const FptasOptions& options, FptasDiagnostics& diag,
               const Sink& sink) {
  run_main_branch(instance, eps, options, diag, sink);
  if (!options.heavy_branch) return;

  const std::size_t n = instance.size();
  const Mask all = n == 64 ? ~Mask{0} : detail::bit(n) - 1;
  for (bool swapped : {false, true}) {
    const Instance named = swapped ? swap_agents(instance) : instance;
    const auto heavy = detect_heavy_resource(named, eps, options.o2_valuation);
    if (!heavy) continue;
    ++diag.heavy_resources;
    const std::size_t r = *heavy;
    const Mask rb = detail::bit(r);

    // heavy resource kept by its agent; the rest sold or given to the other
    ResourceSet rest;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != r) rest.push_back(i);
    }
    const O2Result o2 = o2_value(named, rest, instance.budget, eps, options.o2_valuation);
    const Mask sold = detail::mask_from_set(o2.sold);
    const Mask other = all & ~sold & ~rb;
    for (Share share : {Share::to_agent1, Share::derived}) {
      if (swapped) {
        sink(sold, other, rb, swap_share(share, true));
      } else {
        sink(sold, rb, other, share);
      }
    }

    // heavy resource sold: replace it by a valueless copy keeping its price
    const Resource& hr = instance.resources[r];
    const bool positive_budget = instance.budget.is_unlimited() || instance.budget.units() > 0;
    if (!positive_budget || hr.cost.is_unsellable() || !instance.budget.admits(hr.cost.units())) continue;
    Instance reduced = instance;
    reduced.resources[r] = Resource{hr.name, 0, 0, hr.price, Cost(0)};
    if (!instance.budget.is_unlimited()) reduced.budget = Budget(instance.budget.units() - hr.cost.units());
    const Sink lifted = [&](Mask m0, Mask m1, Mask m2, Share share) {
      sink(m0 | rb, m1 & ~rb, m2 & ~rb, share);
    };
    run_level(reduced, eps, options, diag, lifted);
  }
}

}  // namespace

SolveResult fptas_awns_rho(const Instance& instance, const Rational& eps, const FptasOptions& options,
                           FptasDiagnostics* diagnostics) {
  if (eps <= 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (instance.size() > 64) throw Error(ErrorKind::InstanceTooLarge, "the FPTAS supports at most 64 resources");
  FptasDiagnostics diag;
  CandidatePool pool(instance, options.rederive_aw, diag);
  const Sink sink = [&](Mask m0, Mask m1, Mask m2, Share share) { pool.offer_frontier(m0, m1, m2, share); };
  run_level(instance, eps, options, diag, sink);
  if (pool.empty()) throw Error(ErrorKind::Infeasible, "no feasible plan on any frontier");
  diag.best_from_aw_only = !pool.best_has_frontier_plan();
  if (diagnostics) *diagnostics = diag;

  // Pareto-prefilter on the integer welfare pairs before building plans
  std::vector<Candidate> tied = pool.best();
  std::vector<Plan> plans;
  for (const Candidate& c : tied) {
    const bool dominated = std::any_of(tied.begin(), tied.end(), [&](const Candidate& o) {
      return o.w.w1x2 >= c.w.w1x2 && o.w.w2x2 >= c.w.w2x2 && (o.w.w1x2 > c.w.w1x2 || o.w.w2x2 > c.w.w2x2);
    });
    if (dominated) continue;
    auto s0 = detail::set_from_mask(c.m0);
    auto s1 = detail::set_from_mask(c.m1);
    auto s2 = detail::set_from_mask(c.m2);
    if (c.share == Share::derived) {
      plans.push_back(make_plan(instance, std::move(s0), std::move(s1), std::move(s2)));
    } else {
      plans.push_back(make_pinned_plan(instance, std::move(s0), std::move(s1), std::move(s2),
                                       Rational(c.share == Share::to_agent1 ? 1 : 0)));
    }
  }
  SolveResult result = finalize_result(std::move(plans), tied.front().w.rho(), SolverKind::fptas, instance);
  result.epsilon = eps;
  return result;
}

}  // namespace dsirs
