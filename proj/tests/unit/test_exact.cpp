#include "doctest.h"

#include <random>

#include "dsirs/adjusted_winner.hpp"
#include "dsirs/errors.hpp"
#include "dsirs/exact.hpp"
#include "dsirs/json_io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_instance.hpp"

using namespace dsirs;
using testsupport::fixture;
using testsupport::q;

namespace {

ResourceSet names(const Instance& inst, std::vector<std::string> n) { return set_from_names(inst, n); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::ParseError;
}

const SolveResult& result(const OracleOutcome& o) { return std::get<SolveResult>(o); }

bool has_plan(const SolveResult& r, const Plan& p) {
  return std::any_of(r.plans.begin(), r.plans.end(), [&](const Plan& x) {
    return x.s0 == p.s0 && x.s1 == p.s1 && x.s2 == p.s2;
  });
}

oracle::Goal goal_for(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::min_d: return oracle::Goal::min_d;
    case ObjectiveKind::max_nash: return oracle::Goal::max_nash;
    default: return oracle::Goal::min_rho;
  }
}

Rational objective_of(const SolveResult& r, const Instance& inst, oracle::Goal g) {
  const auto w = welfare(r.plans.front(), inst);
  switch (g) {
    case oracle::Goal::min_d: return w.d;
    case oracle::Goal::min_rho: return w.rho.value();
    case oracle::Goal::max_nash: return w.w1 * w.w2;
  }
  return 0;
}

Instance infeasible_single() {
  Instance inst;
  inst.resources = {{"r", 1, 1, 0, Cost(0)}};
  inst.budget = Budget(0);
  return inst;
}

}  // namespace

TEST_CASE("exact min-rho on the worked example") {
  const auto alex = fixture("alex_belle");
  const auto r = solve_awns_exact(alex, Objective::min_rho());
  CHECK(r.objective == 1);
  REQUIRE(r.plans.size() == 1);
  CHECK(r.plans.front().s0 == names(alex, {"r1"}));
  CHECK(r.plans.front().q == q(4, 25));
  CHECK(r.cost == 1);
  CHECK(r.solver == SolverKind::exact_awns);
}

TEST_CASE("vacuous d threshold costs nothing") {
  std::mt19937_64 rng(21);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testsupport::random_instance(rng, {.n = 6, .total = 50});
    const auto empty = welfare(aw_derived_plan({}, inst), inst);
    if (!empty.feasible) continue;
    const auto r = solve_awns_exact(inst, Objective::min_cost_given_d(50));
    CHECK(r.objective == 0);
    CHECK(r.cost == 0);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("exact solver agrees with an independent enumerator") {
  std::mt19937_64 rng(23);
  const ObjectiveKind kinds[] = {ObjectiveKind::min_d, ObjectiveKind::min_rho, ObjectiveKind::max_nash};
  int solved = 0;
  for (int trial = 0; trial < 150; ++trial) {
    testsupport::InstanceSpec spec{.n = 10, .total = 120};
    spec.family = trial % 4 == 0 ? testsupport::Family::ties : testsupport::Family::uniform;
    const auto inst = testsupport::random_instance(rng, spec);
    const auto kind = kinds[trial % 3];
    const auto goal = goal_for(kind);
    const auto ref = oracle::awns(inst, goal);
    const Objective objective{kind, std::nullopt};
    if (!ref.found) {
      CHECK(kind_of([&] { solve_awns_exact(inst, objective); }) == ErrorKind::Infeasible);
      continue;
    }
    const auto r = solve_awns_exact(inst, objective);
    CHECK(r.objective == ref.value);
    CHECK(objective_of(r, inst, goal) == ref.value);
    for (const auto& p : r.plans) CHECK(welfare(p, inst).feasible);
    ++solved;
  }
  CHECK(solved > 100);
}

TEST_CASE("constrained variants return the cheapest qualifying plan") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testsupport::random_instance(rng, {.n = 8, .total = 80, .max_budget = 10});
    const auto ref = oracle::awns(inst, oracle::Goal::min_d);
    if (!ref.found) continue;
    const auto min_d = solve_awns_exact(inst, Objective::min_d());
    const auto r = solve_awns_exact(inst, Objective::min_cost_given_d(min_d.objective));
    CHECK(welfare(r.plans.front(), inst).d <= min_d.objective);

    std::int64_t cheapest = -1;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << inst.size()); ++m) {
      const auto side = oracle::aw_sides_mask(inst, m);
      const auto e = oracle::evaluate(inst, side);
      if (!e.feasible || oracle::d_of(e) > min_d.objective) continue;
      std::int64_t c = 0;
      for (std::size_t i = 0; i < inst.size(); ++i)
        if (side[i] == 0) c += inst.resources[i].cost.units();
      if (cheapest < 0 || c < cheapest) cheapest = c;
    }
    CHECK(r.cost == cheapest);
    CHECK(r.objective == cheapest);

    const auto rho = solve_awns_exact(inst, Objective::min_rho());
    const auto rc = solve_awns_exact(inst, Objective::min_cost_given_rho(rho.objective));
    CHECK(welfare(rc.plans.front(), inst).rho <= ExtRational(rho.objective));
    CHECK(rc.cost <= rho.cost);
  }
}

TEST_CASE("zero difference iff unit ratio") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = testsupport::random_instance(rng, {.n = 7, .total = 30, .max_budget = 8});
    try {
      const auto d = solve_awns_exact(inst, Objective::min_d());
      const auto rho = solve_awns_exact(inst, Objective::min_rho());
      CHECK((d.objective == 0) == (rho.objective == 1));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Infeasible);
    }
  }
}

TEST_CASE("oracle examples from the fairness propositions") {
  const auto dvr = fixture("d_vs_rho");
  const auto min_d = result(oracle_best_plan(dvr, OracleCriterion::min_d));
  CHECK(min_d.objective == 1);
  const auto p1 = make_plan(dvr, names(dvr, {"a"}), names(dvr, {"b"}), names(dvr, {"c"}));
  CHECK(has_plan(min_d, p1));
  CHECK(welfare(p1, dvr).rho == ExtRational(Rational(2)));
  CHECK(min_d.solver == SolverKind::oracle);

  const auto min_rho = result(oracle_best_plan(dvr, OracleCriterion::min_rho));
  CHECK(min_rho.objective == q(99, 92));
  const auto p2 = make_plan(dvr, {}, names(dvr, {"a"}), names(dvr, {"b", "c"}));
  CHECK(has_plan(min_rho, p2));
  CHECK(welfare(p2, dvr).d == 7);

  const auto envy = std::get<EnvyFreeReport>(oracle_best_plan(fixture("envy_impossible"), OracleCriterion::exists_envy_free));
  CHECK_FALSE(envy.exists);
  CHECK(envy.plans_examined > 0);

  const auto conf = fixture("conflicts");
  const auto cd = result(oracle_best_plan(conf, OracleCriterion::min_d));
  CHECK(cd.objective == 0);
  const auto paper = make_plan(conf, names(conf, {"y"}), names(conf, {"x", "z"}), names(conf, {"v", "w"}));
  const auto wp = welfare(paper, conf);
  CHECK(wp.w1 == 46);
  CHECK(wp.w2 == 46);
  CHECK(wp.d == 0);
  // The zero-difference optimum set is Pareto filtered, so it holds plans at
  // least as good for both agents as the (46, 46) plan.
  for (const auto& p : cd.plans) CHECK(welfare(p, conf).w1 >= 46);
}

TEST_CASE("any-share mode finds envy-free plans with pinned shares") {
  const auto conf = fixture("conflicts");
  OracleOptions any;
  any.share_mode = ShareMode::any;
  const auto r = std::get<EnvyFreeReport>(oracle_best_plan(conf, OracleCriterion::exists_envy_free, any));
  CHECK(r.exists);
  REQUIRE(r.witness.has_value());
  CHECK(envy(*r.witness, conf).envy_free);
  CHECK(welfare(*r.witness, conf).feasible);

  const auto derived = std::get<EnvyFreeReport>(oracle_best_plan(conf, OracleCriterion::exists_envy_free));
  if (derived.exists) CHECK(envy(*derived.witness, conf).envy_free);
}

TEST_CASE("oracle matches full enumeration and bounds the AW-derived optimum") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const auto inst = testsupport::random_instance(rng, {.n = 6, .total = 40});
    const auto ref = oracle::all_plans(inst, oracle::Goal::min_d);
    if (!ref.found) continue;
    const auto r = result(oracle_best_plan(inst, OracleCriterion::min_d));
    CHECK(r.objective == ref.value);
    const auto rr = oracle::all_plans(inst, oracle::Goal::min_rho);
    CHECK(result(oracle_best_plan(inst, OracleCriterion::min_rho)).objective == rr.value);
    const auto rn = oracle::all_plans(inst, oracle::Goal::max_nash);
    const auto nash = result(oracle_best_plan(inst, OracleCriterion::max_nash));
    CHECK(nash.objective == rn.value);

    // Nash maximizers are not dominated by any feasible plan.
    for (const auto& p : nash.plans) {
      const auto w = welfare(p, inst);
      oracle::for_each_tripartition(inst.size(), [&](const std::vector<int>& side) {
        const auto e = oracle::evaluate(inst, side);
        if (!e.feasible) return;
        CHECK_FALSE((e.w1 >= w.w1 && e.w2 >= w.w2 && (e.w1 > w.w1 || e.w2 > w.w2)));
      });
    }

    try {
      const auto exact = solve_awns_exact(inst, Objective::min_d());
      CHECK(r.objective <= exact.objective);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Infeasible);
    }
  }
}

TEST_CASE("results are deterministic") {
  const auto conf = fixture("conflicts");
  const auto a = solve_result_to_json(result(oracle_best_plan(conf, OracleCriterion::min_d)), conf).dump();
  const auto b = solve_result_to_json(result(oracle_best_plan(conf, OracleCriterion::min_d)), conf).dump();
  CHECK(a == b);
  const auto alex = fixture("alex_belle");
  CHECK(solve_result_to_json(solve_awns_exact(alex, Objective::min_d()), alex).dump() ==
        solve_result_to_json(solve_awns_exact(alex, Objective::min_d()), alex).dump());
}

TEST_CASE("error paths") {
  CHECK(kind_of([] { solve_awns_exact(infeasible_single(), Objective::min_rho()); }) == ErrorKind::Infeasible);
  CHECK(kind_of([] { oracle_best_plan(infeasible_single(), OracleCriterion::min_d); }) == ErrorKind::Infeasible);
  CHECK_FALSE(std::get<EnvyFreeReport>(oracle_best_plan(infeasible_single(), OracleCriterion::exists_envy_free)).exists);

  Instance big;
  for (int i = 0; i < 21; ++i) big.resources.push_back({"r" + std::to_string(i), 1, 1, 0, Cost(0)});
  CHECK(kind_of([&] { solve_awns_exact(big, Objective::min_d()); }) == ErrorKind::InstanceTooLarge);
  big.resources.resize(16);
  CHECK(kind_of([&] { oracle_best_plan(big, OracleCriterion::min_d); }) == ErrorKind::InstanceTooLarge);

  const auto alex = fixture("alex_belle");
  CHECK(kind_of([&] { solve_awns_exact(alex, Objective{ObjectiveKind::min_cost_given_d, std::nullopt}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { solve_awns_exact(alex, Objective{ObjectiveKind::min_d, Rational(1)}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { Objective::min_cost_given_d(-1).check(); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { Objective::min_cost_given_rho(q(1, 2)).check(); }) == ErrorKind::InvalidArgument);
  // A threshold nothing meets.
  const auto dvr = fixture("d_vs_rho");
  CHECK(kind_of([&] { solve_awns_exact(dvr, Objective::min_cost_given_d(0)); }) == ErrorKind::Infeasible);
}
