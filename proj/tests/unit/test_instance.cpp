#include "doctest.h"

#include <random>

#include "dsirs/errors.hpp"
#include "dsirs/instance.hpp"
#include "dsirs/json_io.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "random_instance.hpp"

using namespace dsirs;
using testsupport::fixture;
using testsupport::q;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::ParseError;
}

ResourceSet names(const Instance& inst, std::vector<std::string> n) { return set_from_names(inst, n); }

std::vector<int> sides_of(const Plan& plan, std::size_t n) {
  std::vector<int> side(n, 0);
  for (auto i : plan.s1) side[i] = 1;
  for (auto i : plan.s2) side[i] = 2;
  return side;
}

}  // namespace

TEST_CASE("validate accepts the worked example and the minimal instance") {
  const auto alex = fixture("alex_belle");
  CHECK_NOTHROW(validate_instance(alex));
  CHECK(sum_u1(alex, make_set({0, 1, 2, 3, 4, 5})) == 100);
  CHECK(sum_u2(alex, make_set({0, 1, 2, 3, 4, 5})) == 100);

  Instance single;
  single.resources.push_back({"r", 1, 1, 0, Cost(0)});
  single.budget = Budget(0);
  CHECK_NOTHROW(validate_instance(single));
}

TEST_CASE("validate reports each invariant violation") {
  auto alex = fixture("alex_belle");
  alex.resources[0].price = 57;
  CHECK(kind_of([&] { validate_instance(alex); }) == ErrorKind::PriceExceedsMaxUtility);

  CHECK(kind_of([&] { validate_instance(fixture("unequal_totals")); }) == ErrorKind::UnequalTotals);

  auto neg = fixture("alex_belle");
  neg.resources[2].u1 = -1;
  CHECK(kind_of([&] { validate_instance(neg); }) == ErrorKind::NegativeValue);

  auto dup = fixture("alex_belle");
  dup.resources[3].name = "r1";
  CHECK(kind_of([&] { validate_instance(dup); }) == ErrorKind::DuplicateName);

  auto big = fixture("alex_belle");
  big.resources[5].cost = Cost(kMaxValue + 1);
  CHECK(kind_of([&] { validate_instance(big); }) == ErrorKind::ValueOutOfRange);

  auto budget = fixture("alex_belle");
  budget.budget = Budget(-3);
  CHECK(kind_of([&] { validate_instance(budget); }) == ErrorKind::NegativeValue);
}

TEST_CASE("revenue share on the worked example and the conflicts instance") {
  const auto alex = fixture("alex_belle");
  const auto s0 = names(alex, {"r1"}), s1 = names(alex, {"r2", "r3", "r4", "r5"}), s2 = names(alex, {"r6"});
  const Rational share = revenue_share(s0, s1, s2, alex);
  CHECK(share == q(4, 25));
  CHECK(share * 50 == 8);
  CHECK((1 - share) * 50 == 42);

  CHECK(revenue_share({}, s1, make_set({0, 5}), alex) == 0);

  const auto conf = fixture("conflicts");
  CHECK(revenue_share(names(conf, {"y"}), names(conf, {"x", "z"}), names(conf, {"v", "w"}), conf) == q(1, 2));
}

TEST_CASE("revenue share rejects a non-partition") {
  const auto alex = fixture("alex_belle");
  CHECK(kind_of([&] { revenue_share(make_set({0}), make_set({0, 1}), make_set({2, 3, 4, 5}), alex); }) ==
        ErrorKind::NotAPartition);
  CHECK(kind_of([&] { revenue_share(make_set({0}), make_set({1}), make_set({2, 3, 4}), alex); }) ==
        ErrorKind::NotAPartition);
  CHECK(kind_of([&] { set_from_names(alex, std::vector<std::string>{"nope"}); }) == ErrorKind::UnknownResource);
}

TEST_CASE("welfare examples") {
  const auto alex = fixture("alex_belle");
  const auto plan = make_plan(alex, names(alex, {"r1"}), names(alex, {"r2", "r3", "r4", "r5"}), names(alex, {"r6"}));
  const auto w = welfare(plan, alex);
  CHECK(w.w1 == 52);
  CHECK(w.w2 == 52);
  CHECK(w.d == 0);
  CHECK(w.rho == ExtRational(Rational(1)));
  CHECK(w.feasible);

  const auto all1 = make_plan(alex, {}, make_set({0, 1, 2, 3, 4, 5}), {});
  const auto w1 = welfare(all1, alex);
  CHECK(w1.w1 == 100);
  CHECK(w1.w2 == 0);
  CHECK_FALSE(w1.feasible);
  CHECK(w1.rho.is_infinite());

  const auto conf = fixture("conflicts");
  const auto pinned = make_pinned_plan(conf, names(conf, {"z"}), names(conf, {"w", "y"}), names(conf, {"v", "x"}), 1);
  const auto wc = welfare(pinned, conf);
  CHECK(wc.w1 == 62);
  CHECK(wc.w2 == 67);

  auto over = make_plan(alex, make_set({0, 1}), make_set({2, 3, 4}), make_set({5}));
  const auto wo = welfare(over, alex);
  CHECK_FALSE(wo.budget_ok);
  CHECK_FALSE(wo.feasible);

  CHECK(kind_of([&] { make_pinned_plan(conf, {}, make_set({0, 1}), make_set({2, 3, 4}), 2); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("envy examples") {
  const auto conf = fixture("conflicts");
  const auto plan = make_plan(conf, names(conf, {"y"}), names(conf, {"x", "z"}), names(conf, {"v", "w"}));
  const auto e = envy(plan, conf);
  CHECK(e.envy1 == 37);
  CHECK(e.envy2 == 11);
  CHECK_FALSE(e.envy_free);

  const auto pinned = make_pinned_plan(conf, names(conf, {"z"}), names(conf, {"w", "y"}), names(conf, {"v", "x"}), 1);
  const auto ep = envy(pinned, conf);
  CHECK(ep.envy1 == -24);
  CHECK(ep.envy2 == -33);
  CHECK(ep.envy_free);

  Instance sym;
  sym.resources = {{"a", 5, 5, 0, Cost(0)}, {"b", 5, 5, 0, Cost(0)}};
  const auto es = envy(make_plan(sym, {}, make_set({0}), make_set({1})), sym);
  CHECK(es.envy1 == 0);
  CHECK(es.envy2 == 0);
  CHECK(es.envy_free);
}

TEST_CASE("pareto filter examples") {
  Instance inst;
  inst.resources = {{"a", 52, 0, 0, Cost(0)}, {"b", 0, 50, 0, Cost(0)}, {"c", 0, 2, 0, Cost(0)}, {"d", 0, 0, 0, Cost(0)}};
  const auto even = make_plan(inst, {}, make_set({0}), make_set({1, 2, 3}));  // (52, 52)
  const auto lower = make_plan(inst, {}, make_set({0, 2}), make_set({1, 3}));  // (52, 50)
  CHECK(pareto_filter({even}, inst) == std::vector<Plan>{even});
  CHECK(pareto_filter({even, lower}, inst) == std::vector<Plan>{even});
  CHECK(pareto_filter({lower, even}, inst) == std::vector<Plan>{even});
  CHECK(pareto_filter({even, even}, inst).size() == 2);
  CHECK(kind_of([&] { pareto_filter({}, inst); }) == ErrorKind::EmptyInput);
}

TEST_CASE("pareto filter matches pairwise dominance on random plans") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = testsupport::random_instance(rng, {.n = 5, .total = 30});
    std::vector<Plan> plans;
    std::uniform_int_distribution<int> pick(0, 2);
    for (int k = 0; k < 12; ++k) {
      ResourceSet s[3];
      for (std::size_t i = 0; i < inst.size(); ++i) s[pick(rng)].push_back(i);
      plans.push_back(make_plan(inst, s[0], s[1], s[2]));
    }
    const auto kept = pareto_filter(plans, inst);
    std::vector<Plan> expected;
    for (const auto& a : plans) {
      const auto wa = welfare(a, inst);
      bool dominated = false;
      for (const auto& b : plans) {
        const auto wb = welfare(b, inst);
        if (wb.w1 >= wa.w1 && wb.w2 >= wa.w2 && (wb.w1 > wa.w1 || wb.w2 > wa.w2)) dominated = true;
      }
      if (!dominated) expected.push_back(a);
    }
    CHECK(kept.size() == expected.size());
    for (const auto& e : expected) CHECK(std::find(kept.begin(), kept.end(), e) != kept.end());
  }
}

TEST_CASE("welfare agrees with an independent evaluation on random tripartitions") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = testsupport::random_instance(rng, {.n = 6, .total = 60});
    std::uniform_int_distribution<int> pick(0, 2);
    ResourceSet s[3];
    for (std::size_t i = 0; i < inst.size(); ++i) s[pick(rng)].push_back(i);
    const auto plan = make_plan(inst, s[0], s[1], s[2]);
    const auto w = welfare(plan, inst);
    const auto ref = oracle::evaluate(inst, sides_of(plan, inst.size()));
    CHECK(w.w1 == ref.w1);
    CHECK(w.w2 == ref.w2);
    CHECK(plan.q == ref.q);
    CHECK(w.feasible == ref.feasible);
    CHECK(w.budget_ok == ref.affordable);

    // Conservation of total value.
    CHECK(w.w1 + w.w2 == sum_u1(inst, s[1]) + sum_u2(inst, s[2]) + sum_price(inst, s[0]));
    // Denominator divides 2 p(S0).
    const std::int64_t p = sum_price(inst, s[0]);
    if (p > 0) CHECK((mpz_class(2 * p) % plan.q.get_den()) == 0);
    // Mirror with pinned 1 - q negates the envy of the mirror.
    const auto mirror = make_pinned_plan(inst, s[0], s[2], s[1], 1 - plan.q);
    const auto e = envy(plan, inst), em = envy(mirror, inst);
    CHECK(em.envy1 == -e.envy1);
    CHECK(em.envy2 == -e.envy2);
    // d = 0 iff rho = 1 on feasible plans.
    if (w.feasible) CHECK((w.d == 0) == (w.rho == ExtRational(Rational(1))));
  }
}

TEST_CASE("json round trips") {
  const auto alex = fixture("alex_belle");
  CHECK(instance_from_json(instance_to_json(alex)).resources.size() == alex.size());
  const auto uneq = fixture("unequal_totals");
  const auto back = instance_from_json(instance_to_json(uneq));
  CHECK(back.resources[1].cost.is_unsellable());

  nlohmann::json doc = instance_to_json(alex);
  doc["budget"] = "inf";
  CHECK(instance_from_json(doc).budget.is_unlimited());
  CHECK(instance_to_json(instance_from_json(doc))["budget"] == "inf");

  const auto plan = make_plan(alex, make_set({0}), make_set({1, 2, 3, 4}), make_set({5}));
  const auto json = plan_to_json(plan, alex);
  CHECK(json["q"] == "4/25");
  CHECK(json["s0"] == nlohmann::json::array({"r1"}));
  CHECK(plan_from_json(json, alex).q_pinned);
  nlohmann::json derived = json;
  derived.erase("q");
  CHECK(plan_from_json(derived, alex) == plan);
  CHECK(kind_of([] { instance_from_json(nlohmann::json::parse(R"({"resources": 3})")); }) == ErrorKind::ParseError);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/10") == q(1, 10));
  CHECK(parse_rational("0.1") == q(1, 10));
  CHECK(parse_rational("1e-2") == q(1, 100));
  CHECK(parse_rational(" 3 ") == 3);
  CHECK(to_fraction_string(q(4, 1)) == "4/1");
  CHECK(ExtRational::infinity().to_string() == "inf");
  CHECK(kind_of([] { parse_rational("1/0"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_rational("abc"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse_rational(""); }) == ErrorKind::ParseError);
}
