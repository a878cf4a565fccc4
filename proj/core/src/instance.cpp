#include "dsirs/instance.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "dsirs/errors.hpp"
#include "dsirs/invariants.hpp"

namespace dsirs {

std::optional<std::size_t> Instance::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < resources.size(); ++i) {
    if (resources[i].name == name) return i;
  }
  return std::nullopt;
}

ResourceSet make_set(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return indices;
}

ResourceSet set_from_names(const Instance& instance, std::span<const std::string> names) {
  std::vector<std::size_t> out;
  out.reserve(names.size());
  for (const auto& name : names) {
    auto idx = instance.index_of(name);
    if (!idx) throw Error(ErrorKind::UnknownResource, "no resource named '" + name + "'");
    out.push_back(*idx);
  }
  return make_set(std::move(out));
}

std::vector<std::string> names_of(const Instance& instance, const ResourceSet& set) {
  std::vector<std::string> out;
  out.reserve(set.size());
  for (auto i : set) out.push_back(instance.resources.at(i).name);
  return out;
}

std::int64_t sum_u1(const Instance& instance, const ResourceSet& set) {
  std::int64_t s = 0;
  for (auto i : set) s += instance.resources[i].u1;
  return s;
}

std::int64_t sum_u2(const Instance& instance, const ResourceSet& set) {
  std::int64_t s = 0;
  for (auto i : set) s += instance.resources[i].u2;
  return s;
}

std::int64_t sum_price(const Instance& instance, const ResourceSet& set) {
  std::int64_t s = 0;
  for (auto i : set) s += instance.resources[i].price;
  return s;
}

std::optional<std::int64_t> sum_cost(const Instance& instance, const ResourceSet& set) {
  std::int64_t s = 0;
  for (auto i : set) {
    const Cost& c = instance.resources[i].cost;
    if (c.is_unsellable()) return std::nullopt;
    s += c.units();
  }
  return s;
}

const Instance& validate_instance(const Instance& instance) {
  std::unordered_set<std::string> seen;
  std::int64_t total1 = 0;
  std::int64_t total2 = 0;
  auto check_value = [](const Resource& r, const char* field, std::int64_t v) {
    if (v < 0) {
      throw Error(ErrorKind::NegativeValue,
                  "resource '" + r.name + "' has negative " + field + " " + std::to_string(v));
    }
    if (v > kMaxValue) {
      throw Error(ErrorKind::ValueOutOfRange, "resource '" + r.name + "' field " + field + " exceeds " +
                                                  std::to_string(kMaxValue));
    }
  };
  for (const auto& r : instance.resources) {
    if (!seen.insert(r.name).second) {
      throw Error(ErrorKind::DuplicateName, "resource name '" + r.name + "' appears more than once");
    }
    check_value(r, "u1", r.u1);
    check_value(r, "u2", r.u2);
    check_value(r, "p", r.price);
    if (!r.cost.is_unsellable()) check_value(r, "c", r.cost.units());
    if (r.price > std::max(r.u1, r.u2)) {
      throw Error(ErrorKind::PriceExceedsMaxUtility,
                  "resource '" + r.name + "' has p = " + std::to_string(r.price) + " > max(u1, u2) = " +
                      std::to_string(std::max(r.u1, r.u2)));
    }
    total1 += r.u1;
    total2 += r.u2;
  }
  if (!instance.budget.is_unlimited()) {
    if (instance.budget.units() < 0) {
      throw Error(ErrorKind::NegativeValue, "budget is negative: " + std::to_string(instance.budget.units()));
    }
    if (instance.budget.units() > kMaxValue) {
      throw Error(ErrorKind::ValueOutOfRange, "budget exceeds " + std::to_string(kMaxValue));
    }
  }
  if (instance.resources.size() > 64) {
    throw Error(ErrorKind::ValueOutOfRange, "at most 64 resources are supported");
  }
  if (total1 != total2) {
    throw Error(ErrorKind::UnequalTotals, "sum of u1 is " + std::to_string(total1) + " but sum of u2 is " +
                                              std::to_string(total2));
  }
  return instance;
}

void require_partition(const Instance& instance, const ResourceSet& s0, const ResourceSet& s1,
                       const ResourceSet& s2) {
  std::vector<int> hits(instance.size(), 0);
  for (const auto* set : {&s0, &s1, &s2}) {
    for (auto i : *set) {
      if (i >= instance.size()) {
        throw Error(ErrorKind::NotAPartition, "resource index " + std::to_string(i) + " out of range");
      }
      ++hits[i];
    }
  }
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i] != 1) {
      throw Error(ErrorKind::NotAPartition, "resource '" + instance.resources[i].name + "' appears " +
                                                std::to_string(hits[i]) + " times across S0, S1, S2");
    }
  }
}

Rational revenue_share(const ResourceSet& s0, const ResourceSet& s1, const ResourceSet& s2,
                       const Instance& instance) {
  require_partition(instance, s0, s1, s2);
  const std::int64_t price = sum_price(instance, s0);
  if (price == 0) return Rational(0);
  Rational q = make_rational(price - sum_u1(instance, s1) + sum_u2(instance, s2), 2 * price);
  if (q < 0) return Rational(0);
  if (q > 1) return Rational(1);
  return q;
}

Plan make_plan(const Instance& instance, ResourceSet s0, ResourceSet s1, ResourceSet s2) {
  Plan plan{make_set(std::move(s0)), make_set(std::move(s1)), make_set(std::move(s2)), Rational(0), false};
  plan.q = revenue_share(plan.s0, plan.s1, plan.s2, instance);
  return plan;
}

Plan make_pinned_plan(const Instance& instance, ResourceSet s0, ResourceSet s1, ResourceSet s2,
                      Rational q) {
  if (q < 0 || q > 1) throw Error(ErrorKind::InvalidArgument, "revenue share must lie in [0, 1]");
  Plan plan{make_set(std::move(s0)), make_set(std::move(s1)), make_set(std::move(s2)), std::move(q), true};
  require_partition(instance, plan.s0, plan.s1, plan.s2);
  return plan;
}

namespace {

struct Welfares {
  Rational w1;
  Rational w2;
};

Welfares raw_welfare(const Instance& instance, const ResourceSet& s0, const ResourceSet& s1,
                     const ResourceSet& s2, const Rational& q) {
  const Rational price(make_rational(sum_price(instance, s0)));
  return {make_rational(sum_u1(instance, s1)) + q * price,
          make_rational(sum_u2(instance, s2)) + (1 - q) * price};
}

}  // namespace

EnvyReport envy(const Plan& plan, const Instance& instance) {
  require_partition(instance, plan.s0, plan.s1, plan.s2);
  const Welfares own = raw_welfare(instance, plan.s0, plan.s1, plan.s2, plan.q);
  const Welfares mirrored = raw_welfare(instance, plan.s0, plan.s2, plan.s1, Rational(1 - plan.q));
  EnvyReport out;
  out.envy1 = mirrored.w1 - own.w1;
  out.envy2 = mirrored.w2 - own.w2;
  out.envy_free = out.envy1 <= 0 && out.envy2 <= 0;
  return out;
}

WelfareReport welfare(const Plan& plan, const Instance& instance) {
  require_partition(instance, plan.s0, plan.s1, plan.s2);
  WelfareReport out;
  Welfares w = raw_welfare(instance, plan.s0, plan.s1, plan.s2, plan.q);
  out.w1 = std::move(w.w1);
  out.w2 = std::move(w.w2);
  out.d = abs(out.w1 - out.w2);
  if (out.w1 > 0 && out.w2 > 0) {
    out.rho = ExtRational(out.w1 >= out.w2 ? Rational(out.w1 / out.w2) : Rational(out.w2 / out.w1));
  } else {
    out.rho = ExtRational::infinity();
  }
  const auto cost = sum_cost(instance, plan.s0);
  out.budget_ok = cost.has_value() && instance.budget.admits(*cost);
  out.feasible = out.w1 > 0 && out.w2 > 0 && out.budget_ok;

  const EnvyReport e = envy(plan, instance);
  out.envy1 = e.envy1;
  out.envy2 = e.envy2;

  if (!out.rho.is_infinite()) {
    detail::record_equitability_check(out.d == 0, out.rho.value() == 1);
  }
  return out;
}

std::vector<Plan> pareto_filter(const std::vector<Plan>& plans, const Instance& instance) {
  if (plans.empty()) throw Error(ErrorKind::EmptyInput, "pareto_filter needs at least one plan");
  struct Scored {
    std::size_t index;
    Rational w1;
    Rational w2;
  };
  std::vector<Scored> scored;
  scored.reserve(plans.size());
  for (std::size_t i = 0; i < plans.size(); ++i) {
    Welfares w = raw_welfare(instance, plans[i].s0, plans[i].s1, plans[i].s2, plans[i].q);
    scored.push_back({i, std::move(w.w1), std::move(w.w2)});
  }
  // Sweep by W1 descending, W2 descending: a plan survives iff its W2 is at
  // least the best W2 among plans with strictly larger W1 (or equal W1 and
  // strictly larger W2), with exact ties kept.
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.w1 != b.w1) return a.w1 > b.w1;
    if (a.w2 != b.w2) return a.w2 > b.w2;
    return a.index < b.index;
  });
  std::vector<bool> keep(plans.size(), false);
  std::optional<Rational> best_w2;
  std::size_t group = 0;
  while (group < scored.size()) {
    std::size_t end = group;
    while (end < scored.size() && scored[end].w1 == scored[group].w1) ++end;
    // Within an equal-W1 group only the top W2 survives (others are dominated).
    const Rational& top = scored[group].w2;
    if (!best_w2 || top > *best_w2) {
      for (std::size_t k = group; k < end && scored[k].w2 == top; ++k) keep[scored[k].index] = true;
      best_w2 = top;
    }
    group = end;
  }
  std::vector<Plan> out;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    if (keep[i]) out.push_back(plans[i]);
  }
  return out;
}

}  // namespace dsirs
