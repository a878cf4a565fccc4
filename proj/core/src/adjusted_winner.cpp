#include "dsirs/adjusted_winner.hpp"

#include <algorithm>

#include "dsirs/detail/aw_fast.hpp"
#include "dsirs/detail/int128.hpp"
#include "dsirs/errors.hpp"

namespace dsirs {

namespace {

std::int64_t utility(const Resource& r, Agent a) { return a == Agent::one ? r.u1 : r.u2; }

struct Phase1 {
  std::vector<std::size_t> s1;
  std::vector<std::size_t> s2;
  std::int64_t w1 = 0;
  std::int64_t w2 = 0;
};

Phase1 initial_allocation(const Instance& instance, const std::vector<bool>& excluded) {
  Phase1 out;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (excluded[i]) continue;
    const Resource& r = instance.resources[i];
    if (r.u1 > r.u2) {
      out.s1.push_back(i);
      out.w1 += r.u1;
    } else {
      out.s2.push_back(i);
      out.w2 += r.u2;
    }
  }
  return out;
}

}  // namespace

RatioOrder ratio_order(const Instance& instance, const ResourceSet& held, Agent advantaged) {
  RatioOrder out{held, advantaged};
  const Agent b = other(advantaged);
  std::sort(out.order.begin(), out.order.end(), [&](std::size_t x, std::size_t y) {
    const Resource& rx = instance.resources[x];
    const Resource& ry = instance.resources[y];
    const std::int64_t bx = utility(rx, b);
    const std::int64_t by = utility(ry, b);
    if (bx == 0 || by == 0) {
      if ((bx == 0) != (by == 0)) return by == 0;  // finite before +inf
      return x < y;
    }
    const detail::Int128 lhs = static_cast<detail::Int128>(utility(rx, advantaged)) * by;
    const detail::Int128 rhs = static_cast<detail::Int128>(utility(ry, advantaged)) * bx;
    if (lhs != rhs) return lhs < rhs;
    return x < y;
  });
  return out;
}

ClassicAwOutcome classic_aw(const Instance& instance) {
  std::int64_t total1 = 0;
  std::int64_t total2 = 0;
  for (const auto& r : instance.resources) {
    total1 += r.u1;
    total2 += r.u2;
  }
  if (total1 == 0 && total2 == 0) {
    throw Error(ErrorKind::ZeroTotalUtility, "both agents value every resource at zero");
  }

  Phase1 alloc = initial_allocation(instance, std::vector<bool>(instance.size(), false));
  ClassicAwOutcome out;
  if (alloc.w1 != alloc.w2) {
    const Agent a = alloc.w1 > alloc.w2 ? Agent::one : Agent::two;
    const Agent b = other(a);
    auto& held = a == Agent::one ? alloc.s1 : alloc.s2;
    auto& given = a == Agent::one ? alloc.s2 : alloc.s1;
    std::int64_t& wa = a == Agent::one ? alloc.w1 : alloc.w2;
    std::int64_t& wb = a == Agent::one ? alloc.w2 : alloc.w1;

    const RatioOrder order = ratio_order(instance, make_set(held), a);
    for (std::size_t idx : order.order) {
      const Resource& r = instance.resources[idx];
      const std::int64_t after_a = wa - utility(r, a);
      const std::int64_t after_b = wb + utility(r, b);
      if (after_a >= after_b) {
        held.erase(std::find(held.begin(), held.end(), idx));
        given.push_back(idx);
        out.transfers.push_back(idx);
        wa = after_a;
        wb = after_b;
        if (wa == wb) break;
        continue;
      }
      // Keep fraction f of r with the advantaged agent:
      // (wa - u_a) + f u_a = wb + (1 - f) u_b  =>  f = (wb + u_b - wa + u_a) / (u_a + u_b).
      const std::int64_t ua = utility(r, a);
      const std::int64_t ub = utility(r, b);
      held.erase(std::find(held.begin(), held.end(), idx));
      Rational f = make_rational(wb + ub - (wa - ua), ua + ub);
      out.split = Split{idx, a, f};
      const Rational w = make_rational(wa - ua) + f * ua;
      out.s1 = make_set(alloc.s1);
      out.s2 = make_set(alloc.s2);
      out.w1 = w;
      out.w2 = w;
      return out;
    }
  }
  out.s1 = make_set(alloc.s1);
  out.s2 = make_set(alloc.s2);
  out.w1 = make_rational(alloc.w1);
  out.w2 = make_rational(alloc.w2);
  return out;
}

std::string_view to_string(HaltReason reason) {
  switch (reason) {
    case HaltReason::split_guard: return "split-guard";
    case HaltReason::revenue_guard: return "revenue-guard";
    case HaltReason::equality: return "equality";
  }
  return "unknown";
}

AwSubplan aw_subplan(const ResourceSet& s0, const Instance& instance) {
  std::vector<bool> sold(instance.size(), false);
  for (auto i : s0) sold.at(i) = true;
  const std::int64_t revenue = sum_price(instance, s0);

  Phase1 alloc = initial_allocation(instance, sold);
  AwSubplan out;

  auto halt_check = [&]() -> std::optional<HaltReason> {
    const std::int64_t gap = alloc.w1 > alloc.w2 ? alloc.w1 - alloc.w2 : alloc.w2 - alloc.w1;
    if (gap == 0) return HaltReason::equality;
    if (gap <= revenue) return HaltReason::revenue_guard;
    return std::nullopt;
  };

  if (auto h = halt_check()) {
    out.halted_by = *h;
  } else {
    const Agent a = alloc.w1 > alloc.w2 ? Agent::one : Agent::two;
    const Agent b = other(a);
    auto& held = a == Agent::one ? alloc.s1 : alloc.s2;
    auto& given = a == Agent::one ? alloc.s2 : alloc.s1;
    std::int64_t& wa = a == Agent::one ? alloc.w1 : alloc.w2;
    std::int64_t& wb = a == Agent::one ? alloc.w2 : alloc.w1;

    const RatioOrder order = ratio_order(instance, make_set(held), a);
    out.halted_by = HaltReason::split_guard;
    for (std::size_t idx : order.order) {
      const Resource& r = instance.resources[idx];
      const std::int64_t after_a = wa - utility(r, a);
      const std::int64_t after_b = wb + utility(r, b);
      if (after_a < after_b) {
        out.halted_by = HaltReason::split_guard;
        break;
      }
      held.erase(std::find(held.begin(), held.end(), idx));
      given.push_back(idx);
      out.transfers.push_back(idx);
      wa = after_a;
      wb = after_b;
      if (auto h = halt_check()) {
        out.halted_by = *h;
        break;
      }
    }
  }
  out.g1 = make_set(std::move(alloc.s1));
  out.g2 = make_set(std::move(alloc.s2));
  return out;
}

Plan aw_derived_plan(const ResourceSet& s0, const Instance& instance) {
  AwSubplan sub = aw_subplan(s0, instance);
  return make_plan(instance, s0, std::move(sub.g1), std::move(sub.g2));
}

}  // namespace dsirs


namespace dsirs::detail {

AwEvaluator::AwEvaluator(const Instance& instance) : instance_(&instance) {
  ResourceSet held1;
  ResourceSet held2;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (instance.resources[i].u1 > instance.resources[i].u2) {
      phase1_agent1_ |= bit(i);
      held1.push_back(i);
    } else {
      held2.push_back(i);
    }
  }
  order_from1_ = ratio_order(instance, held1, Agent::one).order;
  order_from2_ = ratio_order(instance, held2, Agent::two).order;
}

std::int64_t AwEvaluator::sum_u1(Mask m) const {
  std::int64_t s = 0;
  for (; m; m &= m - 1) s += instance_->resources[std::countr_zero(m)].u1;
  return s;
}

std::int64_t AwEvaluator::sum_u2(Mask m) const {
  std::int64_t s = 0;
  for (; m; m &= m - 1) s += instance_->resources[std::countr_zero(m)].u2;
  return s;
}

std::int64_t AwEvaluator::sum_price(Mask m) const {
  std::int64_t s = 0;
  for (; m; m &= m - 1) s += instance_->resources[std::countr_zero(m)].price;
  return s;
}

AwMasks AwEvaluator::subplan(Mask sold) const {
  const Mask all = instance_->size() == 64 ? ~Mask{0} : (bit(instance_->size()) - 1);
  AwMasks out;
  out.s1 = phase1_agent1_ & ~sold;
  out.s2 = all & ~phase1_agent1_ & ~sold;
  std::int64_t w1 = sum_u1(out.s1);
  std::int64_t w2 = sum_u2(out.s2);
  const std::int64_t revenue = sum_price(sold);

  auto gap = [&] { return w1 > w2 ? w1 - w2 : w2 - w1; };
  if (gap() == 0) {
    out.halted_by = HaltReason::equality;
    return out;
  }
  if (gap() <= revenue) {
    out.halted_by = HaltReason::revenue_guard;
    return out;
  }
  const bool from1 = w1 > w2;
  const auto& order = from1 ? order_from1_ : order_from2_;
  out.halted_by = HaltReason::split_guard;
  for (std::size_t idx : order) {
    if (sold & bit(idx)) continue;
    const Resource& r = instance_->resources[idx];
    const std::int64_t ua = from1 ? r.u1 : r.u2;
    const std::int64_t ub = from1 ? r.u2 : r.u1;
    std::int64_t& wa = from1 ? w1 : w2;
    std::int64_t& wb = from1 ? w2 : w1;
    if (wa - ua < wb + ub) {
      out.halted_by = HaltReason::split_guard;
      break;
    }
    wa -= ua;
    wb += ub;
    if (from1) {
      out.s1 &= ~bit(idx);
      out.s2 |= bit(idx);
    } else {
      out.s2 &= ~bit(idx);
      out.s1 |= bit(idx);
    }
    if (gap() == 0) {
      out.halted_by = HaltReason::equality;
      break;
    }
    if (gap() <= revenue) {
      out.halted_by = HaltReason::revenue_guard;
      break;
    }
  }
  return out;
}

}  // namespace dsirs::detail
