#include <algorithm>
#include <set>

#include "dsirs/detail/int128.hpp"
#include "dsirs/detail/window_dp.hpp"
#include "dsirs/errors.hpp"
#include "dsirs/fptas.hpp"

namespace dsirs {

using detail::Int128;
using detail::Mask;

ResourceClasses classify_resources(const Instance& instance) {
  ResourceClasses out;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const Resource& r = instance.resources[i];
    (r.u1 == r.u2 ? out.r0 : (r.u1 > r.u2 ? out.r1 : out.r2)).push_back(i);
  }
  return out;
}

Instance swap_agents(const Instance& instance) {
  Instance out = instance;
  for (auto& r : out.resources) std::swap(r.u1, r.u2);
  return out;
}

std::vector<RoleAssignment> partition_roles(const Instance& instance) {
  std::vector<RoleAssignment> out;
  for (bool swapped : {false, true}) {
    const ResourceClasses cls = classify_resources(swapped ? swap_agents(instance) : instance);
    for (bool r0_in_a1 : {false, true}) {
      RoleAssignment role;
      role.swapped = swapped;
      role.r0_in_a1 = r0_in_a1;
      role.a1 = cls.r1;
      role.a2 = cls.r2;
      auto& joins = r0_in_a1 ? role.a1 : role.a2;
      joins.insert(joins.end(), cls.r0.begin(), cls.r0.end());
      role.a1 = make_set(std::move(role.a1));
      role.a2 = make_set(std::move(role.a2));
      out.push_back(std::move(role));
    }
  }
  return out;
}

std::vector<std::size_t> ratio_descending_order(const Instance& instance) {
  std::vector<std::size_t> order(instance.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto ratio = [&](std::size_t i) -> std::pair<std::int64_t, std::int64_t> {
    const Resource& r = instance.resources[i];
    if (r.u1 == 0 && r.u2 == 0) return {1, 1};
    return {r.u1, r.u2};
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto [an, ad] = ratio(a);
    const auto [bn, bd] = ratio(b);
    // an/ad > bn/bd, with x/0 as +inf
    if (ad == 0 || bd == 0) return ad == 0 && bd != 0;
    return static_cast<Int128>(an) * bd > static_cast<Int128>(bn) * ad;
  });
  return order;
}

namespace {

struct EpsParts {
  Int128 num;  // eps = num / den
  Int128 den;
};

EpsParts eps_parts(const Rational& eps) {
  if (eps <= 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  const mpz_class limit = mpz_class(1) << 62;
  if (eps.get_num() > limit || eps.get_den() > limit) {
    throw Error(ErrorKind::InvalidArgument, "epsilon numerator/denominator exceed 2^62");
  }
  return {eps.get_num().get_si(), eps.get_den().get_si()};
}

Int128 ceil_div(Int128 a, Int128 b) { return (a + b - 1) / b; }

}  // namespace

std::int64_t ScaledInstance::value_bound() const {
  const auto n = static_cast<std::int64_t>(u1_scaled.size());
  Rational x = Rational(2 * n) / eps_prime;
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return c.get_si() + 1;
}

ScaledInstance scale_instance(const Instance& instance, const Guess& guess, const Rational& eps) {
  const EpsParts e = eps_parts(eps);
  const std::size_t n = instance.size();
  for (const auto& j : {guess.j0, guess.j1, guess.j2}) {
    if (j && *j >= n) throw Error(ErrorKind::BadGuess, "guess index " + std::to_string(*j) + " out of range");
  }
  const std::int64_t t0 = guess.j0 ? instance.resources[*guess.j0].price : -1;
  const std::int64_t t1 = guess.j1 ? instance.resources[*guess.j1].u1 : -1;
  const std::int64_t t2 = guess.j2 ? instance.resources[*guess.j2].u2 : -1;
  const std::int64_t top = std::max({t0, t1, t2});
  if (top <= 0) throw Error(ErrorKind::BadGuess, "guess has no positive maximum");

  ScaledInstance out;
  out.guess = guess;
  out.m_max = (top + 1) / 2;
  out.eps_prime = eps / (eps + 2);
  out.k_param = out.eps_prime * Rational(out.m_max) / Rational(static_cast<long>(n));
  out.k_param.canonicalize();

  // v / K = v * n * (num + 2 den) / (num * m_max)
  const Int128 scale_num = static_cast<Int128>(n) * (e.num + 2 * e.den);
  const Int128 scale_den = e.num * out.m_max;
  auto up = [&](std::int64_t v) { return static_cast<std::int64_t>(ceil_div(v * scale_num, scale_den)); };
  auto down = [&](std::int64_t v) { return static_cast<std::int64_t>(v * scale_num / scale_den); };

  out.u1_scaled.resize(n);
  out.u2_scaled.resize(n);
  out.p_scaled_down.resize(n);
  out.p_scaled_up.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Resource& r = instance.resources[i];
    out.u1_scaled[i] = r.u1 <= t1 ? up(r.u1) : kScaledPlusInf;
    out.u2_scaled[i] = r.u2 <= t2 ? down(r.u2) : kScaledMinusInf;
    const bool priced = r.price <= t0;
    out.p_scaled_down[i] = priced ? down(r.price) : kScaledMinusInf;
    out.p_scaled_up[i] = priced ? up(r.price) : kScaledPlusInf;
  }
  return out;
}

std::vector<Guess> enumerate_guesses(const Instance& instance, bool exhaustive) {
  const std::size_t n = instance.size();
  std::vector<Guess> out;
  if (exhaustive) {
    std::vector<std::optional<std::size_t>> choices{std::nullopt};
    for (std::size_t i = 0; i < n; ++i) choices.emplace_back(i);
    for (const auto& j0 : choices) {
      for (const auto& j1 : choices) {
        for (const auto& j2 : choices) {
          const std::int64_t top = std::max({j0 ? instance.resources[*j0].price : 0,
                                             j1 ? instance.resources[*j1].u1 : 0,
                                             j2 ? instance.resources[*j2].u2 : 0});
          if (top > 0) out.push_back({j0, j1, j2});
        }
      }
    }
    return out;
  }

  std::set<std::int64_t> halves;
  for (const auto& r : instance.resources) {
    for (std::int64_t v : {r.u1, r.u2, r.price}) {
      if (v > 0) halves.insert((v + 1) / 2);
    }
  }
  auto pick = [&](std::int64_t cap, auto field) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t v = field(instance.resources[i]);
      if (v <= cap && (!best || v > field(instance.resources[*best]))) best = i;
    }
    return best;
  };
  for (std::int64_t m : halves) {
    out.push_back({pick(2 * m, [](const Resource& r) { return r.price; }),
                   pick(2 * m, [](const Resource& r) { return r.u1; }),
                   pick(2 * m, [](const Resource& r) { return r.u2; })});
  }
  return out;
}

namespace detail {

WindowDp::WindowDp(const Instance& instance, const ScaledInstance& scaled, const ResourceSet& a1, Budget budget)
    : instance_(&instance), scaled_(&scaled), budget_(budget), order_(ratio_descending_order(instance)) {
  const std::size_t n = order_.size();
  if (n > 64) throw Error(ErrorKind::InstanceTooLarge, "the scaled table supports at most 64 resources");
  std::vector<bool> member(n, false);
  for (auto i : a1) member[i] = true;
  in_a1_.resize(n);
  possible_.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = order_[t];
    const Resource& r = instance.resources[i];
    in_a1_[t] = member[i];
    std::uint8_t moves = 0;
    if (scaled.p_scaled_down[i] != kScaledMinusInf && !r.cost.is_unsellable() && budget.admits(r.cost.units())) {
      moves |= kSell;
    }
    if (scaled.u1_scaled[i] != kScaledPlusInf) moves |= kToOne;
    if (scaled.u2_scaled[i] != kScaledMinusInf) moves |= kToTwo;
    possible_[t] = moves;
  }
  layers_.assign(1, std::vector<DpState>{DpState{}});
}

std::vector<std::uint8_t> WindowDp::pattern(const TransferWindow& w) const {
  const std::size_t n = order_.size();
  std::vector<std::uint8_t> out(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t pos = t + 1;
    const bool a1 = in_a1_[t];
    bool to1 = false;
    bool to2 = false;
    if (w.direction == TransferDirection::one_to_two) {
      to1 = a1 && pos <= w.i_left;
      to2 = !a1 || pos >= w.i_left;
    } else {
      to1 = a1 || pos <= w.i_right;
      to2 = !a1 && pos >= w.i_right;
    }
    out[t] = static_cast<std::uint8_t>(possible_[t] & (kSell | (to1 ? kToOne : 0) | (to2 ? kToTwo : 0)));
  }
  return out;
}

void WindowDp::extend(const std::vector<DpState>& from, std::size_t t, std::uint8_t moves,
                      std::vector<DpState>& to) const {
  to.clear();
  const std::size_t i = order_[t];
  const Mask b = bit(i);
  const std::int64_t c = instance_->resources[i].cost.units();
  for (const DpState& s : from) {
    if (moves & kSell) {
      if (budget_.admits(s.cost + c)) {
        DpState x = s;
        x.key.o += 1;
        x.key.sp += scaled_->p_scaled_down[i];
        x.cost += c;
        x.m0 |= b;
        to.push_back(x);
      }
    }
    if (moves & kToOne) {
      DpState x = s;
      x.key.su1 += scaled_->u1_scaled[i];
      x.m1 |= b;
      to.push_back(x);
    }
    if (moves & kToTwo) {
      DpState x = s;
      x.key.su2 += scaled_->u2_scaled[i];
      x.m2 |= b;
      to.push_back(x);
    }
  }
  // keep the cheapest state per key; equal costs go to the smallest masks
  std::sort(to.begin(), to.end(), [](const DpState& a, const DpState& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.m0 != b.m0) return a.m0 < b.m0;
    if (a.m1 != b.m1) return a.m1 < b.m1;
    return a.m2 < b.m2;
  });
  to.erase(std::unique(to.begin(), to.end(), [](const DpState& a, const DpState& b) { return a.key == b.key; }),
           to.end());
}

const std::vector<DpState>& WindowDp::solve(const TransferWindow& window) {
  const std::vector<std::uint8_t> want = pattern(window);
  const std::size_t n = order_.size();
  std::size_t keep = 0;  // layers_[0..keep] are valid for `want`
  if (!cached_.empty() || n == 0) {
    while (keep < n && keep < cached_.size() && cached_[keep] == want[keep]) ++keep;
  }
  keep = std::min(keep, layers_.size() - 1);
  layers_.resize(n + 1);
  for (std::size_t t = keep; t < n; ++t) extend(layers_[t], t, want[t], layers_[t + 1]);
  cached_ = want;
  return layers_[n];
}

}  // namespace detail

std::vector<std::pair<DpKey, DpEntry>> dp_solve(const Instance& instance, const ScaledInstance& scaled,
                                                const ResourceSet& a1, const TransferWindow& window,
                                                Budget budget) {
  detail::WindowDp dp(instance, scaled, a1, budget);
  std::vector<std::pair<DpKey, DpEntry>> out;
  for (const auto& s : dp.solve(window)) {
    out.push_back({s.key, DpEntry{detail::set_from_mask(s.m0), detail::set_from_mask(s.m1),
                                  detail::set_from_mask(s.m2), s.cost}});
  }
  return out;
}

}  // namespace dsirs
