#include "dsirs/knapsack.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dsirs/detail/int128.hpp"
#include "dsirs/errors.hpp"

namespace dsirs {

namespace {

using detail::Int128;

constexpr std::int64_t kNoWeight = std::numeric_limits<std::int64_t>::max();

// eps as num/den with both parts in int64.
std::pair<Int128, Int128> split_eps(const Rational& eps) {
  if (eps <= 0) throw Error(ErrorKind::InvalidArgument, "epsilon must be positive");
  if (!eps.get_num().fits_slong_p() || !eps.get_den().fits_slong_p()) {
    throw Error(ErrorKind::InvalidArgument, "epsilon numerator/denominator too large");
  }
  return {eps.get_num().get_si(), eps.get_den().get_si()};
}

}  // namespace

KnapsackSelection knapsack_fptas(const std::vector<KnapsackItem>& items, std::int64_t capacity,
                                 const Rational& eps) {
  const auto [en, ed] = split_eps(eps);
  if (capacity < 0) throw Error(ErrorKind::InvalidArgument, "negative knapsack capacity");

  std::vector<std::size_t> live;
  std::int64_t vmax = 0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].value < 0 || items[i].weight < 0) {
      throw Error(ErrorKind::InvalidArgument, "negative knapsack value or weight");
    }
    if (items[i].value > 0 && items[i].weight <= capacity) {
      live.push_back(i);
      vmax = std::max(vmax, items[i].value);
    }
  }
  KnapsackSelection out;
  if (live.empty()) return out;

  // K = eps * vmax / n; scaled profit floor(v / K) = floor(v * n * ed / (en * vmax)).
  const Int128 n = static_cast<Int128>(live.size());
  const bool exact = n * ed > en * vmax;
  std::vector<std::int64_t> profit(live.size());
  std::int64_t total = 0;
  for (std::size_t k = 0; k < live.size(); ++k) {
    const std::int64_t v = items[live[k]].value;
    profit[k] = exact ? v : static_cast<std::int64_t>(static_cast<Int128>(v) * n * ed / (en * vmax));
    total += profit[k];
  }
  if (total > (std::int64_t{1} << 26)) {
    throw Error(ErrorKind::InstanceTooLarge, "knapsack profit table too large; raise epsilon");
  }

  // best[p] = least weight reaching scaled profit exactly p
  const std::size_t width = static_cast<std::size_t>(total) + 1;
  std::vector<std::int64_t> best(width, kNoWeight);
  std::vector<std::vector<bool>> took(live.size(), std::vector<bool>(width, false));
  best[0] = 0;
  std::int64_t reach = 0;
  for (std::size_t k = 0; k < live.size(); ++k) {
    const std::int64_t w = items[live[k]].weight;
    const std::int64_t pk = profit[k];
    for (std::int64_t p = reach; p >= 0; --p) {
      if (best[p] == kNoWeight) continue;
      const std::int64_t nw = best[p] + w;
      if (nw <= capacity && nw < best[p + pk]) {
        best[p + pk] = nw;
        took[k][p + pk] = true;
      }
    }
    reach += pk;
  }
  std::int64_t p = reach;
  while (best[p] == kNoWeight) --p;
  for (std::size_t k = live.size(); k-- > 0;) {
    if (took[k][p]) {
      out.items.push_back(live[k]);
      p -= profit[k];
    }
  }
  std::reverse(out.items.begin(), out.items.end());
  for (auto i : out.items) {
    out.value += items[i].value;
    out.weight += items[i].weight;
  }
  return out;
}

O2Result o2_value(const Instance& instance, const ResourceSet& subset, Budget budget, const Rational& eps,
                  O2Valuation valuation) {
  O2Result out;
  std::vector<KnapsackItem> items;
  std::vector<std::size_t> origin;
  for (auto i : subset) {
    const Resource& r = instance.resources[i];
    out.value += r.u2;
    if (r.price <= r.u2 || r.cost.is_unsellable()) continue;
    items.push_back({valuation == O2Valuation::net_gain ? r.price - r.u2 : r.price, r.cost.units()});
    origin.push_back(i);
  }
  const std::int64_t capacity = std::max<std::int64_t>(budget.units(), 0);
  const KnapsackSelection sel = knapsack_fptas(items, capacity, eps);
  out.value += sel.value;
  for (auto k : sel.items) out.sold.push_back(origin[k]);
  out.sold = make_set(std::move(out.sold));
  return out;
}

std::optional<std::size_t> detect_heavy_resource(const Instance& instance, const Rational& eps,
                                                 O2Valuation valuation) {
  // Uniqueness relies on equal totals; instances derived by selling a heavy
  // resource lose that, and there the candidate with the largest u1 wins.
  std::int64_t t1 = 0;
  std::int64_t t2 = 0;
  for (const auto& r : instance.resources) {
    t1 += r.u1;
    t2 += r.u2;
  }
  std::optional<std::size_t> found;
  ResourceSet rest;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const std::int64_t u1 = instance.resources[i].u1;
    if (u1 == 0) continue;
    rest.clear();
    for (std::size_t j = 0; j < instance.size(); ++j) {
      if (j != i) rest.push_back(j);
    }
    const O2Result o2 = o2_value(instance, rest, instance.budget, eps, valuation);
    if (static_cast<Int128>(u1) > 2 * static_cast<Int128>(o2.value)) {
      if (found && t1 == t2) throw std::logic_error("two u1-heavy resources in one instance");
      if (!found || u1 > instance.resources[*found].u1) found = i;
    }
  }
  return found;
}

}  // namespace dsirs
