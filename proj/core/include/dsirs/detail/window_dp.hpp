#pragma once

// Sparse layered form of the scaled table. A window only decides which of
// the three moves each position may take, so windows are reduced to those
// per-position move patterns: repeated patterns are skipped and layers for a
// shared prefix are reused from the previous window.

#include <cstdint>
#include <set>
#include <vector>

#include "dsirs/detail/aw_fast.hpp"
#include "dsirs/fptas.hpp"

namespace dsirs::detail {

enum : std::uint8_t { kSell = 1, kToOne = 2, kToTwo = 4 };

struct DpState {
  DpKey key;
  std::int64_t cost = 0;
  Mask m0 = 0;
  Mask m1 = 0;
  Mask m2 = 0;
};

class WindowDp {
 public:
  WindowDp(const Instance& instance, const ScaledInstance& scaled, const ResourceSet& a1, Budget budget);

  /// Terminal states of one window, sorted by key.
  const std::vector<DpState>& solve(const TransferWindow& window);

  /// Runs every window of both directions whose move pattern has not been
  /// seen yet and hands each terminal layer to `visit`. Returns the number of
  /// passes run.
  template <class Visit>
  std::uint64_t for_each_distinct_window(Visit&& visit) {
    std::set<std::vector<std::uint8_t>> seen;
    std::uint64_t passes = 0;
    const std::size_t n = order_.size();
    for (auto dir : {TransferDirection::one_to_two, TransferDirection::two_to_one}) {
      for (std::size_t k = 0; k <= n + 1; ++k) {
        const TransferWindow w = dir == TransferDirection::one_to_two ? TransferWindow{k, n + 1, dir}
                                                                      : TransferWindow{0, k, dir};
        if (!seen.insert(pattern(w)).second) continue;
        ++passes;
        visit(solve(w));
      }
    }
    return passes;
  }

  const std::vector<std::size_t>& order() const { return order_; }

 private:
  std::vector<std::uint8_t> pattern(const TransferWindow& window) const;
  void extend(const std::vector<DpState>& from, std::size_t position, std::uint8_t moves,
              std::vector<DpState>& to) const;

  const Instance* instance_;
  const ScaledInstance* scaled_;
  Budget budget_;
  std::vector<std::size_t> order_;
  std::vector<bool> in_a1_;             // by position
  std::vector<std::uint8_t> possible_;  // moves allowed by the guess and budget, by position
  std::vector<std::uint8_t> cached_;    // pattern the layers below were built for
  std::vector<std::vector<DpState>> layers_;
};

}  // namespace dsirs::detail
