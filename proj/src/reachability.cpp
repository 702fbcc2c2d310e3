#include "islanding/reachability.hpp"

#include <bit>

namespace islanding {

BoolMatrix::BoolMatrix(std::size_t n)
    : n_(n), stride_((n + 63) / 64), words_(n * ((n + 63) / 64), 0) {}

BoolMatrix BoolMatrix::identity(std::size_t n) {
  BoolMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i);
  return m;
}

void BoolMatrix::set(std::size_t i, std::size_t j, bool value) {
  auto& word = words_[i * stride_ + j / 64];
  const std::uint64_t bit = std::uint64_t{1} << (j % 64);
  word = value ? (word | bit) : (word & ~bit);
}

bool BoolMatrix::symmetric() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (get(i, j) != get(j, i)) return false;
  return true;
}

BoolMatrix BoolMatrix::operator*(const BoolMatrix& rhs) const {
  BoolMatrix out(n_);
  // Row i of the product is the OR of rhs rows k over every set (i, k).
  for (std::size_t i = 0; i < n_; ++i) {
    std::uint64_t* dst = &out.words_[i * stride_];
    for (std::size_t w = 0; w < stride_; ++w) {
      std::uint64_t bits = words_[i * stride_ + w];
      while (bits) {
        const std::size_t k = w * 64 + std::countr_zero(bits);
        bits &= bits - 1;
        const std::uint64_t* src = &rhs.words_[k * stride_];
        for (std::size_t c = 0; c < stride_; ++c) dst[c] |= src[c];
      }
    }
  }
  return out;
}

BoolMatrix BoolMatrix::operator|(const BoolMatrix& rhs) const {
  BoolMatrix out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] |= rhs.words_[i];
  return out;
}

std::string BoolMatrix::to_text() const {
  std::string out;
  out.reserve(n_ * n_ * 2);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (j) out += ' ';
      out += get(i, j) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

BoolMatrix adjacency_matrix(const Network& net) {
  BoolMatrix a(net.size());
  for (const Branch& br : net.branches()) {
    if (!br.closed()) continue;
    a.set(br.from - 1, br.to - 1);
    a.set(br.to - 1, br.from - 1);
  }
  return a;
}

BoolMatrix reachability_matrix(const BoolMatrix& adjacency) {
  const std::size_t n = adjacency.size();
  if (n == 0) return adjacency;
  // (A | I)^m covers walk lengths 0..m; the final product shifts that to
  // 1..m + 1, and no pair first becomes reachable beyond length n.
  BoolMatrix closure = adjacency | BoolMatrix::identity(n);
  for (std::size_t covered = 1; covered + 1 < n; covered *= 2)
    closure = closure * closure;
  return adjacency * closure;
}

std::vector<ReachableRegion> regions(const Network& net) {
  const std::size_t n = net.size();
  const BoolMatrix reach = reachability_matrix(adjacency_matrix(net));
  std::vector<bool> assigned(n, false);
  std::vector<ReachableRegion> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    ReachableRegion region;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || reach.get(i, j)) {
        region.members.push_back(static_cast<BusId>(j + 1));
        assigned[j] = true;
      }
    }
    for (BusId m : region.members)
      if (m == net.slack_bus()) region.contains_slack = true;
    for (const auto& dg : net.dgs()) {
      if (reach.get(i, dg.bus - 1) || dg.bus == static_cast<BusId>(i + 1))
        region.dgs.push_back(dg.id);
    }
    out.push_back(std::move(region));
  }
  return out;
}

std::vector<ReachableRegion> islanding_candidates(const Network& net) {
  std::vector<ReachableRegion> out;
  for (auto& r : regions(net))
    if (!r.contains_slack && !r.dgs.empty()) out.push_back(std::move(r));
  return out;
}

}  // namespace islanding
