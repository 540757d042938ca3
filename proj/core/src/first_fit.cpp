#include "nibble/first_fit.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace nibble {

Color FirstFitBand::first_free(NodeId u, NodeId v) const {
  const auto& a = used_[u];
  const auto& b = used_[v];
  const std::size_t words = std::max(a.size(), b.size());
  for (std::size_t w = 0; w < words; ++w) {
    const std::uint64_t taken = (w < a.size() ? a[w] : 0) | (w < b.size() ? b[w] : 0);
    if (taken != ~std::uint64_t{0}) {
      return floor_ + 1 + static_cast<Color>(w * 64 + std::countr_one(taken));
    }
  }
  return floor_ + 1 + static_cast<Color>(words * 64);
}

void FirstFitBand::set_bit(NodeId x, std::size_t bit) {
  auto& words = used_[x];
  if (bit / 64 >= words.size()) words.resize(bit / 64 + 1, 0);
  words[bit / 64] |= std::uint64_t{1} << (bit % 64);
}

void FirstFitBand::clear_bit(NodeId x, std::size_t bit) {
  auto& words = used_[x];
  if (bit / 64 < words.size()) words[bit / 64] &= ~(std::uint64_t{1} << (bit % 64));
}

void FirstFitBand::occupy(NodeId u, NodeId v, Color c) {
  assert(c > floor_);
  set_bit(u, c - floor_ - 1);
  set_bit(v, c - floor_ - 1);
}

void FirstFitBand::release(NodeId u, NodeId v, Color c) {
  assert(c > floor_);
  clear_bit(u, c - floor_ - 1);
  clear_bit(v, c - floor_ - 1);
}

bool FirstFitBand::held(NodeId x, Color c) const {
  if (c <= floor_) return false;
  const std::size_t bit = c - floor_ - 1;
  const auto& words = used_[x];
  return bit / 64 < words.size() && ((words[bit / 64] >> (bit % 64)) & 1U);
}

}  // namespace nibble
