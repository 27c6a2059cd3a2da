#include "adiatrack/basis.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace adiatrack {

std::vector<std::uint32_t> masks_with_popcount(int n_bits, int n_set) {
  std::vector<std::uint32_t> masks;
  const std::uint32_t limit = std::uint32_t{1} << n_bits;
  for (std::uint32_t m = 0; m < limit; ++m) {
    if (std::popcount(m) == n_set) masks.push_back(m);
  }
  return masks;
}

SectorBasis::SectorBasis(int n_sites, int n_up, int n_down)
    : n_sites_(n_sites), n_up_(n_up), n_down_(n_down) {
  if (n_sites < 1 || n_sites > 16) {
    throw std::domain_error("SectorBasis: n_sites must be in [1, 16], got " +
                            std::to_string(n_sites));
  }
  if (n_up < 0 || n_up > n_sites || n_down < 0 || n_down > n_sites) {
    throw std::domain_error("SectorBasis: occupations (" + std::to_string(n_up) + ", " +
                            std::to_string(n_down) + ") invalid for " +
                            std::to_string(n_sites) + " sites");
  }
  up_masks_ = masks_with_popcount(n_sites, n_up);
  down_masks_ = masks_with_popcount(n_sites, n_down);

  up_lookup_.assign(std::size_t{1} << n_sites, -1);
  down_lookup_.assign(std::size_t{1} << n_sites, -1);
  for (std::size_t i = 0; i < up_masks_.size(); ++i) up_lookup_[up_masks_[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < down_masks_.size(); ++i)
    down_lookup_[down_masks_[i]] = static_cast<int>(i);
}

SectorConfig SectorBasis::config(long index) const {
  const long dd = static_cast<long>(down_masks_.size());
  return {up_masks_[static_cast<std::size_t>(index / dd)],
          down_masks_[static_cast<std::size_t>(index % dd)]};
}

long SectorBasis::index_of(std::uint32_t up, std::uint32_t down) const {
  const int iu = up_lookup_[up];
  const int id = down_lookup_[down];
  if (iu < 0 || id < 0) return -1;
  return static_cast<long>(iu) * static_cast<long>(down_masks_.size()) + id;
}

}  // namespace adiatrack
