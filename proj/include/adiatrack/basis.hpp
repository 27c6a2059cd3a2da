#pragma once

#include <cstdint>
#include <vector>

namespace adiatrack {

// One occupation configuration of a fixed-(n_up, n_down) sector. Bit b of a
// mask is the occupation of site b+1 (sites are numbered 1..N).
struct SectorConfig {
  std::uint32_t up;
  std::uint32_t down;
};

// Enumerates all n_bits-wide masks with exactly n_set bits, ascending.
std::vector<std::uint32_t> masks_with_popcount(int n_bits, int n_set);

// Occupation-number basis of the (n_up, n_down) sector of an N-site chain.
//
// Configurations are the product of the up-mask list and the down-mask list,
// each ascending, ordered lexicographically on (up, down):
//   index(iu, id) = iu * n_down_states + id.
// Fermionic mode order is all up modes (site 1..N) before all down modes;
// Jordan-Wigner signs downstream are defined against that order.
class SectorBasis {
 public:
  SectorBasis(int n_sites, int n_up, int n_down);

  int n_sites() const { return n_sites_; }
  int n_up() const { return n_up_; }
  int n_down() const { return n_down_; }
  int n_particles() const { return n_up_ + n_down_; }
  long dim() const { return static_cast<long>(up_masks_.size()) * down_masks_.size(); }

  const std::vector<std::uint32_t>& up_masks() const { return up_masks_; }
  const std::vector<std::uint32_t>& down_masks() const { return down_masks_; }

  SectorConfig config(long index) const;

  // Species-local positions of a mask inside the ascending mask lists.
  // Returns -1 for a mask outside the sector.
  int up_index(std::uint32_t mask) const { return up_lookup_[mask]; }
  int down_index(std::uint32_t mask) const { return down_lookup_[mask]; }

  long index_of(std::uint32_t up, std::uint32_t down) const;

 private:
  int n_sites_;
  int n_up_;
  int n_down_;
  std::vector<std::uint32_t> up_masks_;
  std::vector<std::uint32_t> down_masks_;
  std::vector<int> up_lookup_;    // size 1 << n_sites
  std::vector<int> down_lookup_;
};

}  // namespace adiatrack
