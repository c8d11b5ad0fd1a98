#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "wavelet/bitvec.hpp"

namespace wavelet {

class WorkerPool;

inline constexpr std::uint32_t kL1Bits = 65536;

struct RankSelectParams {
  std::uint32_t l2_bits = 512;
  std::uint32_t sample_rate = 16384;

  /// Parameters used for the per-level structures of a wavelet tree.
  static constexpr RankSelectParams for_wavelet_tree() noexcept { return {512, 4096}; }

  /// Throws Error(construction) unless l2_bits is a multiple of 64 dividing
  /// 65536 and sample_rate >= 1.
  void validate() const;

  friend bool operator==(RankSelectParams const&, RankSelectParams const&) = default;
};

/// Two-level cumulative popcount directory plus sampled one/zero positions
/// over one bit region. The structure does not own the bits; every query
/// takes the region it was built for.
class RankSelectIndex {
 public:
  RankSelectIndex() = default;

  /// Builds the directory for `bits`. The result is a pure function of the
  /// bits and the parameters, whatever the pool size.
  static RankSelectIndex build(BitRegion bits, RankSelectParams params, WorkerPool& pool);
  static RankSelectIndex build(BitRegion bits, RankSelectParams params = {});

  /// Ones in [0, i). Throws Error(index_out_of_range) if i > num_bits().
  std::uint64_t rank1(BitRegion bits, std::uint64_t i) const;
  std::uint64_t rank0(BitRegion bits, std::uint64_t i) const { return i - rank1(bits, i); }

  /// rank1(i) together with bit i, read from the same word; needs i < num_bits().
  std::pair<std::uint64_t, bool> rank1_with_bit(BitRegion bits, std::uint64_t i) const;

  /// Position of the k-th one (k >= 1). Throws Error(ordinal_out_of_range).
  std::uint64_t select1(BitRegion bits, std::uint64_t k) const;
  std::uint64_t select0(BitRegion bits, std::uint64_t k) const;

  std::uint64_t num_bits() const noexcept { return num_bits_; }
  std::uint64_t total_ones() const noexcept { return total_ones_; }
  std::uint64_t total_zeros() const noexcept { return num_bits_ - total_ones_; }
  RankSelectParams const& params() const noexcept { return params_; }

  std::vector<std::uint64_t> const& l1_counts() const noexcept { return l1_; }
  std::vector<std::uint16_t> const& l2_counts() const noexcept { return l2_; }
  std::vector<std::uint64_t> const& one_samples() const noexcept { return one_samples_; }
  std::vector<std::uint64_t> const& zero_samples() const noexcept { return zero_samples_; }

  /// Directory sizes in bits as laid out in the index file.
  std::uint64_t rank_bits() const noexcept { return l1_.size() * 64 + l2_.size() * 16; }
  std::uint64_t select_bits() const noexcept {
    return (one_samples_.size() + zero_samples_.size()) * 64;
  }

  /// Reassembles a deserialized index; checks it is consistent with `bits`.
  static RankSelectIndex from_parts(BitRegion bits, RankSelectParams params,
                                    std::uint64_t total_ones,
                                    std::vector<std::uint64_t> l1,
                                    std::vector<std::uint16_t> l2,
                                    std::vector<std::uint64_t> one_samples,
                                    std::vector<std::uint64_t> zero_samples);

  friend bool operator==(RankSelectIndex const&, RankSelectIndex const&) = default;

 private:
  template <bool kOnes>
  std::uint64_t select_impl(BitRegion bits, std::uint64_t k, bool use_samples) const;

  std::uint64_t l2_per_l1() const noexcept { return kL1Bits / params_.l2_bits; }

  RankSelectParams params_;
  std::uint64_t num_bits_ = 0;
  std::uint64_t total_ones_ = 0;
  std::vector<std::uint64_t> l1_;  // ones before each L1 block
  std::vector<std::uint16_t> l2_;  // ones from the enclosing L1 start to each L2 block
  std::vector<std::uint64_t> one_samples_;   // [k-1] = position of the (k*rate)-th one
  std::vector<std::uint64_t> zero_samples_;
};

/// Owning bit vector with its rank/select directory, for standalone use.
class RankSelectBitVector {
 public:
  RankSelectBitVector() = default;
  RankSelectBitVector(BitArray bits, RankSelectParams params = {}, std::size_t workers = 1);

  std::uint64_t size() const noexcept { return index_.num_bits(); }
  bool operator[](std::uint64_t j) const { return bits_.get_bit(j); }
  std::uint64_t rank1(std::uint64_t i) const { return index_.rank1(region(), i); }
  std::uint64_t rank0(std::uint64_t i) const { return index_.rank0(region(), i); }
  std::uint64_t select1(std::uint64_t k) const { return index_.select1(region(), k); }
  std::uint64_t select0(std::uint64_t k) const { return index_.select0(region(), k); }

  BitArray const& bits() const noexcept { return bits_; }
  RankSelectIndex const& index() const noexcept { return index_; }

 private:
  BitRegion region() const { return bits_.region(0); }

  BitArray bits_;
  RankSelectIndex index_;
};

}  // namespace wavelet
