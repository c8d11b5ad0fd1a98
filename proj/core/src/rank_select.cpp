#include "wavelet/rank_select.hpp"

#include <algorithm>
#include <string>

#include "wavelet/error.hpp"
#include "wavelet/worker_pool.hpp"

namespace wavelet {

void RankSelectParams::validate() const {
  if (l2_bits < kWordBits || l2_bits % kWordBits != 0 || kL1Bits % l2_bits != 0) {
    throw Error(ErrorCode::construction,
                "l2_bits must be a multiple of 64 that divides 65536, got " + std::to_string(l2_bits));
  }
  if (sample_rate == 0) {
    throw Error(ErrorCode::construction, "sample_rate must be positive");
  }
}

RankSelectIndex RankSelectIndex::build(BitRegion bits, RankSelectParams params) {
  WorkerPool pool(1);
  return build(bits, params, pool);
}

RankSelectIndex RankSelectIndex::build(BitRegion bits, RankSelectParams params, WorkerPool& pool) {
  params.validate();
  RankSelectIndex idx;
  idx.params_ = params;
  idx.num_bits_ = bits.num_bits;

  std::uint64_t const n = bits.num_bits;
  std::uint64_t const num_l1 = (n + kL1Bits - 1) / kL1Bits;
  std::uint64_t const num_l2 = (n + params.l2_bits - 1) / params.l2_bits;
  std::uint64_t const per_l1 = idx.l2_per_l1();
  std::uint64_t const words_per_l2 = params.l2_bits / kWordBits;
  std::uint64_t const num_words = bits.words.size();

  idx.l1_.assign(num_l1, 0);
  idx.l2_.assign(num_l2, 0);

  // Phase 1: per L1 block, L2 popcounts and their in-block exclusive prefix sum.
  // The block total is parked in l1_ until phase 2.
  pool.parallel_for(num_l1, 1, [&](std::size_t first, std::size_t last) {
    for (std::size_t b = first; b < last; ++b) {
      std::uint64_t const l2_begin = b * per_l1;
      std::uint64_t const l2_end = std::min(l2_begin + per_l1, num_l2);
      std::uint64_t running = 0;
      for (std::uint64_t j = l2_begin; j < l2_end; ++j) {
        idx.l2_[j] = static_cast<std::uint16_t>(running);
        std::uint64_t const w_begin = j * words_per_l2;
        std::uint64_t const w_end = std::min(w_begin + words_per_l2, num_words);
        for (std::uint64_t w = w_begin; w < w_end; ++w) running += popcount(bits.words[w]);
      }
      idx.l1_[b] = running;
    }
  });

  // Phase 2: exclusive prefix sum over the block totals.
  std::uint64_t total = 0;
  for (auto& c : idx.l1_) {
    std::uint64_t const block = c;
    c = total;
    total += block;
  }
  idx.total_ones_ = total;

  // Select samples, located without the samples themselves.
  std::uint64_t const rate = params.sample_rate;
  idx.one_samples_.assign(idx.total_ones() / rate, 0);
  idx.zero_samples_.assign(idx.total_zeros() / rate, 0);
  pool.parallel_for(idx.one_samples_.size(), 1024, [&](std::size_t first, std::size_t last) {
    for (std::size_t s = first; s < last; ++s) {
      idx.one_samples_[s] = idx.select_impl<true>(bits, (s + 1) * rate, false);
    }
  });
  pool.parallel_for(idx.zero_samples_.size(), 1024, [&](std::size_t first, std::size_t last) {
    for (std::size_t s = first; s < last; ++s) {
      idx.zero_samples_[s] = idx.select_impl<false>(bits, (s + 1) * rate, false);
    }
  });
  return idx;
}

std::uint64_t RankSelectIndex::rank1(BitRegion bits, std::uint64_t i) const {
  if (i >= num_bits_) {
    if (i == num_bits_) return total_ones_;
    throw Error(ErrorCode::index_out_of_range,
                "rank position " + std::to_string(i) + " > " + std::to_string(num_bits_));
  }
  std::uint64_t const l2_index = i / params_.l2_bits;
  std::uint64_t result = l1_[i / kL1Bits] + l2_[l2_index];
  std::uint64_t const end_word = i / kWordBits;
  for (std::uint64_t w = l2_index * params_.l2_bits / kWordBits; w < end_word; ++w) {
    result += popcount(bits.words[w]);
  }
  return result + popcount(partial_word(bits.words[end_word], i % kWordBits));
}

std::pair<std::uint64_t, bool> RankSelectIndex::rank1_with_bit(BitRegion bits, std::uint64_t i) const {
  if (i >= num_bits_) {
    throw Error(ErrorCode::index_out_of_range,
                "bit " + std::to_string(i) + " >= " + std::to_string(num_bits_));
  }
  std::uint64_t const l2_index = i / params_.l2_bits;
  std::uint64_t result = l1_[i / kL1Bits] + l2_[l2_index];
  std::uint64_t const end_word = i / kWordBits;
  for (std::uint64_t w = l2_index * params_.l2_bits / kWordBits; w < end_word; ++w) {
    result += popcount(bits.words[w]);
  }
  Word const last = bits.words[end_word];
  unsigned const offset = i % kWordBits;
  return {result + popcount(partial_word(last, offset)), ((last >> offset) & 1U) != 0};
}

std::uint64_t RankSelectIndex::select1(BitRegion bits, std::uint64_t k) const {
  return select_impl<true>(bits, k, true);
}

std::uint64_t RankSelectIndex::select0(BitRegion bits, std::uint64_t k) const {
  return select_impl<false>(bits, k, true);
}

template <bool kOnes>
std::uint64_t RankSelectIndex::select_impl(BitRegion bits, std::uint64_t k, bool use_samples) const {
  std::uint64_t const total = kOnes ? total_ones() : total_zeros();
  if (k == 0 || k > total) {
    throw Error(ErrorCode::ordinal_out_of_range,
                std::string(kOnes ? "select1(" : "select0(") + std::to_string(k) +
                    ") with " + std::to_string(total) + " candidates");
  }
  auto before_l1 = [&](std::uint64_t b) -> std::uint64_t {
    return kOnes ? l1_[b] : b * kL1Bits - l1_[b];
  };
  std::uint64_t const per_l1 = l2_per_l1();
  auto before_l2 = [&](std::uint64_t b, std::uint64_t j) -> std::uint64_t {
    return kOnes ? l2_[j] : (j - b * per_l1) * params_.l2_bits - l2_[j];
  };

  // L1 window [lo, hi), narrowed by the samples around k when available.
  std::uint64_t lo = 0;
  std::uint64_t hi = l1_.size();
  if (use_samples) {
    auto const& samples = kOnes ? one_samples_ : zero_samples_;
    std::uint64_t const s = k / params_.sample_rate;
    if (s >= 1) lo = samples[s - 1] / kL1Bits;
    if (s < samples.size()) hi = std::min<std::uint64_t>(hi, samples[s] / kL1Bits + 1);
  }
  // Last block whose preceding count is < k.
  while (hi - lo > 1) {
    std::uint64_t const mid = lo + (hi - lo) / 2;
    if (before_l1(mid) < k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  std::uint64_t const block = lo;
  k -= before_l1(block);

  std::uint64_t l2_lo = block * per_l1;
  std::uint64_t l2_hi = std::min<std::uint64_t>(l2_lo + per_l1, l2_.size());
  while (l2_hi - l2_lo > 1) {
    std::uint64_t const mid = l2_lo + (l2_hi - l2_lo) / 2;
    if (before_l2(block, mid) < k) {
      l2_lo = mid;
    } else {
      l2_hi = mid;
    }
  }
  k -= before_l2(block, l2_lo);

  std::uint64_t w = l2_lo * params_.l2_bits / kWordBits;
  for (;; ++w) {
    Word const word = kOnes ? bits.words[w] : ~bits.words[w];
    unsigned const count = popcount(word);
    if (count >= k) {
      return w * kWordBits + select_in_word(word, static_cast<unsigned>(k));
    }
    k -= count;
  }
}

RankSelectIndex RankSelectIndex::from_parts(BitRegion bits, RankSelectParams params,
                                            std::uint64_t total_ones,
                                            std::vector<std::uint64_t> l1,
                                            std::vector<std::uint16_t> l2,
                                            std::vector<std::uint64_t> one_samples,
                                            std::vector<std::uint64_t> zero_samples) {
  auto fail = [](std::string const& what) { throw Error(ErrorCode::corrupt, what); };
  params.validate();
  std::uint64_t const n = bits.num_bits;
  if (l1.size() != (n + kL1Bits - 1) / kL1Bits) fail("L1 directory size");
  if (l2.size() != (n + params.l2_bits - 1) / params.l2_bits) fail("L2 directory size");
  if (total_ones > n) fail("total ones exceeds length");
  if (one_samples.size() != total_ones / params.sample_rate) fail("one-sample count");
  if (zero_samples.size() != (n - total_ones) / params.sample_rate) fail("zero-sample count");
  for (std::size_t b = 0; b < l1.size(); ++b) {
    std::uint64_t const prev = b == 0 ? 0 : l1[b - 1];
    if (l1[b] < prev || l1[b] > total_ones || (b == 0 && l1[b] != 0)) fail("L1 directory not cumulative");
    if (l1[b] - prev > kL1Bits) fail("L1 block count exceeds block size");
  }
  std::uint64_t const per_l1 = kL1Bits / params.l2_bits;
  for (std::size_t j = 0; j < l2.size(); ++j) {
    if (j % per_l1 == 0) {
      if (l2[j] != 0) fail("L2 directory does not restart at L1 boundary");
    } else if (l2[j] < l2[j - 1]) {
      fail("L2 directory not cumulative");
    }
  }
  for (auto const* samples : {&one_samples, &zero_samples}) {
    for (std::size_t s = 0; s < samples->size(); ++s) {
      if ((*samples)[s] >= n || (s > 0 && (*samples)[s] <= (*samples)[s - 1])) fail("select samples");
    }
  }
  RankSelectIndex idx;
  idx.params_ = params;
  idx.num_bits_ = n;
  idx.total_ones_ = total_ones;
  idx.l1_ = std::move(l1);
  idx.l2_ = std::move(l2);
  idx.one_samples_ = std::move(one_samples);
  idx.zero_samples_ = std::move(zero_samples);
  return idx;
}

RankSelectBitVector::RankSelectBitVector(BitArray bits, RankSelectParams params, std::size_t workers)
    : bits_(std::move(bits)) {
  if (bits_.num_regions() != 1) {
    throw Error(ErrorCode::construction, "standalone bit vector needs exactly one region");
  }
  WorkerPool pool(workers);
  index_ = RankSelectIndex::build(bits_.region(0), params, pool);
}

}  // namespace wavelet
