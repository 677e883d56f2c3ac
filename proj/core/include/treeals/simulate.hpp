/*!
  \file simulate.hpp
  \brief Word-parallel AIG simulation

  Patterns are stored signal-major: each signal owns `num_words()` 64-bit
  words and pattern `p` lives in bit `p % 64` of word `p / 64`.
*/

#pragma once

#include "treeals/aig.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace treeals
{

class pattern_set
{
public:
  pattern_set() = default;
  pattern_set( uint32_t num_signals, std::size_t num_patterns )
      : num_signals_( num_signals ), num_patterns_( num_patterns ),
        num_words_( ( num_patterns + 63 ) / 64 ), data_( num_signals * num_words_, 0u )
  {
  }

  uint32_t num_signals() const { return num_signals_; }
  std::size_t num_patterns() const { return num_patterns_; }
  std::size_t num_words() const { return num_words_; }

  std::span<uint64_t> signal( uint32_t index ) { return { data_.data() + index * num_words_, num_words_ }; }
  std::span<uint64_t const> signal( uint32_t index ) const
  {
    return { data_.data() + index * num_words_, num_words_ };
  }

  bool get( uint32_t sig, std::size_t pattern ) const
  {
    return ( data_[sig * num_words_ + ( pattern >> 6 )] >> ( pattern & 63 ) ) & 1u;
  }
  void set( uint32_t sig, std::size_t pattern, bool value )
  {
    auto& w = data_[sig * num_words_ + ( pattern >> 6 )];
    auto const bit = uint64_t{ 1 } << ( pattern & 63 );
    w = value ? ( w | bit ) : ( w & ~bit );
  }

  /* mask of valid pattern bits in the last word */
  uint64_t tail_mask() const
  {
    auto const rem = num_patterns_ & 63;
    return rem == 0 ? ~uint64_t{ 0 } : ( uint64_t{ 1 } << rem ) - 1;
  }

  bool operator==( pattern_set const& ) const = default;

private:
  uint32_t num_signals_{ 0 };
  std::size_t num_patterns_{ 0 };
  std::size_t num_words_{ 0 };
  std::vector<uint64_t> data_;
};

/*! \brief All 2^n input assignments; pattern r assigns bit i of r to input i. */
pattern_set exhaustive_patterns( uint32_t num_inputs );

/*! \brief Uniform random assignments (with replacement) from std::mt19937_64 seeded with `seed`. */
pattern_set random_patterns( uint32_t num_inputs, std::size_t num_patterns, uint64_t seed );

/*! \brief Output patterns (one signal per output) for the given input patterns. */
pattern_set simulate_patterns( aig const& ntk, pattern_set const& inputs );

/*! \brief Per-vector simulation; each assignment must have num_inputs bits. */
std::vector<std::vector<bool>> simulate( aig const& ntk, std::vector<std::vector<bool>> const& vectors );

/*! \brief Counts differing bits between two output pattern sets of equal shape. */
uint64_t count_mismatches( pattern_set const& a, pattern_set const& b );

} /* namespace treeals */
