/*!
  \file bit_vector.hpp
  \brief Packed, fixed-length bit vector used for dataset columns and simulation
*/

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace treeals
{

class bit_vector
{
public:
  bit_vector() = default;

  explicit bit_vector( std::size_t num_bits, bool value = false )
      : words_( ( num_bits + 63 ) / 64, value ? ~uint64_t{ 0 } : uint64_t{ 0 } ),
        size_( num_bits )
  {
    mask_tail();
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t num_words() const noexcept { return words_.size(); }

  bool get( std::size_t i ) const noexcept
  {
    return ( words_[i >> 6] >> ( i & 63 ) ) & 1u;
  }

  void set( std::size_t i, bool value = true ) noexcept
  {
    auto const bit = uint64_t{ 1 } << ( i & 63 );
    if ( value )
      words_[i >> 6] |= bit;
    else
      words_[i >> 6] &= ~bit;
  }

  void push_back( bool value )
  {
    if ( ( size_ & 63 ) == 0 )
      words_.push_back( 0 );
    ++size_;
    set( size_ - 1, value );
  }

  std::size_t count() const noexcept
  {
    std::size_t n = 0;
    for ( auto w : words_ )
      n += std::popcount( w );
    return n;
  }

  std::span<uint64_t> words() noexcept { return words_; }
  std::span<uint64_t const> words() const noexcept { return words_; }

  /* clears bits beyond size() in the last word */
  void mask_tail() noexcept
  {
    if ( auto const rem = size_ & 63; rem != 0 && !words_.empty() )
      words_.back() &= ( uint64_t{ 1 } << rem ) - 1;
  }

  bool operator==( bit_vector const& ) const = default;

private:
  std::vector<uint64_t> words_;
  std::size_t size_{ 0 };
};

} /* namespace treeals */
