#include "treeals/simulate.hpp"

#include "treeals/error.hpp"

#include <algorithm>
#include <bit>
#include <random>

namespace treeals
{

pattern_set exhaustive_patterns( uint32_t num_inputs )
{
  if ( num_inputs > 30 )
    throw input_error( "exhaustive patterns limited to 30 inputs" );
  static constexpr uint64_t masks[] = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                        0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
  pattern_set ps( num_inputs, std::size_t{ 1 } << num_inputs );
  for ( auto i = 0u; i < num_inputs; ++i )
  {
    auto words = ps.signal( i );
    for ( std::size_t w = 0; w < words.size(); ++w )
    {
      if ( i < 6 )
        words[w] = masks[i];
      else
        words[w] = ( ( w >> ( i - 6 ) ) & 1u ) ? ~uint64_t{ 0 } : 0u;
    }
    words.back() &= ps.tail_mask();
  }
  return ps;
}

pattern_set random_patterns( uint32_t num_inputs, std::size_t num_patterns, uint64_t seed )
{
  pattern_set ps( num_inputs, num_patterns );
  std::mt19937_64 rng( seed );
  /* word-major fill so that a prefix of patterns is independent of num_patterns */
  for ( std::size_t w = 0; w < ps.num_words(); ++w )
  {
    for ( auto i = 0u; i < num_inputs; ++i )
    {
      ps.signal( i )[w] = rng();
    }
  }
  if ( ps.num_words() > 0 )
  {
    for ( auto i = 0u; i < num_inputs; ++i )
      ps.signal( i ).back() &= ps.tail_mask();
  }
  return ps;
}

pattern_set simulate_patterns( aig const& ntk, pattern_set const& inputs )
{
  if ( inputs.num_signals() != ntk.num_inputs() )
    throw input_error( "pattern width does not match the number of circuit inputs" );
  auto const nw = inputs.num_words();
  auto const mask = nw == 0 ? 0u : inputs.tail_mask();
  std::vector<uint64_t> values( std::size_t{ ntk.num_nodes() } * nw, 0u );
  for ( auto i = 0u; i < ntk.num_inputs(); ++i )
  {
    auto const src = inputs.signal( i );
    std::copy( src.begin(), src.end(), values.begin() + ( i + 1u ) * nw );
  }
  for ( auto n = ntk.num_inputs() + 1u; n < ntk.num_nodes(); ++n )
  {
    auto const& fi = ntk.fanins( n );
    uint64_t const* a = values.data() + fi[0].node() * nw;
    uint64_t const* b = values.data() + fi[1].node() * nw;
    uint64_t* r = values.data() + std::size_t{ n } * nw;
    uint64_t const ca = fi[0].is_complemented() ? ~uint64_t{ 0 } : 0u;
    uint64_t const cb = fi[1].is_complemented() ? ~uint64_t{ 0 } : 0u;
    for ( std::size_t w = 0; w < nw; ++w )
      r[w] = ( a[w] ^ ca ) & ( b[w] ^ cb );
  }
  pattern_set out( ntk.num_outputs(), inputs.num_patterns() );
  for ( auto o = 0u; o < ntk.num_outputs(); ++o )
  {
    auto const f = ntk.output( o );
    auto dst = out.signal( o );
    uint64_t const c = f.is_complemented() ? ~uint64_t{ 0 } : 0u;
    uint64_t const* src = values.data() + f.node() * nw;
    for ( std::size_t w = 0; w < nw; ++w )
      dst[w] = src[w] ^ c;
    if ( nw > 0 )
      dst.back() &= mask;
  }
  return out;
}

std::vector<std::vector<bool>> simulate( aig const& ntk, std::vector<std::vector<bool>> const& vectors )
{
  pattern_set in( ntk.num_inputs(), vectors.size() );
  for ( std::size_t p = 0; p < vectors.size(); ++p )
  {
    if ( vectors[p].size() != ntk.num_inputs() )
      throw input_error( "input assignment " + std::to_string( p ) + " has " + std::to_string( vectors[p].size() ) +
                         " bits, circuit has " + std::to_string( ntk.num_inputs() ) + " inputs" );
    for ( auto i = 0u; i < ntk.num_inputs(); ++i )
      in.set( i, p, vectors[p][i] );
  }
  auto const out = simulate_patterns( ntk, in );
  std::vector<std::vector<bool>> res( vectors.size(), std::vector<bool>( ntk.num_outputs() ) );
  for ( std::size_t p = 0; p < vectors.size(); ++p )
    for ( auto o = 0u; o < ntk.num_outputs(); ++o )
      res[p][o] = out.get( o, p );
  return res;
}

uint64_t count_mismatches( pattern_set const& a, pattern_set const& b )
{
  if ( a.num_signals() != b.num_signals() || a.num_patterns() != b.num_patterns() )
    throw input_error( "pattern sets differ in shape" );
  uint64_t n = 0;
  for ( auto s = 0u; s < a.num_signals(); ++s )
  {
    auto const x = a.signal( s );
    auto const y = b.signal( s );
    for ( std::size_t w = 0; w < x.size(); ++w )
      n += std::popcount( x[w] ^ y[w] );
  }
  return n;
}

} /* namespace treeals */
