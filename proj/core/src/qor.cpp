#include "treeals/qor.hpp"

#include "treeals/error.hpp"

namespace treeals
{

namespace
{

void check_arity( aig const& original, aig const& approx )
{
  if ( original.num_inputs() != approx.num_inputs() || original.num_outputs() != approx.num_outputs() )
  {
    throw input_error( "circuits differ in arity: " + std::to_string( original.num_inputs() ) + "/" +
                       std::to_string( original.num_outputs() ) + " vs " + std::to_string( approx.num_inputs() ) +
                       "/" + std::to_string( approx.num_outputs() ) + " inputs/outputs" );
  }
}

/* vectors base .. base + 2^k - 1 of the exhaustive enumeration */
pattern_set exhaustive_chunk( uint32_t num_inputs, uint32_t k, uint64_t base )
{
  auto ps = exhaustive_patterns( k );
  pattern_set chunk( num_inputs, ps.num_patterns() );
  for ( auto i = 0u; i < num_inputs; ++i )
  {
    auto dst = chunk.signal( i );
    if ( i < k )
      std::copy( ps.signal( i ).begin(), ps.signal( i ).end(), dst.begin() );
    else if ( ( base >> i ) & 1u )
    {
      std::fill( dst.begin(), dst.end(), ~uint64_t{ 0 } );
      dst.back() &= chunk.tail_mask();
    }
  }
  return chunk;
}

qor_report make_report( uint64_t mismatches, uint64_t samples, uint32_t num_outputs, qor_estimator estimator,
                        uint64_t seed )
{
  qor_report r;
  r.estimator = estimator;
  r.samples = samples;
  r.seed = seed;
  r.mismatched_bits = mismatches;
  r.total_bits = samples * num_outputs;
  r.error = r.total_bits == 0u ? 0.0 : static_cast<double>( mismatches ) / static_cast<double>( r.total_bits );
  return r;
}

} // namespace

std::string to_string( qor_estimator e )
{
  return e == qor_estimator::exhaustive ? "exhaustive" : "monte-carlo";
}

qor_report qor_exhaustive( aig const& original, aig const& approx )
{
  check_arity( original, approx );
  auto const n = original.num_inputs();
  if ( n > max_exhaustive_qor_inputs )
    throw input_error( "exhaustive evaluation is limited to " + std::to_string( max_exhaustive_qor_inputs ) +
                       " inputs, circuit has " + std::to_string( n ) );
  /* chunks of 2^16 vectors bound the simulation memory */
  auto const k = std::min( n, 16u );
  uint64_t mismatches = 0;
  for ( uint64_t base = 0; base < ( uint64_t{ 1 } << n ); base += uint64_t{ 1 } << k )
  {
    auto const in = exhaustive_chunk( n, k, base );
    mismatches += count_mismatches( simulate_patterns( original, in ), simulate_patterns( approx, in ) );
  }
  return make_report( mismatches, uint64_t{ 1 } << n, original.num_outputs(), qor_estimator::exhaustive, 0u );
}

qor_report qor_monte_carlo( aig const& original, aig const& approx, uint64_t samples, uint64_t seed )
{
  check_arity( original, approx );
  if ( samples == 0u )
    throw input_error( "Monte Carlo evaluation needs at least one sample" );
  auto const in = random_patterns( original.num_inputs(), samples, seed );
  auto const mismatches = count_mismatches( simulate_patterns( original, in ), simulate_patterns( approx, in ) );
  return make_report( mismatches, samples, original.num_outputs(), qor_estimator::monte_carlo, seed );
}

qor_testbench::qor_testbench( aig const& original, pattern_set inputs, qor_estimator estimator, uint64_t seed )
    : num_inputs_( original.num_inputs() ), num_outputs_( original.num_outputs() ), inputs_( std::move( inputs ) ),
      reference_( simulate_patterns( original, inputs_ ) ), estimator_( estimator ), seed_( seed )
{
}

qor_testbench qor_testbench::exhaustive( aig const& original )
{
  if ( original.num_inputs() > max_exhaustive_qor_inputs )
    throw input_error( "exhaustive evaluation is limited to " + std::to_string( max_exhaustive_qor_inputs ) +
                       " inputs" );
  return qor_testbench( original, exhaustive_patterns( original.num_inputs() ), qor_estimator::exhaustive, 0u );
}

qor_testbench qor_testbench::monte_carlo( aig const& original, uint64_t samples, uint64_t seed )
{
  if ( samples == 0u )
    throw input_error( "Monte Carlo evaluation needs at least one sample" );
  return qor_testbench( original, random_patterns( original.num_inputs(), samples, seed ),
                        qor_estimator::monte_carlo, seed );
}

qor_report qor_testbench::measure( aig const& approx ) const
{
  if ( approx.num_inputs() != num_inputs_ || approx.num_outputs() != num_outputs_ )
    throw input_error( "circuit arity does not match the testbench" );
  auto const mismatches = count_mismatches( reference_, simulate_patterns( approx, inputs_ ) );
  return make_report( mismatches, inputs_.num_patterns(), num_outputs_, estimator_, seed_ );
}

} /* namespace treeals */
