#include <catch_amalgamated.hpp>

#include <treeals/error.hpp>
#include <treeals/region.hpp>
#include <treeals/simulate.hpp>

#include "test_helpers.hpp"

#include <algorithm>
#include <random>

using namespace treeals;

namespace
{

std::vector<uint32_t> all_ands( aig const& ntk )
{
  std::vector<uint32_t> v;
  for ( auto k = 0u; k < ntk.num_ands(); ++k )
    v.push_back( ntk.and_node( k ) );
  return v;
}

/* values of the boundary signals of `sub` under the parent simulation */
void check_region_against_parent( aig const& ntk, sub_circuit const& sub, uint64_t seed )
{
  auto const n = ntk.num_nodes();
  /* simulate every node of the parent by exposing it as an output */
  aig probe = ntk;
  for ( auto node = 1u; node < n; ++node )
    probe.add_output( literal::make( node ) );
  auto const in = random_patterns( ntk.num_inputs(), 256u, seed );
  auto const values = simulate_patterns( probe, in );
  auto const base = ntk.num_outputs();

  pattern_set sub_in( sub.num_inputs(), 256u );
  for ( auto i = 0u; i < sub.num_inputs(); ++i )
  {
    auto const src = values.signal( base + sub.boundary_inputs[i].node() - 1u );
    std::copy( src.begin(), src.end(), sub_in.signal( i ).begin() );
  }
  auto const sub_out = simulate_patterns( sub.extracted, sub_in );
  for ( auto o = 0u; o < sub.num_outputs(); ++o )
  {
    auto const expect = values.signal( base + sub.boundary_outputs[o] - 1u );
    auto const got = sub_out.signal( o );
    CHECK( std::equal( expect.begin(), expect.end(), got.begin() ) );
  }
}

} // namespace

TEST_CASE( "extract the whole circuit", "[region]" )
{
  auto const ntk = test::load_circuit( "c17.blif" );
  auto const sub = extract( ntk, all_ands( ntk ), 7u );
  CHECK( sub.id == 7u );
  CHECK( sub.num_inputs() == 5u );
  CHECK( sub.num_outputs() == 2u );
  /* boundary outputs are the (uncomplemented) output nodes */
  aig regular = ntk;
  for ( auto o = 0u; o < regular.num_outputs(); ++o )
    regular.set_output( o, regular.output( o ).regular() );
  CHECK( test::equivalent( sub.extracted, regular ) );
}

TEST_CASE( "extract a single AND", "[region]" )
{
  auto const ntk = test::load_circuit( "c17.blif" );
  auto const members = std::vector<uint32_t>{ ntk.and_node( 0 ) };
  auto const sub = extract( ntk, members );
  CHECK( sub.num_inputs() == 2u );
  CHECK( sub.num_outputs() == 1u );
  CHECK( sub.extracted.num_ands() == 1u );
  CHECK_THROWS_AS( extract( ntk, std::vector<uint32_t>{ 1u } ), input_error );
}

TEST_CASE( "extracted logic matches the parent region on random member sets", "[region]" )
{
  auto const ntk = test::load_circuit( "c499.blif" );
  auto const ands = all_ands( ntk );
  std::mt19937_64 rng( 11u );
  for ( auto trial = 0u; trial < 20u; ++trial )
  {
    std::vector<uint32_t> members;
    for ( auto v : ands )
      if ( rng() % 4u == 0u )
        members.push_back( v );
    auto const sub = extract( ntk, members, trial );
    CHECK( std::is_sorted( sub.members.begin(), sub.members.end() ) );
    check_region_against_parent( ntk, sub, trial );
  }
}

TEST_CASE( "identity substitution reproduces the circuit", "[region]" )
{
  auto const ntk = test::load_circuit( "c432.blif" );
  auto const ands = all_ands( ntk );
  /* consecutive node ranges are convex */
  auto const half = ands.size() / 2u;
  auto const r1 = extract( ntk, std::span( ands.data(), half ), 0u );
  auto const r2 = extract( ntk, std::span( ands.data() + half, ands.size() - half ), 1u );
  std::vector<region_replacement> reps{ { &r1, &r1.extracted }, { &r2, &r2.extracted } };
  auto const res = substitute( ntk, reps );
  CHECK( test::equivalent( res, ntk ) );
  CHECK( res.output_name( 0 ) == ntk.output_name( 0 ) );
  CHECK( test::equivalent( substitute( ntk, r1, r1.extracted ), ntk ) );
}

TEST_CASE( "substituting a constant replacement", "[region]" )
{
  aig_builder b( 3u );
  auto const x = b.input( 0 ), y = b.input( 1 ), z = b.input( 2 );
  auto const g = b.create_and( x, y );
  b.create_output( b.create_and( g, z ) );
  auto const ntk = b.take();

  auto const sub = extract( ntk, std::vector<uint32_t>{ g.node() } );
  aig zero( 2u );
  zero.add_output( const0 );
  auto const res = substitute( ntk, sub, zero );
  CHECK( res.num_ands() == 0u );
  CHECK( res.output( 0 ) == const0 );

  aig wrong( 3u );
  wrong.add_output( const0 );
  CHECK_THROWS_AS( substitute( ntk, sub, wrong ), input_error );
}

TEST_CASE( "overlapping or cyclic regions are rejected", "[region]" )
{
  aig_builder b( 3u );
  auto const x = b.input( 0 ), y = b.input( 1 ), z = b.input( 2 );
  auto const g1 = b.create_and( x, y );
  auto const g2 = b.create_and( g1, z );
  auto const g3 = b.create_and( g2, x );
  b.create_output( g3 );
  auto const ntk = b.take();

  auto const a = extract( ntk, std::vector<uint32_t>{ g1.node(), g2.node() } );
  auto const c = extract( ntk, std::vector<uint32_t>{ g2.node(), g3.node() } );
  std::vector<region_replacement> overlap{ { &a, &a.extracted }, { &c, &c.extracted } };
  CHECK_THROWS_AS( substitute( ntk, overlap ), input_error );

  /* {g1, g3} and {g2}: g1 -> g2 -> g3 forms a cycle between the regions */
  auto const outer = extract( ntk, std::vector<uint32_t>{ g1.node(), g3.node() } );
  auto const inner = extract( ntk, std::vector<uint32_t>{ g2.node() } );
  std::vector<region_replacement> cyclic{ { &outer, &outer.extracted }, { &inner, &inner.extracted } };
  CHECK_THROWS_AS( substitute( ntk, cyclic ), input_error );
}
