#include <catch_amalgamated.hpp>

#include <treeals/aig.hpp>
#include <treeals/error.hpp>
#include <treeals/simulate.hpp>

#include "test_helpers.hpp"

#include <set>

using namespace treeals;

TEST_CASE( "literal encoding", "[aig]" )
{
  auto const l = literal::make( 5u, true );
  CHECK( l.value == 11u );
  CHECK( l.node() == 5u );
  CHECK( l.is_complemented() );
  CHECK( l.regular() == literal::make( 5u ) );
  CHECK( !l == literal::make( 5u ) );
  CHECK( ( l ^ true ) == literal::make( 5u ) );
  CHECK( !const0 == const1 );
}

TEST_CASE( "builder hashes and propagates constants", "[aig]" )
{
  aig_builder b( 2u );
  auto const x = b.input( 0 ), y = b.input( 1 );
  auto const a1 = b.create_and( x, y );
  auto const a2 = b.create_and( y, x );
  CHECK( a1 == a2 );
  CHECK( b.network().num_ands() == 1u );

  CHECK( b.create_and( x, const0 ) == const0 );
  CHECK( b.create_and( x, const1 ) == x );
  CHECK( b.create_and( x, x ) == x );
  CHECK( b.create_and( x, !x ) == const0 );
  CHECK( b.create_mux( x, const1, const0 ) == x );
  CHECK( b.create_mux( x, y, y ) == y );
  CHECK( b.network().num_ands() == 1u );
}

TEST_CASE( "add_and rejects forward references", "[aig]" )
{
  aig ntk( 2u );
  CHECK_THROWS_AS( ntk.add_and( literal::make( 3u ), literal::make( 1u ) ), input_error );
  auto const a = ntk.add_and( literal::make( 1u ), literal::make( 2u ) );
  CHECK( a.node() == 3u );
}

TEST_CASE( "cleanup drops dangling logic", "[aig]" )
{
  aig_builder b( 3u );
  auto const x = b.input( 0 ), y = b.input( 1 ), z = b.input( 2 );
  auto const used = b.create_and( x, y );
  b.create_and( y, z );
  b.create_output( !used, "f" );
  auto const ntk = b.take();
  CHECK( ntk.num_ands() == 2u );

  auto const clean = cleanup( ntk );
  CHECK( clean.num_ands() == 1u );
  CHECK( clean.output_name( 0 ) == "f" );
  CHECK( test::equivalent( ntk, clean ) );
  CHECK( metrics( ntk ).and_count == 1u );
}

TEST_CASE( "metrics of a small circuit", "[aig]" )
{
  aig_builder b( 3u );
  auto const x = b.input( 0 ), y = b.input( 1 ), z = b.input( 2 );
  auto const t = b.create_and( b.create_and( x, y ), z );
  b.create_output( t );
  b.create_output( x );
  auto const m = metrics( b.network() );
  CHECK( m.and_count == 2u );
  CHECK( m.level_depth == 2u );
  CHECK( m.num_inputs == 3u );
  CHECK( m.num_outputs == 2u );

  aig wires( 2u );
  wires.add_output( const1 );
  wires.add_output( wires.input( 1 ) );
  CHECK( metrics( wires ).level_depth == 0u );
  CHECK( metrics( wires ).and_count == 0u );
}

TEST_CASE( "strash is idempotent and preserves function", "[aig]" )
{
  for ( auto seed = 0u; seed < 20u; ++seed )
  {
    /* duplicate gates without hashing */
    auto const base = test::random_aig( seed, 6u, 30u, 3u );
    aig dup( base.num_inputs() );
    std::vector<literal> map( base.num_nodes() );
    for ( auto i = 0u; i <= base.num_inputs(); ++i )
      map[i] = literal::make( i );
    for ( auto k = 0u; k < base.num_ands(); ++k )
    {
      auto const n = base.and_node( k );
      auto const [a, c] = base.fanins( n );
      auto const fa = map[a.node()] ^ a.is_complemented();
      auto const fc = map[c.node()] ^ c.is_complemented();
      dup.add_and( fa, fc );
      map[n] = dup.add_and( fc, fa );
    }
    for ( auto f : base.outputs() )
      dup.add_output( map[f.node()] ^ f.is_complemented() );

    auto const s1 = strash( dup );
    auto const s2 = strash( s1 );
    CHECK( s1.same_structure( s2 ) );
    CHECK( s1.num_ands() <= base.num_ands() );
    CHECK( test::equivalent( dup, s1 ) );

    std::set<std::pair<uint32_t, uint32_t>> pairs;
    for ( auto const& fi : s1.ands() )
      CHECK( pairs.emplace( fi[0].value, fi[1].value ).second );
  }
}

TEST_CASE( "topological invariant holds for generated networks", "[aig]" )
{
  auto const ntk = test::random_aig( 3u, 8u, 100u, 4u );
  for ( auto k = 0u; k < ntk.num_ands(); ++k )
  {
    auto const n = ntk.and_node( k );
    for ( auto f : ntk.fanins( n ) )
      CHECK( f.node() < n );
  }
}
