#include <catch_amalgamated.hpp>

#include <treeals/dataset.hpp>
#include <treeals/error.hpp>
#include <treeals/qor.hpp>
#include <treeals/synth.hpp>

#include "test_helpers.hpp"

#include <random>

using namespace treeals;

TEST_CASE( "trees become AIGs", "[synth]" )
{
  auto const zero = tree_to_aig( decision_tree::leaf( false ), 3u );
  CHECK( zero.num_ands() == 0u );
  CHECK( zero.output( 0 ) == const0 );
  CHECK( tree_to_aig( decision_tree::leaf( true ), 0u ).output( 0 ) == const1 );

  auto const wire = tree_to_aig( decision_tree::parse( "(x3 0 1)" ), 4u );
  CHECK( wire.num_ands() == 0u );
  CHECK( wire.output( 0 ) == wire.input( 3 ) );

  auto const inv = tree_to_aig( decision_tree::parse( "(x0 1 0)" ), 1u );
  CHECK( inv.output( 0 ) == !inv.input( 0 ) );

  auto const conj = tree_to_aig( decision_tree::parse( "(x0 0 (x1 0 1))" ), 2u );
  CHECK( conj.num_ands() == 1u );

  auto const x = tree_to_aig( decision_tree::parse( "(x0 (x1 0 1) (x1 1 0))" ), 2u );
  CHECK( x.num_ands() <= 3u );

  CHECK_THROWS_AS( tree_to_aig( decision_tree::parse( "(x4 0 1)" ), 4u ), input_error );
}

TEST_CASE( "synthesized trees agree with predict", "[synth]" )
{
  std::mt19937_64 rng( 1u );
  for ( auto trial = 0u; trial < 40u; ++trial )
  {
    auto const n = 2u + static_cast<uint32_t>( rng() % 8u );
    auto const ntk = test::random_aig( rng(), n, 4u * n, 1u );
    auto const d = truth_table( ntk, 0u );
    auto const t = fit_optimal( d, { 1u + static_cast<uint32_t>( rng() % 4u ) } );
    auto const c = tree_to_aig( t, n );
    auto const out = simulate_patterns( c, exhaustive_patterns( n ) );
    for ( std::size_t r = 0; r < d.num_rows; ++r )
      CHECK( out.get( 0, r ) == predict( t, d.row( r ) ) );
  }
}

TEST_CASE( "approximating small functions", "[synth]" )
{
  aig wire( 2u );
  wire.add_output( wire.input( 0 ) );
  auto const w = approximate_network( wire, 9u );
  CHECK( w.exact );
  CHECK( w.md == 1u );
  CHECK( w.circuit.num_ands() == 0u );

  aig_builder b( 2u );
  b.create_output( b.create_and( b.input( 0 ), b.input( 1 ) ) );
  auto const conj = b.take();
  auto const a = approximate_network( conj, 1u );
  CHECK( !a.exact );
  CHECK( a.md == 1u );
  CHECK( a.per_output_trees[0].train_error == 1u );
  CHECK( qor_exhaustive( conj, a.circuit ).error == 0.25 );

  CHECK_THROWS_AS( approximate_network( conj, 0u ), input_error );
  CHECK_THROWS_AS( approximate_network( test::load_circuit( "add8u.blif" ), 3u ), input_error );
}

TEST_CASE( "recorded depth follows the exactness rule", "[synth]" )
{
  /* outputs of realized depth 1 and 2: the smaller one is recorded */
  aig_builder b( 3u );
  b.create_output( b.input( 2 ) );
  b.create_output( b.create_and( b.input( 0 ), b.input( 1 ) ) );
  auto const ntk = b.take();
  auto const exact = approximate_network( ntk, 9u );
  CHECK( exact.exact );
  CHECK( exact.md == 1u );
  CHECK( exact.per_output_trees[1].realized_depth == 2u );
  auto const approx = approximate_network( ntk, 1u );
  CHECK( !approx.exact );
  CHECK( approx.md == 1u );
}

TEST_CASE( "C17 as one sub-circuit", "[synth]" )
{
  auto const ntk = test::load_circuit( "c17.blif" );
  double const expected[] = { 0.25, 0.125, 0.0625, 0.0 };
  for ( auto md = 1u; md <= 4u; ++md )
  {
    auto const a = approximate_network( ntk, md );
    CHECK( qor_exhaustive( ntk, a.circuit ).error == expected[md - 1u] );
    CHECK( a.exact == ( md == 4u ) );
    if ( md == 1u )
      CHECK( a.circuit.num_ands() == 0u );
  }
  std::vector<uint32_t> members;
  for ( auto k = 0u; k < ntk.num_ands(); ++k )
    members.push_back( ntk.and_node( k ) );
  auto const sub = extract( ntk, members, 3u );
  auto const s = approximate_sub_circuit( sub, 4u );
  CHECK( s.source_id == 3u );
  CHECK( s.exact );
  CHECK( test::equivalent( s.circuit, sub.extracted ) );
}

TEST_CASE( "circuit error equals the summed training error", "[synth]" )
{
  std::mt19937_64 rng( 3u );
  for ( auto trial = 0u; trial < 25u; ++trial )
  {
    auto const n = 3u + static_cast<uint32_t>( rng() % 8u );
    auto const m = 1u + static_cast<uint32_t>( rng() % 4u );
    auto const ntk = test::random_aig( rng(), n, 5u * n, m );
    auto const md = 1u + static_cast<uint32_t>( rng() % 4u );
    auto const a = approximate_network( ntk, md );
    auto const q = qor_exhaustive( ntk, a.circuit );
    CHECK( q.mismatched_bits == a.total_train_error() );
    CHECK( q.total_bits == ( uint64_t{ 1 } << n ) * m );
    CHECK( a.exact == ( a.total_train_error() == 0u ) );
    if ( a.exact )
      CHECK( test::equivalent( a.circuit, ntk ) );
  }
}

TEST_CASE( "approximations are independent of the job count", "[synth]" )
{
  auto const ntk = test::load_circuit( "c17.blif" );
  synth_params one, four;
  four.jobs = 4u;
  for ( auto md = 1u; md <= 3u; ++md )
    CHECK( write_aiger( approximate_network( ntk, md, one ).circuit ) ==
           write_aiger( approximate_network( ntk, md, four ).circuit ) );
}

TEST_CASE( "budget exhaustion is reported", "[synth]" )
{
  auto const ntk = test::random_aig( 4u, 12u, 80u, 2u );
  synth_params ps;
  ps.node_limit = 3u;
  CHECK_THROWS_AS( approximate_network( ntk, 6u, ps ), budget_exceeded );
  ps.require_optimal = false;
  auto const a = approximate_network( ntk, 6u, ps );
  CHECK( a.circuit.num_outputs() == 2u );
}
