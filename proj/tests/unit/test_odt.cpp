#include <catch_amalgamated.hpp>

#include <treeals/error.hpp>
#include <treeals/odt.hpp>

#include "test_helpers.hpp"

#include <random>

using namespace treeals;

namespace
{

dataset random_dataset( std::mt19937_64& rng, uint32_t features, std::size_t rows )
{
  dataset d( features, 0u );
  /* a hidden depth-2 rule plus label noise keeps the optimum non-trivial */
  auto const f1 = static_cast<uint32_t>( rng() % features ), f2 = static_cast<uint32_t>( rng() % features );
  for ( std::size_t r = 0; r < rows; ++r )
  {
    std::vector<bool> x( features );
    for ( auto f = 0u; f < features; ++f )
      x[f] = rng() & 1u;
    bool y = x[f1] != x[f2];
    if ( rng() % 5u == 0u )
      y = !y;
    d.push_row( x, y );
  }
  return d;
}

dataset xor_dataset()
{
  dataset d( 2u, 0u );
  for ( auto v = 0u; v < 4u; ++v )
    d.push_row( test::bits_of( v, 2u ), ( v & 1u ) != ( v >> 1 ) );
  return d;
}

} // namespace

TEST_CASE( "tree construction, printing and parsing", "[odt]" )
{
  auto const t = decision_tree::branch( 1u, decision_tree::leaf( false ),
                                        decision_tree::branch( 0u, decision_tree::leaf( true ), decision_tree::leaf( false ) ) );
  CHECK( t.to_string() == "(x1 0 (x0 1 0))" );
  CHECK( t.num_nodes() == 5u );
  CHECK( t.num_leaves() == 3u );
  CHECK( t.depth() == 2u );
  CHECK( t.min_num_features() == 2u );
  auto const p = decision_tree::parse( "(x1 0\n (x0 1 0))" );
  CHECK( p.same_structure( t ) );
  CHECK( predict( p, { false, true } ) );
  CHECK( !predict( p, { true, true } ) );
  CHECK_THROWS_AS( predict( p, { true } ), input_error );
  CHECK_THROWS_AS( decision_tree::parse( "(x1 0" ), parse_error );
  CHECK_THROWS_AS( decision_tree::parse( "(y1 0 1)" ), parse_error );
  CHECK_THROWS_AS( decision_tree::parse( "1 0" ), parse_error );
}

TEST_CASE( "collapse identical leaves", "[odt]" )
{
  auto const t = decision_tree::parse( "(x0 (x1 1 1) (x2 0 1))" );
  CHECK( collapse_leaves( t ).to_string() == "(x0 1 (x2 0 1))" );
  CHECK( collapse_leaves( decision_tree::parse( "(x0 (x1 0 0) 0)" ) ).to_string() == "0" );
}

TEST_CASE( "XOR needs depth two", "[odt]" )
{
  auto const d = xor_dataset();
  auto const t1 = fit_optimal( d, { 1u } );
  CHECK( t1.train_error == 2u );
  auto const t2 = fit_optimal( d, { 2u } );
  CHECK( t2.train_error == 0u );
  CHECK( t2.realized_depth == 2u );
  CHECK( t2.optimal );
  CHECK( count_errors( t2, d ) == 0u );
}

TEST_CASE( "leaf rules and tie-breaking", "[odt]" )
{
  dataset tie( 1u, 0u );
  tie.push_row( { false }, true );
  tie.push_row( { false }, false );
  auto const t = fit_optimal( tie, { 3u } );
  CHECK( t.to_string() == "0" );
  CHECK( t.train_error == 1u );

  /* a depth-0 budget gives the majority leaf */
  auto const d = xor_dataset();
  CHECK( fit_optimal( d, { 0u } ).to_string() == "0" );

  /* two equally good stumps: the smaller feature index wins */
  dataset twin( 3u, 0u );
  for ( auto v = 0u; v < 8u; ++v )
  {
    auto x = test::bits_of( v, 3u );
    x[2] = x[1];
    twin.push_row( x, x[1] );
  }
  CHECK( fit_optimal( twin, { 2u } ).to_string() == "(x1 0 1)" );

  /* an exact shallow tree is preferred over a deeper one of equal error */
  dataset wire( 4u, 0u );
  for ( auto v = 0u; v < 16u; ++v )
    wire.push_row( test::bits_of( v, 4u ), ( v >> 2 ) & 1u );
  auto const w = fit_optimal( wire, { 4u } );
  CHECK( w.to_string() == "(x2 0 1)" );
  CHECK( w.realized_depth == 1u );
}

TEST_CASE( "empty datasets are rejected", "[odt]" )
{
  dataset empty( 3u, 0u );
  CHECK_THROWS_AS( fit_optimal( empty, { 2u } ), input_error );
  CHECK_THROWS_AS( fit_bruteforce( empty, { 2u } ), input_error );
  CHECK_THROWS_AS( fit_bruteforce( dataset( 11u, 1u ), { 2u } ), input_error );
}

TEST_CASE( "optimal error equals brute force", "[odt]" )
{
  std::mt19937_64 rng( 2024u );
  for ( auto trial = 0u; trial < 150u; ++trial )
  {
    auto const features = 1u + static_cast<uint32_t>( rng() % 7u );
    auto const rows = 1u + rng() % 64u;
    auto const depth = static_cast<uint32_t>( rng() % 4u );
    auto const d = random_dataset( rng, features, rows );
    auto const opt = fit_optimal( d, { depth } );
    auto const ref = fit_bruteforce( d, { depth } );
    INFO( "trial " << trial << " features " << features << " rows " << rows << " depth " << depth );
    CHECK( opt.train_error == ref.train_error );
    CHECK( count_errors( opt, d ) == opt.train_error );
    CHECK( opt.realized_depth <= depth );
    CHECK( opt.optimal );
  }
}

TEST_CASE( "solver variants agree", "[odt]" )
{
  std::mt19937_64 rng( 99u );
  for ( auto trial = 0u; trial < 40u; ++trial )
  {
    auto const d = random_dataset( rng, 6u + static_cast<uint32_t>( rng() % 4u ), 200u + rng() % 400u );
    auto const depth = 2u + static_cast<uint32_t>( rng() % 3u );
    odt_params plain;
    plain.memoize = false;
    plain.count_depth_two = false;
    odt_params no_cache;
    no_cache.memoize = false;
    auto const a = fit_optimal( d, { depth } );
    auto const b = fit_optimal( d, { depth }, plain );
    auto const c = fit_optimal( d, { depth }, no_cache );
    CHECK( a.train_error == b.train_error );
    CHECK( a.train_error == c.train_error );
    CHECK( a.to_string() == fit_optimal( d, { depth } ).to_string() );
  }
}

TEST_CASE( "weights behave like repeated rows", "[odt]" )
{
  std::mt19937_64 rng( 5u );
  for ( auto trial = 0u; trial < 20u; ++trial )
  {
    dataset weighted( 4u, 0u ), repeated( 4u, 0u );
    for ( auto r = 0u; r < 20u; ++r )
    {
      auto const x = test::bits_of( rng(), 4u );
      bool const y = rng() & 1u;
      auto const w = 1u + static_cast<uint32_t>( rng() % 4u );
      weighted.push_row( x, y, w );
      for ( auto k = 0u; k < w; ++k )
        repeated.push_row( x, y );
    }
    auto const a = fit_optimal( weighted, { 2u } );
    auto const b = fit_optimal( repeated, { 2u } );
    CHECK( a.train_error == b.train_error );
    CHECK( count_errors( a, weighted ) == a.train_error );
    CHECK( fit_bruteforce( weighted, { 2u } ).train_error == a.train_error );
  }
}

TEST_CASE( "deeper budgets never increase the error", "[odt]" )
{
  std::mt19937_64 rng( 17u );
  for ( auto trial = 0u; trial < 10u; ++trial )
  {
    auto const d = random_dataset( rng, 8u, 256u );
    uint64_t prev = d.num_rows;
    for ( auto depth = 0u; depth <= 5u; ++depth )
    {
      auto const t = fit_optimal( d, { depth } );
      CHECK( t.train_error <= prev );
      prev = t.train_error;
    }
  }
}

TEST_CASE( "node limit returns a best-so-far tree", "[odt]" )
{
  std::mt19937_64 rng( 8u );
  auto const d = random_dataset( rng, 12u, 2000u );
  odt_stats stats;
  auto const t = fit_optimal( d, { 6u, 5u, std::nullopt }, {}, &stats );
  CHECK( !t.optimal );
  CHECK( count_errors( t, d ) == t.train_error );
  auto const full = fit_optimal( d, { 4u }, {}, &stats );
  CHECK( full.optimal );
  CHECK( stats.explored > 0u );
}

TEST_CASE( "C17 outputs at increasing depth", "[odt]" )
{
  auto const tables = truth_tables( test::load_circuit( "c17.blif" ) );
  uint64_t const expected[] = { 16u, 8u, 4u, 0u };
  for ( auto depth = 1u; depth <= 4u; ++depth )
  {
    uint64_t errors = 0;
    for ( auto const& d : tables )
    {
      auto const t = fit_optimal( d, { depth } );
      errors += t.train_error;
      if ( depth <= 3u )
        CHECK( t.train_error == fit_bruteforce( d, { depth } ).train_error );
    }
    CHECK( errors == expected[depth - 1u] );
  }
}
