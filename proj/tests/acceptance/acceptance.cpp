/* End-to-end acceptance checks; one [PASS]/[FAIL] line per check. */

#include <treeals/cli.hpp>
#include <treeals/dataset.hpp>
#include <treeals/explore.hpp>
#include <treeals/io.hpp>
#include <treeals/odt.hpp>
#include <treeals/partition.hpp>
#include <treeals/qor.hpp>
#include <treeals/region.hpp>
#include <treeals/synth.hpp>

#include "test_helpers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace treeals;
namespace fs = std::filesystem;

namespace
{

struct verdict
{
  bool pass{ true };
  std::string detail;

  void fail( std::string what )
  {
    if ( pass )
      detail = std::move( what );
    pass = false;
  }
};

/* ---- independent oracles ---- */

/* 64 input vectors per word: bit j of word w of input i is input i of vector 64w + j */
using words = std::vector<std::vector<uint64_t>>;

words evaluate( aig const& ntk, words const& inputs )
{
  auto const nw = inputs.empty() ? 0u : inputs[0].size();
  std::vector<std::vector<uint64_t>> value( ntk.num_nodes(), std::vector<uint64_t>( nw, 0u ) );
  for ( auto i = 0u; i < ntk.num_inputs(); ++i )
    value[1u + i] = inputs[i];
  auto word = [&]( literal l, std::size_t w ) { return value[l.node()][w] ^ ( l.is_complemented() ? ~0ull : 0ull ); };
  for ( auto k = 0u; k < ntk.num_ands(); ++k )
  {
    auto const n = ntk.and_node( k );
    auto const& f = ntk.fanins( n );
    for ( std::size_t w = 0; w < nw; ++w )
      value[n][w] = word( f[0], w ) & word( f[1], w );
  }
  words out;
  for ( auto const o : ntk.outputs() )
  {
    std::vector<uint64_t> v( nw );
    for ( std::size_t w = 0; w < nw; ++w )
      v[w] = word( o, w );
    out.push_back( std::move( v ) );
  }
  return out;
}

struct vectors
{
  words inputs;
  uint64_t count{ 0 };

  uint64_t mask( std::size_t w ) const
  {
    auto const rest = count - 64u * w;
    return rest >= 64u ? ~0ull : ( ( 1ull << rest ) - 1u );
  }
};

vectors all_vectors( uint32_t n )
{
  vectors v;
  v.count = 1ull << n;
  auto const nw = ( v.count + 63u ) / 64u;
  v.inputs.assign( n, std::vector<uint64_t>( nw, 0u ) );
  for ( uint64_t x = 0; x < v.count; ++x )
    for ( auto i = 0u; i < n; ++i )
      if ( ( x >> i ) & 1u )
        v.inputs[i][x / 64u] |= 1ull << ( x % 64u );
  return v;
}

vectors sampled_vectors( uint32_t n, uint64_t count, uint64_t seed )
{
  std::mt19937_64 rng( seed );
  vectors v;
  v.count = count;
  v.inputs.assign( n, std::vector<uint64_t>( ( count + 63u ) / 64u ) );
  for ( auto& in : v.inputs )
    for ( auto& w : in )
      w = rng();
  return v;
}

uint64_t mismatches( aig const& a, aig const& b, vectors const& v )
{
  auto const oa = evaluate( a, v.inputs ), ob = evaluate( b, v.inputs );
  uint64_t count = 0;
  for ( std::size_t o = 0; o < oa.size(); ++o )
    for ( std::size_t w = 0; w < oa[o].size(); ++w )
      count += std::popcount( ( oa[o][w] ^ ob[o][w] ) & v.mask( w ) );
  return count;
}

bool equivalent( aig const& a, aig const& b )
{
  if ( a.num_inputs() != b.num_inputs() || a.num_outputs() != b.num_outputs() )
    return false;
  auto const v = a.num_inputs() <= 16u ? all_vectors( a.num_inputs() ) : sampled_vectors( a.num_inputs(), 10000u, 1u );
  return mismatches( a, b, v ) == 0u;
}

double exhaustive_error( aig const& a, aig const& b )
{
  auto const v = all_vectors( a.num_inputs() );
  return static_cast<double>( mismatches( a, b, v ) ) / ( static_cast<double>( v.count ) * a.num_outputs() );
}

bool walk( decision_tree const& t, uint64_t x )
{
  uint32_t n = t.root();
  while ( !t.at( n ).is_leaf() )
    n = ( ( x >> t.at( n ).feature ) & 1u ) ? t.at( n ).high : t.at( n ).low;
  return t.at( n ).label;
}

/* minimum weighted error over every tree of depth <= d, by plain enumeration */
uint64_t brute_force_error( dataset const& data, std::vector<std::size_t> const& rows, uint32_t d )
{
  uint64_t pos = 0, neg = 0;
  for ( auto r : rows )
    ( data.label( r ) ? pos : neg ) += data.weight( r );
  auto best = std::min( pos, neg );
  if ( d == 0u || best == 0u )
    return best;
  for ( auto f = 0u; f < data.num_features; ++f )
  {
    std::vector<std::size_t> lo, hi;
    for ( auto r : rows )
      ( data.feature( r, f ) ? hi : lo ).push_back( r );
    best = std::min( best, brute_force_error( data, lo, d - 1u ) + brute_force_error( data, hi, d - 1u ) );
  }
  return best;
}

std::string circuit_path( char const* name ) { return test::data_path( "circuits" ).append( name ).string(); }

struct cli_run
{
  int code;
  std::string out;
  std::string err;
};

cli_run run_cli( std::vector<std::string> const& args )
{
  std::ostringstream out, err;
  auto const code = cli::run( args, out, err );
  return { code, out.str(), err.str() };
}

char const* const soundness_circuits[] = { "add8u.blif", "mul7u.blif", "c432.blif",
                                           "c499.blif",  "c880.blif",  "c1908.blif" };

/* ---- checks ---- */

verdict c17_sweep()
{
  verdict v;
  auto const c17 = test::load_circuit( "c17.blif" );

  /* reference function written out gate by gate */
  aig_builder b( 5u );
  auto nand = [&]( literal x, literal y ) { return !b.create_and( x, y ); };
  auto const g10 = nand( b.input( 0 ), b.input( 2 ) ), g11 = nand( b.input( 2 ), b.input( 3 ) );
  auto const g16 = nand( b.input( 1 ), g11 ), g19 = nand( g11, b.input( 4 ) );
  b.create_output( nand( g10, g16 ) );
  b.create_output( nand( g16, g19 ) );
  auto const reference = b.take();
  if ( !equivalent( c17, reference ) )
    v.fail( "C17 netlist differs from the gate-level reference" );

  double const expected[] = { 0.25, 0.125, 0.0625, 0.0 };
  auto const start = std::chrono::steady_clock::now();
  std::vector<approx_sub_circuit> approx;
  for ( auto md = 1u; md <= 4u; ++md )
    approx.push_back( approximate_network( c17, md ) );
  auto const seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();

  std::ostringstream d;
  for ( auto md = 1u; md <= 4u; ++md )
  {
    auto const q = exhaustive_error( reference, approx[md - 1u].circuit );
    d << "md" << md << "=" << q * 100.0 << "% ";
    if ( q != expected[md - 1u] )
      v.fail( "md" + std::to_string( md ) + " QoR " + std::to_string( q ) );
  }
  if ( approx[0].circuit.num_ands() != 0u )
    v.fail( "md1 is not a set of constants/wires" );
  if ( !equivalent( approx[3].circuit, reference ) )
    v.fail( "md4 is not equivalent to C17" );
  if ( seconds >= 1.0 )
    v.fail( "sweep took " + std::to_string( seconds ) + " s" );
  d << "md1 ANDs=" << approx[0].circuit.num_ands() << " time=" << seconds << "s";
  if ( v.pass )
    v.detail = d.str();
  return v;
}

verdict odt_optimality()
{
  verdict v;
  std::mt19937_64 rng( 2024u );
  auto count = 0u;
  for ( auto k = 0u; k < 240u; ++k )
  {
    auto const nf = 1u + static_cast<uint32_t>( rng() % 8u );
    auto const rows = 1u + rng() % 128u;
    auto const depth = static_cast<uint32_t>( rng() % 4u );
    auto const bias = rng() % 4u; /* skews labels toward one class */
    dataset data( nf, 0u );
    for ( std::size_t r = 0; r < rows; ++r )
    {
      std::vector<bool> x( nf );
      for ( auto f = 0u; f < nf; ++f )
        x[f] = rng() & 1u;
      bool const label = bias == 0u ? ( rng() & 1u ) : ( rng() % ( bias + 2u ) == 0u );
      data.push_row( x, label, k % 3u == 0u ? 1u + static_cast<uint32_t>( rng() % 3u ) : 1u );
    }
    std::vector<std::size_t> all( rows );
    for ( std::size_t r = 0; r < rows; ++r )
      all[r] = r;
    auto const oracle = brute_force_error( data, all, depth );
    auto const tree = fit_optimal( data, search_budget{ depth, {}, {} } );
    uint64_t err = 0;
    for ( std::size_t r = 0; r < rows; ++r )
    {
      uint64_t x = 0;
      for ( auto f = 0u; f < nf; ++f )
        x |= static_cast<uint64_t>( data.feature( r, f ) ) << f;
      if ( walk( tree, x ) != data.label( r ) )
        err += data.weight( r );
    }
    if ( tree.train_error != oracle || err != oracle || tree.depth() > depth || !tree.optimal )
      v.fail( "dataset " + std::to_string( k ) + ": error " + std::to_string( tree.train_error ) + " vs " +
              std::to_string( oracle ) );
    ++count;
  }
  if ( v.pass )
    v.detail = std::to_string( count ) + " random datasets match brute force";
  return v;
}

verdict tree_circuit_agreement()
{
  verdict v;
  std::vector<aig> circuits{ test::load_circuit( "c17.blif" ), test::load_circuit( "mul7u.blif" ) };
  for ( auto seed = 1u; seed <= 6u; ++seed )
    circuits.push_back( test::random_aig( 100u + seed, 6u + seed, 20u + 10u * seed, 1u + seed % 4u ) );
  for ( auto const& part : partition( test::load_circuit( "c432.blif" ) ) )
    if ( part.num_inputs() >= 8u )
      circuits.push_back( part.extracted );

  auto checked = 0u;
  for ( auto const& ntk : circuits )
  {
    auto const n = ntk.num_inputs();
    auto const all = all_vectors( n );
    auto const reference = evaluate( ntk, all.inputs );
    for ( auto md : { 1u, 2u, 3u, 5u } )
    {
      auto const approx = approximate_network( ntk, md );
      auto const got = evaluate( approx.circuit, all.inputs );
      uint64_t total = 0, oracle_errors = 0;
      for ( auto o = 0u; o < ntk.num_outputs(); ++o )
      {
        auto const& tree = approx.per_output_trees[o];
        auto const single = evaluate( tree_to_aig( tree, n ), all.inputs );
        for ( uint64_t x = 0; x < all.count; ++x )
        {
          bool const t = walk( tree, x );
          bool const c = ( single[0][x / 64u] >> ( x % 64u ) ) & 1u;
          bool const shared = ( got[o][x / 64u] >> ( x % 64u ) ) & 1u;
          bool const f = ( reference[o][x / 64u] >> ( x % 64u ) ) & 1u;
          if ( t != c || t != shared )
          {
            v.fail( "tree and circuit disagree at md" + std::to_string( md ) );
            break;
          }
          oracle_errors += t != f;
        }
        total += tree.train_error;
      }
      auto const q = qor_exhaustive( ntk, approx.circuit );
      double const expected = static_cast<double>( total ) / ( std::ldexp( 1.0, n ) * ntk.num_outputs() );
      if ( total != oracle_errors || q.mismatched_bits != total || q.error != expected )
        v.fail( "QoR " + std::to_string( q.error ) + " differs from summed tree errors " + std::to_string( expected ) );
      ++checked;
    }
  }
  if ( v.pass )
    v.detail = std::to_string( checked ) + " approximations over " + std::to_string( circuits.size() ) + " circuits";
  return v;
}

verdict depth_monotonicity()
{
  verdict v;
  for ( auto k = 0u; k < 50u; ++k )
  {
    auto const n = 3u + k % 8u;
    auto const ntk = test::random_aig( 500u + k, n, 10u + 3u * k % 60u, 1u + k % 5u );
    double prev = 1.0;
    for ( auto md = 1u; md <= n; ++md )
    {
      auto const q = exhaustive_error( ntk, approximate_network( ntk, md ).circuit );
      if ( q > prev )
        v.fail( "circuit " + std::to_string( k ) + ": QoR rises at md" + std::to_string( md ) );
      prev = q;
    }
    if ( prev != 0.0 )
      v.fail( "circuit " + std::to_string( k ) + " not exact at md = inputs" );
  }
  if ( v.pass )
    v.detail = "50 random circuits, QoR non-increasing and exact at md = inputs";
  return v;
}

verdict partition_soundness()
{
  verdict v;
  std::ostringstream d;
  for ( auto const* name : soundness_circuits )
  {
    auto const ntk = test::load_circuit( name );
    auto const parts = partition( ntk );

    std::vector<int> owner( ntk.num_nodes(), -1 );
    for ( std::size_t p = 0; p < parts.size(); ++p )
    {
      if ( parts[p].num_inputs() > 14u || parts[p].num_outputs() > 5u )
        v.fail( std::string( name ) + ": part exceeds interface limits" );
      for ( auto m : parts[p].members )
      {
        if ( !ntk.is_and( m ) || owner[m] != -1 )
          v.fail( std::string( name ) + ": overlapping or foreign member" );
        else
          owner[m] = static_cast<int>( p );
      }
    }
    for ( auto k = 0u; k < ntk.num_ands(); ++k )
      if ( owner[ntk.and_node( k )] == -1 )
        v.fail( std::string( name ) + ": AND node not covered" );

    /* quotient graph must be acyclic */
    std::vector<std::vector<std::size_t>> succ( parts.size() );
    for ( auto k = 0u; k < ntk.num_ands(); ++k )
    {
      auto const n = ntk.and_node( k );
      for ( auto f : ntk.fanins( n ) )
        if ( ntk.is_and( f.node() ) && owner[f.node()] != owner[n] && owner[f.node()] >= 0 && owner[n] >= 0 )
          succ[owner[f.node()]].push_back( owner[n] );
    }
    std::vector<int> state( parts.size(), 0 );
    bool cyclic = false;
    std::function<void( std::size_t )> dfs = [&]( std::size_t p ) {
      state[p] = 1;
      for ( auto q : succ[p] )
      {
        if ( state[q] == 1 )
          cyclic = true;
        else if ( state[q] == 0 )
          dfs( q );
      }
      state[p] = 2;
    };
    for ( std::size_t p = 0; p < parts.size(); ++p )
      if ( state[p] == 0 )
        dfs( p );
    if ( cyclic )
      v.fail( std::string( name ) + ": cyclic quotient graph" );

    std::vector<region_replacement> identity;
    for ( auto const& p : parts )
      identity.push_back( { &p, &p.extracted } );
    if ( !equivalent( substitute( ntk, identity ), ntk ) )
      v.fail( std::string( name ) + ": identity recomposition changes the function" );
    d << name << ":" << parts.size() << " ";
  }
  if ( v.pass )
    v.detail = "parts " + d.str();
  return v;
}

verdict monte_carlo_accuracy()
{
  verdict v;
  struct pair
  {
    aig original;
    aig approx;
  };
  std::vector<pair> pairs;
  for ( auto k = 0u; k < 18u; ++k )
  {
    auto const ntk = test::random_aig( 900u + k, 8u + k % 7u, 40u + 5u * k, 1u + k % 5u );
    pairs.push_back( { ntk, approximate_network( ntk, 2u + k % 3u ).circuit } );
  }
  auto const mul7u = test::load_circuit( "mul7u.blif" );
  pairs.push_back( { mul7u, approximate_network( mul7u, 4u ).circuit } );
  auto const add8u = test::load_circuit( "add8u.blif" );
  synth_params wide;
  wide.max_table_inputs = 16u;
  pairs.push_back( { add8u, approximate_network( add8u, 5u, wide ).circuit } );
  pairs.push_back( { add8u, approximate_network( add8u, 3u, wide ).circuit } );

  auto worst = 100u;
  for ( auto const& [a, b] : pairs )
  {
    auto const p = exhaustive_error( a, b );
    auto const bound = 3.0 * std::sqrt( p * ( 1.0 - p ) / 10000.0 );
    auto within = 0u;
    for ( auto seed = 0u; seed < 100u; ++seed )
      within += std::abs( qor_monte_carlo( a, b, 10000u, seed ).error - p ) <= bound;
    worst = std::min( worst, within );
    if ( within < 99u )
      v.fail( "only " + std::to_string( within ) + "/100 seeds within 3 sigma" );
  }
  if ( v.pass )
    v.detail = std::to_string( pairs.size() ) + " pairs, worst " + std::to_string( worst ) + "/100 seeds within 3 sigma";
  return v;
}

verdict end_to_end()
{
  verdict v;
  std::ostringstream d;
  for ( auto const* name : { "add8u.blif", "mul7u.blif" } )
  {
    auto const ntk = test::load_circuit( name );
    auto prev = ntk.num_ands();
    d << name << " " << ntk.num_ands();
    for ( auto err : { 0.05, 0.10, 0.15 } )
    {
      exploration_params p;
      p.error_threshold = err;
      auto const r = explore( ntk, p );
      auto const q = exhaustive_error( ntk, r.circuit );
      auto const area = r.circuit.num_ands();
      d << "/" << area;
      if ( q > err )
        v.fail( std::string( name ) + ": QoR " + std::to_string( q ) + " above threshold" );
      if ( area >= ntk.num_ands() )
        v.fail( std::string( name ) + ": no area reduction at " + std::to_string( err ) );
      if ( area > prev )
        v.fail( std::string( name ) + ": area grows with the threshold" );
      prev = area;
    }
    d << " ";
  }
  if ( v.pass )
    v.detail = "ANDs original/5%/10%/15%: " + d.str();
  return v;
}

verdict learning_flow()
{
  verdict v;
  auto const dir = fs::temp_directory_path() / "treeals_acceptance_learn";
  fs::remove_all( dir );
  fs::create_directories( dir );
  std::ostringstream d;
  for ( auto const* name : { "cmp10", "add16_msb" } )
  {
    auto const base = ( test::data_path( "pla" ) / name ).string();
    auto const out = ( dir / ( std::string( name ) + ".aag" ) ).string();
    auto const r = run_cli( { "learn", "--train", base + ".train.pla", "--valid", base + ".valid.pla", "--test",
                              base + ".test.pla", "--depth", "2..4", "--out", out } );
    if ( r.code != 0 )
    {
      v.fail( std::string( name ) + ": exit code " + std::to_string( r.code ) + " " + r.err );
      continue;
    }
    auto const j = nlohmann::json::parse( r.out );
    auto const& sel = j["selected"];
    double const train = sel["train_accuracy"], test_acc = sel["test_accuracy"];

    /* oracle: majority-class accuracy counted from the files */
    auto const tr = read_pla( base + ".train.pla" ), te = read_pla( base + ".test.pla" );
    bool const majority = 2u * tr.labels.count() > tr.num_rows;
    auto const hits = majority ? te.labels.count() : te.num_rows - te.labels.count();
    double const constant = static_cast<double>( hits ) / te.num_rows;

    if ( !( train >= test_acc && test_acc >= constant ) )
      v.fail( std::string( name ) + ": accuracies out of order" );

    /* the written model must parse and reproduce the reported test accuracy */
    auto const model = parse_aiger( read_text_file( out ) );
    std::size_t correct = 0;
    for ( std::size_t row = 0; row < te.num_rows; ++row )
      correct += simulate( model, { te.row( row ) } )[0][0] == te.label( row );
    if ( static_cast<double>( correct ) / te.num_rows != test_acc )
      v.fail( std::string( name ) + ": written model disagrees with the report" );
    d << name << " train=" << train << " test=" << test_acc << " const=" << constant << " ";
  }
  fs::remove_all( dir );
  if ( v.pass )
    v.detail = d.str();
  return v;
}

verdict determinism()
{
  verdict v;
  auto const dir = fs::temp_directory_path() / "treeals_acceptance_det";

  /* report text plus every written file, in name order */
  auto capture = [&]( std::vector<std::string> args, std::string const& jobs ) {
    fs::remove_all( dir );
    fs::create_directories( dir );
    for ( auto& a : args )
      if ( a.starts_with( "@" ) )
        a = ( dir / a.substr( 1u ) ).string();
    args.insert( args.end(), { "--jobs", jobs } );
    auto const r = run_cli( args );
    std::map<std::string, std::string> files;
    for ( auto const& e : fs::recursive_directory_iterator( dir ) )
      if ( e.is_regular_file() )
        files[fs::relative( e.path(), dir ).string()] = read_text_file( e.path() );
    std::string blob = std::to_string( r.code ) + "\n" + r.out;
    for ( auto const& [f, text] : files )
      blob += "\n--" + f + "\n" + text;
    return std::make_pair( blob, files.size() );
  };

  std::vector<std::vector<std::string>> runs;
  runs.push_back( { "approximate", circuit_path( "c17.blif" ), "--whole-circuit", "--depth", "1..4", "--out", "@c17.aag" } );
  for ( auto const* name : soundness_circuits )
    runs.push_back( { "partition", circuit_path( name ), "--out-dir", "@parts" } );
  for ( auto const* name : { "add8u.blif", "mul7u.blif" } )
    for ( auto const* err : { "0.05", "0.10", "0.15" } )
      runs.push_back( { "approximate", circuit_path( name ), "--threshold", err, "--out", "@approx.aag", "--trace",
                        "@trace.csv" } );

  std::size_t files = 0;
  for ( auto const& args : runs )
  {
    auto const first = capture( args, "1" );
    auto const again = capture( args, "1" );
    auto const parallel = capture( args, "4" );
    if ( first.first != again.first || first.first != parallel.first )
      v.fail( args[0] + " " + args[1] + ": output differs between runs" );
    if ( first.second == 0u )
      v.fail( args[0] + " " + args[1] + ": nothing written" );
    files += first.second;
  }
  fs::remove_all( dir );
  if ( v.pass )
    v.detail = std::to_string( runs.size() ) + " commands, reports and " + std::to_string( files ) +
               " netlist/trace files identical over repeats and --jobs 1/4";
  return v;
}

} // namespace

int main()
{
  struct check
  {
    char const* name;
    verdict ( *fn )();
  };
  check const checks[] = { { "C17 whole-circuit depth sweep", c17_sweep },
                           { "optimal trees match brute force", odt_optimality },
                           { "trees, circuits and QoR agree", tree_circuit_agreement },
                           { "QoR is monotone in depth", depth_monotonicity },
                           { "partition soundness", partition_soundness },
                           { "Monte Carlo estimator accuracy", monte_carlo_accuracy },
                           { "adder and multiplier within thresholds", end_to_end },
                           { "learning flow on PLA cases", learning_flow },
                           { "deterministic reports and netlists", determinism } };

  auto failed = 0u;
  for ( auto const& c : checks )
  {
    verdict v;
    auto const start = std::chrono::steady_clock::now();
    try
    {
      v = c.fn();
    }
    catch ( std::exception const& e )
    {
      v.fail( std::string( "exception: " ) + e.what() );
    }
    auto const seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
    std::printf( "[%s] %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str(), seconds );
    std::fflush( stdout );
    failed += v.pass ? 0u : 1u;
  }
  return failed == 0u ? 0 : 1;
}
