#include <treeals/explore.hpp>
#include <treeals/io.hpp>
#include <treeals/partition.hpp>
#include <treeals/qor.hpp>
#include <treeals/simulate.hpp>

#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>

using namespace treeals;

namespace
{

aig load( std::string const& name )
{
  return read_netlist( std::filesystem::path( TREEALS_DATA_DIR ) / "circuits" / name );
}

} // namespace

static void BM_simulate_random( benchmark::State& state )
{
  auto const ntk = load( "c1908.blif" );
  auto const in = random_patterns( ntk.num_inputs(), static_cast<std::size_t>( state.range( 0 ) ), 1u );
  for ( auto _ : state )
    benchmark::DoNotOptimize( simulate_patterns( ntk, in ) );
  state.SetItemsProcessed( state.iterations() * state.range( 0 ) );
}
BENCHMARK( BM_simulate_random )->Arg( 1 << 10 )->Arg( 1 << 14 );

static void BM_qor_exhaustive( benchmark::State& state )
{
  auto const ntk = load( "add8u.blif" );
  for ( auto _ : state )
    benchmark::DoNotOptimize( qor_exhaustive( ntk, ntk ).error );
}
BENCHMARK( BM_qor_exhaustive )->Unit( benchmark::kMicrosecond );

static void BM_partition( benchmark::State& state )
{
  char const* const names[] = { "c432.blif", "c880.blif", "c1908.blif" };
  auto const ntk = load( names[state.range( 0 )] );
  for ( auto _ : state )
    benchmark::DoNotOptimize( partition( ntk ).size() );
  state.SetLabel( names[state.range( 0 )] );
}
BENCHMARK( BM_partition )->DenseRange( 0, 2 )->Unit( benchmark::kMillisecond );

static void BM_explore( benchmark::State& state )
{
  auto const ntk = load( state.range( 0 ) == 0 ? "add8u.blif" : "mul7u.blif" );
  exploration_params params;
  params.error_threshold = 0.05;
  for ( auto _ : state )
    benchmark::DoNotOptimize( explore( ntk, params ).area );
}
BENCHMARK( BM_explore )->DenseRange( 0, 1 )->Unit( benchmark::kMillisecond )->Iterations( 1 );

BENCHMARK_MAIN();
