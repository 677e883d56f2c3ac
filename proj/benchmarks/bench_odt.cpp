#include <treeals/dataset.hpp>
#include <treeals/io.hpp>
#include <treeals/odt.hpp>
#include <treeals/partition.hpp>

#include <benchmark/benchmark.h>

#include <algorithm>
#include <filesystem>
#include <random>

using namespace treeals;

namespace
{

dataset random_dataset( uint32_t num_features, std::size_t num_rows, uint64_t seed )
{
  std::mt19937_64 rng( seed );
  dataset data( num_features, 0u );
  std::vector<bool> x( num_features );
  for ( std::size_t r = 0; r < num_rows; ++r )
  {
    for ( auto f = 0u; f < num_features; ++f )
      x[f] = rng() & 1u;
    /* a noisy threshold so the optimum is not trivial */
    data.push_row( x, ( x[0] && x[1] ) != ( x[2] || ( rng() % 8u == 0u ) ), 1u );
  }
  return data;
}

/* widest part of c432, a realistic truth-table workload */
dataset c432_part()
{
  auto const ntk = read_netlist( std::filesystem::path( TREEALS_DATA_DIR ) / "circuits" / "c432.blif" );
  auto const parts = partition( ntk );
  auto const widest = std::max_element( parts.begin(), parts.end(), []( auto const& a, auto const& b ) {
    return a.num_inputs() < b.num_inputs();
  } );
  return truth_table( widest->extracted, 0u );
}

} // namespace

static void BM_fit_random( benchmark::State& state )
{
  auto const data = random_dataset( 16u, 2048u, 1u );
  search_budget budget;
  budget.max_depth = static_cast<uint32_t>( state.range( 0 ) );
  for ( auto _ : state )
    benchmark::DoNotOptimize( fit_optimal( data, budget ).train_error );
}
BENCHMARK( BM_fit_random )->DenseRange( 2, 4 )->Unit( benchmark::kMillisecond );

static void BM_fit_truth_table( benchmark::State& state )
{
  auto const data = c432_part();
  search_budget budget;
  budget.max_depth = static_cast<uint32_t>( state.range( 0 ) );
  for ( auto _ : state )
    benchmark::DoNotOptimize( fit_optimal( data, budget ).train_error );
  state.SetLabel( std::to_string( data.num_features ) + " inputs" );
}
BENCHMARK( BM_fit_truth_table )->Arg( 3 )->Arg( 5 )->Arg( 7 )->Unit( benchmark::kMillisecond );

static void BM_fit_without_pair_counting( benchmark::State& state )
{
  auto const data = c432_part();
  search_budget budget;
  budget.max_depth = 5u;
  odt_params params;
  params.count_depth_two = false;
  for ( auto _ : state )
    benchmark::DoNotOptimize( fit_optimal( data, budget, params ).train_error );
}
BENCHMARK( BM_fit_without_pair_counting )->Unit( benchmark::kMillisecond );
