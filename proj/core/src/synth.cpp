#include "treeals/synth.hpp"

#include "treeals/dataset.hpp"
#include "treeals/error.hpp"
#include "treeals/parallel.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace treeals
{

literal build_tree( aig_builder& builder, decision_tree const& tree, std::span<literal const> inputs )
{
  if ( tree.min_num_features() > inputs.size() )
    throw input_error( "tree tests feature " + std::to_string( tree.min_num_features() - 1u ) + " but only " +
                       std::to_string( inputs.size() ) + " inputs are available" );
  std::function<literal( uint32_t )> rec = [&]( uint32_t i ) -> literal {
    auto const& n = tree.at( i );
    if ( n.is_leaf() )
      return n.label ? const1 : const0;
    auto const lo = rec( n.low );
    auto const hi = rec( n.high );
    return builder.create_mux( inputs[static_cast<uint32_t>( n.feature )], hi, lo );
  };
  return rec( tree.root() );
}

aig tree_to_aig( decision_tree const& tree, uint32_t num_inputs )
{
  aig_builder builder( num_inputs );
  std::vector<literal> inputs( num_inputs );
  for ( auto i = 0u; i < num_inputs; ++i )
    inputs[i] = builder.input( i );
  builder.create_output( build_tree( builder, tree, inputs ) );
  return cleanup( builder.take() );
}

uint64_t approx_sub_circuit::total_train_error() const
{
  return std::accumulate( per_output_trees.begin(), per_output_trees.end(), uint64_t{ 0 },
                          []( uint64_t acc, decision_tree const& t ) { return acc + t.train_error; } );
}

approx_sub_circuit approximate_network( aig const& ntk, uint32_t md, synth_params const& params )
{
  if ( md < 1u )
    throw input_error( "maximum depth must be at least 1" );
  auto const tables = truth_tables( ntk, params.max_table_inputs );

  approx_sub_circuit res;
  res.per_output_trees.resize( ntk.num_outputs() );
  search_budget const budget{ md, params.node_limit, params.time_limit };
  parallel_for( tables.size(), params.jobs, [&]( std::size_t o ) {
    res.per_output_trees[o] = fit_optimal( tables[o], budget, params.odt );
  } );

  aig_builder builder( ntk.num_inputs() );
  std::vector<literal> inputs( ntk.num_inputs() );
  for ( auto i = 0u; i < ntk.num_inputs(); ++i )
    inputs[i] = builder.input( i );
  for ( auto o = 0u; o < ntk.num_outputs(); ++o )
  {
    auto const& tree = res.per_output_trees[o];
    if ( !tree.optimal && params.require_optimal )
      throw budget_exceeded( "decision tree search for output " + std::to_string( o ) +
                             " hit its budget before proving optimality" );
    builder.create_output( build_tree( builder, tree, inputs ) );
  }
  res.circuit = cleanup( builder.take() );
  for ( auto i = 0u; i < ntk.num_inputs() && ntk.has_names(); ++i )
    res.circuit.set_input_name( i, ntk.input_name( i ) );
  for ( auto o = 0u; o < ntk.num_outputs() && ntk.has_names(); ++o )
    res.circuit.set_output_name( o, ntk.output_name( o ) );

  res.exact = std::all_of( res.per_output_trees.begin(), res.per_output_trees.end(),
                           []( auto const& t ) { return t.train_error == 0u; } );
  if ( res.exact )
  {
    auto realized = md;
    for ( auto const& t : res.per_output_trees )
      realized = std::min( realized, t.realized_depth );
    res.md = std::max( 1u, realized );
  }
  else
    res.md = md;
  return res;
}

approx_sub_circuit approximate_sub_circuit( sub_circuit const& sub, uint32_t md, synth_params const& params )
{
  auto res = approximate_network( sub.extracted, md, params );
  res.source_id = sub.id;
  return res;
}

} /* namespace treeals */
