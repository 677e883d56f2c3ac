#include "treeals/region.hpp"

#include "treeals/error.hpp"

#include <algorithm>
#include <limits>

namespace treeals
{

sub_circuit extract( aig const& ntk, std::span<uint32_t const> members_in, uint32_t id )
{
  sub_circuit sub;
  sub.id = id;
  sub.members.assign( members_in.begin(), members_in.end() );
  std::sort( sub.members.begin(), sub.members.end() );
  sub.members.erase( std::unique( sub.members.begin(), sub.members.end() ), sub.members.end() );

  std::vector<bool> inside( ntk.num_nodes(), false );
  for ( auto n : sub.members )
  {
    if ( !ntk.is_and( n ) )
      throw input_error( "region member " + std::to_string( n ) + " is not an AND node" );
    inside[n] = true;
  }

  std::vector<bool> is_input( ntk.num_nodes(), false );
  std::vector<bool> is_output( ntk.num_nodes(), false );
  for ( auto n = ntk.num_inputs() + 1u; n < ntk.num_nodes(); ++n )
  {
    for ( auto f : ntk.fanins( n ) )
    {
      if ( inside[n] && !inside[f.node()] && f.node() != 0u )
        is_input[f.node()] = true;
      if ( !inside[n] && inside[f.node()] )
        is_output[f.node()] = true;
    }
  }
  for ( auto f : ntk.outputs() )
    if ( inside[f.node()] )
      is_output[f.node()] = true;

  for ( auto n = 1u; n < ntk.num_nodes(); ++n )
  {
    if ( is_input[n] )
      sub.boundary_inputs.push_back( literal::make( n ) );
    if ( is_output[n] )
      sub.boundary_outputs.push_back( n );
  }

  aig_builder builder( sub.num_inputs() );
  std::vector<literal> map( ntk.num_nodes(), const0 );
  for ( auto i = 0u; i < sub.num_inputs(); ++i )
    map[sub.boundary_inputs[i].node()] = builder.input( i );
  for ( auto n : sub.members )
  {
    auto const& fi = ntk.fanins( n );
    map[n] = builder.create_and( map[fi[0].node()] ^ fi[0].is_complemented(),
                                 map[fi[1].node()] ^ fi[1].is_complemented() );
  }
  for ( auto n : sub.boundary_outputs )
    builder.create_output( map[n] );
  sub.extracted = cleanup( builder.take() );
  return sub;
}

aig substitute( aig const& ntk, std::span<region_replacement const> replacements )
{
  constexpr auto none = std::numeric_limits<uint32_t>::max();
  std::vector<uint32_t> owner( ntk.num_nodes(), none );
  for ( auto r = 0u; r < replacements.size(); ++r )
  {
    auto const& reg = *replacements[r].region;
    auto const& rep = *replacements[r].replacement;
    if ( rep.num_inputs() != reg.num_inputs() || rep.num_outputs() != reg.num_outputs() )
    {
      throw input_error( "replacement arity " + std::to_string( rep.num_inputs() ) + "/" +
                         std::to_string( rep.num_outputs() ) + " does not match region boundary " +
                         std::to_string( reg.num_inputs() ) + "/" + std::to_string( reg.num_outputs() ) );
    }
    for ( auto n : reg.members )
    {
      if ( n >= ntk.num_nodes() || !ntk.is_and( n ) )
        throw input_error( "region member outside of the circuit" );
      if ( owner[n] != none )
        throw input_error( "regions overlap" );
      owner[n] = r;
    }
  }

  aig_builder builder( ntk.num_inputs() );
  constexpr literal unset{ std::numeric_limits<uint32_t>::max() };
  std::vector<literal> map( ntk.num_nodes(), unset );
  for ( auto i = 0u; i <= ntk.num_inputs(); ++i )
    map[i] = literal::make( i );
  std::vector<uint8_t> region_state( replacements.size(), 0 ); /* 0 pending, 1 in progress, 2 done */

  auto instantiate = [&]( uint32_t r ) {
    auto const& reg = *replacements[r].region;
    auto const& rep = *replacements[r].replacement;
    std::vector<literal> rmap( rep.num_nodes() );
    rmap[0] = const0;
    for ( auto i = 0u; i < rep.num_inputs(); ++i )
      rmap[i + 1] = map[reg.boundary_inputs[i].node()];
    for ( auto n = rep.num_inputs() + 1u; n < rep.num_nodes(); ++n )
    {
      auto const& fi = rep.fanins( n );
      rmap[n] = builder.create_and( rmap[fi[0].node()] ^ fi[0].is_complemented(),
                                    rmap[fi[1].node()] ^ fi[1].is_complemented() );
    }
    for ( auto o = 0u; o < rep.num_outputs(); ++o )
    {
      auto const f = rep.output( o );
      map[reg.boundary_outputs[o]] = rmap[f.node()] ^ f.is_complemented();
    }
    region_state[r] = 2;
  };

  /* explicit-stack DFS; an entry is either a node or (for regions) the owning region */
  struct item
  {
    uint32_t node;
    bool expanded;
  };
  auto resolve = [&]( uint32_t root ) {
    std::vector<item> stack{ { root, false } };
    while ( !stack.empty() )
    {
      auto& top = stack.back();
      auto const n = top.node;
      if ( map[n] != unset )
      {
        stack.pop_back();
        continue;
      }
      auto const r = owner[n];
      if ( r != none )
      {
        auto const& reg = *replacements[r].region;
        if ( !std::binary_search( reg.boundary_outputs.begin(), reg.boundary_outputs.end(), n ) )
          throw input_error( "internal region node is read from outside its region" );
        if ( top.expanded )
        {
          instantiate( r );
          stack.pop_back();
          continue;
        }
        if ( region_state[r] == 1 )
          throw input_error( "regions form a combinational cycle" );
        top.expanded = true;
        region_state[r] = 1;
        for ( auto const& bi : reg.boundary_inputs )
          if ( map[bi.node()] == unset )
            stack.push_back( { bi.node(), false } );
        continue;
      }
      auto const& fi = ntk.fanins( n );
      if ( top.expanded )
      {
        map[n] = builder.create_and( map[fi[0].node()] ^ fi[0].is_complemented(),
                                     map[fi[1].node()] ^ fi[1].is_complemented() );
        stack.pop_back();
        continue;
      }
      top.expanded = true;
      for ( auto f : fi )
        if ( map[f.node()] == unset )
          stack.push_back( { f.node(), false } );
    }
  };

  for ( auto f : ntk.outputs() )
  {
    resolve( f.node() );
    builder.create_output( map[f.node()] ^ f.is_complemented() );
  }

  auto res = cleanup( builder.take() );
  res.set_name( ntk.name() );
  for ( auto i = 0u; i < ntk.num_inputs(); ++i )
    res.set_input_name( i, ntk.input_name( i ) );
  for ( auto i = 0u; i < ntk.num_outputs(); ++i )
    res.set_output_name( i, ntk.output_name( i ) );
  return res;
}

aig substitute( aig const& ntk, sub_circuit const& region, aig const& replacement )
{
  region_replacement const r{ &region, &replacement };
  return substitute( ntk, std::span<region_replacement const>( &r, 1 ) );
}

} /* namespace treeals */
