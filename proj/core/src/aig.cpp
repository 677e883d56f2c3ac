#include "treeals/aig.hpp"

#include "treeals/error.hpp"

#include <algorithm>
#include <utility>

namespace treeals
{

aig::aig( uint32_t num_inputs )
    : num_inputs_( num_inputs ), input_names_( num_inputs )
{
}

literal aig::add_and( literal a, literal b )
{
  auto const next = num_nodes();
  if ( a.node() >= next || b.node() >= next )
  {
    throw input_error( "AND fanin references an undefined node" );
  }
  ands_.push_back( { a, b } );
  return literal::make( next );
}

void aig::add_output( literal f, std::string name )
{
  if ( f.node() >= num_nodes() )
  {
    throw input_error( "output references an undefined node" );
  }
  outputs_.push_back( f );
  output_names_.push_back( std::move( name ) );
}

bool aig::has_names() const
{
  auto const non_empty = []( auto const& s ) { return !s.empty(); };
  return std::any_of( input_names_.begin(), input_names_.end(), non_empty ) ||
         std::any_of( output_names_.begin(), output_names_.end(), non_empty );
}

aig_builder::aig_builder( uint32_t num_inputs )
    : ntk_( num_inputs )
{
}

literal aig_builder::create_and( literal a, literal b )
{
  if ( a.value < b.value )
    std::swap( a, b );
  /* now a >= b */
  if ( b == const0 )
    return const0;
  if ( b == const1 )
    return a;
  if ( a == b )
    return a;
  if ( a == !b )
    return const0;

  auto const key = ( uint64_t{ a.value } << 32 ) | b.value;
  if ( auto it = table_.find( key ); it != table_.end() )
    return literal::make( it->second );

  auto const f = ntk_.add_and( a, b );
  table_.emplace( key, f.node() );
  return f;
}

literal aig_builder::create_xor( literal a, literal b )
{
  return create_or( create_and( a, !b ), create_and( !a, b ) );
}

literal aig_builder::create_mux( literal sel, literal then_, literal else_ )
{
  if ( then_ == else_ )
    return then_;
  return create_or( create_and( sel, then_ ), create_and( !sel, else_ ) );
}

std::vector<bool> reachable_nodes( aig const& ntk )
{
  std::vector<bool> mark( ntk.num_nodes(), false );
  for ( auto f : ntk.outputs() )
    mark[f.node()] = true;
  for ( auto n = ntk.num_nodes(); n-- > ntk.num_inputs() + 1u; )
  {
    if ( !mark[n] )
      continue;
    auto const& fi = ntk.fanins( n );
    mark[fi[0].node()] = true;
    mark[fi[1].node()] = true;
  }
  return mark;
}

std::vector<uint32_t> fanout_counts( aig const& ntk )
{
  std::vector<uint32_t> refs( ntk.num_nodes(), 0u );
  for ( auto const& fi : ntk.ands() )
  {
    ++refs[fi[0].node()];
    ++refs[fi[1].node()];
  }
  for ( auto f : ntk.outputs() )
    ++refs[f.node()];
  return refs;
}

namespace
{

aig copy_names_from( aig dest, aig const& src )
{
  dest.set_name( src.name() );
  for ( auto i = 0u; i < src.num_inputs(); ++i )
    dest.set_input_name( i, src.input_name( i ) );
  for ( auto i = 0u; i < src.num_outputs(); ++i )
    dest.set_output_name( i, src.output_name( i ) );
  return dest;
}

} // namespace

aig cleanup( aig const& ntk )
{
  auto const mark = reachable_nodes( ntk );
  aig res( ntk.num_inputs() );
  std::vector<literal> map( ntk.num_nodes() );
  for ( auto i = 0u; i <= ntk.num_inputs(); ++i )
    map[i] = literal::make( i );
  for ( auto n = ntk.num_inputs() + 1u; n < ntk.num_nodes(); ++n )
  {
    if ( !mark[n] )
      continue;
    auto const& fi = ntk.fanins( n );
    map[n] = res.add_and( map[fi[0].node()] ^ fi[0].is_complemented(),
                          map[fi[1].node()] ^ fi[1].is_complemented() );
  }
  for ( auto f : ntk.outputs() )
    res.add_output( map[f.node()] ^ f.is_complemented() );
  return copy_names_from( std::move( res ), ntk );
}

aig strash( aig const& ntk )
{
  auto const mark = reachable_nodes( ntk );
  aig_builder builder( ntk.num_inputs() );
  std::vector<literal> map( ntk.num_nodes() );
  for ( auto i = 0u; i <= ntk.num_inputs(); ++i )
    map[i] = literal::make( i );
  for ( auto n = ntk.num_inputs() + 1u; n < ntk.num_nodes(); ++n )
  {
    if ( !mark[n] )
      continue;
    auto const& fi = ntk.fanins( n );
    map[n] = builder.create_and( map[fi[0].node()] ^ fi[0].is_complemented(),
                                 map[fi[1].node()] ^ fi[1].is_complemented() );
  }
  for ( auto f : ntk.outputs() )
    builder.create_output( map[f.node()] ^ f.is_complemented() );
  /* hashing can leave earlier nodes dangling once constants propagate */
  return copy_names_from( cleanup( builder.take() ), ntk );
}

circuit_metrics metrics( aig const& ntk )
{
  auto const mark = reachable_nodes( ntk );
  std::vector<uint32_t> level( ntk.num_nodes(), 0u );
  circuit_metrics m;
  m.num_inputs = ntk.num_inputs();
  m.num_outputs = ntk.num_outputs();
  for ( auto n = ntk.num_inputs() + 1u; n < ntk.num_nodes(); ++n )
  {
    if ( !mark[n] )
      continue;
    ++m.and_count;
    auto const& fi = ntk.fanins( n );
    level[n] = 1u + std::max( level[fi[0].node()], level[fi[1].node()] );
  }
  for ( auto f : ntk.outputs() )
    m.level_depth = std::max( m.level_depth, level[f.node()] );
  return m;
}

} /* namespace treeals */
