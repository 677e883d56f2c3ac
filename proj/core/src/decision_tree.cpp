#include "treeals/error.hpp"
#include "treeals/odt.hpp"

#include <algorithm>
#include <charconv>
#include <functional>

namespace treeals
{

decision_tree decision_tree::leaf( bool label )
{
  decision_tree t;
  t.nodes_[0].label = label;
  return t;
}

decision_tree decision_tree::branch( uint32_t feature, decision_tree const& low, decision_tree const& high )
{
  decision_tree t;
  auto const low_size = low.num_nodes();
  t.nodes_.reserve( 1u + low_size + high.num_nodes() );
  t.nodes_[0] = node{ static_cast<int32_t>( feature ), 1u, 1u + low_size, false };
  auto append = [&]( decision_tree const& sub, uint32_t offset ) {
    for ( auto n : sub.nodes_ )
    {
      if ( !n.is_leaf() )
      {
        n.low += offset;
        n.high += offset;
      }
      t.nodes_.push_back( n );
    }
  };
  append( low, 1u );
  append( high, 1u + low_size );
  t.num_features = std::max( { feature + 1u, low.num_features, high.num_features } );
  t.realized_depth = t.depth();
  return t;
}

uint32_t decision_tree::num_leaves() const
{
  return static_cast<uint32_t>( std::count_if( nodes_.begin(), nodes_.end(), []( auto const& n ) { return n.is_leaf(); } ) );
}

uint32_t decision_tree::depth() const
{
  std::function<uint32_t( uint32_t )> rec = [&]( uint32_t i ) -> uint32_t {
    auto const& n = nodes_[i];
    return n.is_leaf() ? 0u : 1u + std::max( rec( n.low ), rec( n.high ) );
  };
  return rec( 0u );
}

uint32_t decision_tree::min_num_features() const
{
  uint32_t m = 0;
  for ( auto const& n : nodes_ )
    if ( !n.is_leaf() )
      m = std::max( m, static_cast<uint32_t>( n.feature ) + 1u );
  return m;
}

std::string decision_tree::to_string() const
{
  std::string s;
  std::function<void( uint32_t )> rec = [&]( uint32_t i ) {
    auto const& n = nodes_[i];
    if ( n.is_leaf() )
    {
      s += n.label ? '1' : '0';
      return;
    }
    s += "(x" + std::to_string( n.feature ) + ' ';
    rec( n.low );
    s += ' ';
    rec( n.high );
    s += ')';
  };
  rec( 0u );
  return s;
}

decision_tree decision_tree::parse( std::string_view text )
{
  std::size_t pos = 0;
  auto skip = [&] {
    while ( pos < text.size() && ( text[pos] == ' ' || text[pos] == '\n' || text[pos] == '\t' ) )
      ++pos;
  };
  std::function<decision_tree()> rec = [&]() -> decision_tree {
    skip();
    if ( pos >= text.size() )
      throw parse_error( "unexpected end of tree expression" );
    if ( text[pos] == '0' || text[pos] == '1' )
      return leaf( text[pos++] == '1' );
    if ( text[pos] != '(' || pos + 1 >= text.size() || text[pos + 1] != 'x' )
      throw parse_error( "expected '0', '1' or '(x<feature> ...)' at offset " + std::to_string( pos ) );
    pos += 2;
    uint32_t f{};
    auto const [ptr, ec] = std::from_chars( text.data() + pos, text.data() + text.size(), f );
    if ( ec != std::errc{} )
      throw parse_error( "expected feature index at offset " + std::to_string( pos ) );
    pos = static_cast<std::size_t>( ptr - text.data() );
    auto lo = rec();
    auto hi = rec();
    skip();
    if ( pos >= text.size() || text[pos] != ')' )
      throw parse_error( "expected ')' at offset " + std::to_string( pos ) );
    ++pos;
    return branch( f, lo, hi );
  };
  auto t = rec();
  skip();
  if ( pos != text.size() )
    throw parse_error( "trailing characters after tree expression" );
  t.realized_depth = t.depth();
  return t;
}

bool predict( decision_tree const& tree, std::vector<bool> const& features )
{
  if ( features.size() != tree.num_features )
  {
    throw input_error( "feature vector has " + std::to_string( features.size() ) + " bits, tree expects " +
                       std::to_string( tree.num_features ) );
  }
  return tree.evaluate( [&]( uint32_t f ) { return features[f]; } );
}

uint64_t count_errors( decision_tree const& tree, dataset const& data )
{
  if ( tree.min_num_features() > data.num_features )
    throw input_error( "tree tests a feature the dataset does not have" );
  uint64_t errors = 0;
  for ( std::size_t r = 0; r < data.num_rows; ++r )
  {
    if ( tree.evaluate( [&]( uint32_t f ) { return data.feature( r, f ); } ) != data.label( r ) )
      errors += data.weight( r );
  }
  return errors;
}

decision_tree collapse_leaves( decision_tree const& tree )
{
  std::function<decision_tree( uint32_t )> rec = [&]( uint32_t i ) -> decision_tree {
    auto const& n = tree.at( i );
    if ( n.is_leaf() )
      return decision_tree::leaf( n.label );
    auto lo = rec( n.low );
    auto hi = rec( n.high );
    if ( lo.num_nodes() == 1u && hi.num_nodes() == 1u && lo.at( 0 ).label == hi.at( 0 ).label )
      return lo;
    return decision_tree::branch( static_cast<uint32_t>( n.feature ), lo, hi );
  };
  auto res = rec( 0u );
  res.num_features = tree.num_features;
  res.train_error = tree.train_error;
  res.optimal = tree.optimal;
  res.realized_depth = res.depth();
  return res;
}

} /* namespace treeals */
