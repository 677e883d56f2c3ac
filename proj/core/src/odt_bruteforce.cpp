#include "treeals/error.hpp"
#include "treeals/odt.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace treeals
{

namespace
{

struct leaf_counts
{
  uint64_t total{ 0 };
  uint64_t positive{ 0 };

  uint64_t error() const { return std::min( positive, total - positive ); }
  bool label() const { return positive > total - positive; }
};

} // namespace

decision_tree fit_bruteforce( dataset const& data, search_budget const& budget )
{
  if ( data.num_features > 10u || budget.max_depth > 3u )
    throw input_error( "brute-force search is limited to 10 features and depth 3" );
  if ( data.num_rows == 0u )
    throw input_error( "cannot fit a decision tree on an empty dataset" );

  auto const nf = data.num_features;
  auto const depth = std::min( budget.max_depth, nf );
  if ( depth == 0u )
  {
    leaf_counts c;
    for ( std::size_t r = 0; r < data.num_rows; ++r )
    {
      c.total += data.weight( r );
      c.positive += data.label( r ) ? data.weight( r ) : 0u;
    }
    auto t = decision_tree::leaf( c.label() );
    t.num_features = nf;
    t.train_error = c.error();
    return t;
  }

  /* complete trees in heap order: upper nodes are enumerated, each bottom node picks its best feature */
  auto const num_upper = ( 1u << ( depth - 1u ) ) - 1u;
  auto const num_bottom = 1u << ( depth - 1u );
  std::vector<uint32_t> upper( num_upper, 0u ), best_upper, best_bottom( num_bottom );
  std::vector<uint32_t> bottom( num_bottom );
  uint64_t best_error = std::numeric_limits<uint64_t>::max();
  std::vector<leaf_counts> counts( num_bottom * nf * 2u );

  while ( true )
  {
    std::fill( counts.begin(), counts.end(), leaf_counts{} );
    for ( std::size_t r = 0; r < data.num_rows; ++r )
    {
      uint32_t n = 0;
      while ( n < num_upper )
        n = 2u * n + ( data.feature( r, upper[n] ) ? 2u : 1u );
      auto const b = n - num_upper;
      for ( auto f = 0u; f < nf; ++f )
      {
        auto& c = counts[( b * nf + f ) * 2u + ( data.feature( r, f ) ? 1u : 0u )];
        c.total += data.weight( r );
        c.positive += data.label( r ) ? data.weight( r ) : 0u;
      }
    }
    uint64_t error = 0;
    for ( auto b = 0u; b < num_bottom; ++b )
    {
      uint64_t node_best = std::numeric_limits<uint64_t>::max();
      for ( auto f = 0u; f < nf; ++f )
      {
        auto const e = counts[( b * nf + f ) * 2u].error() + counts[( b * nf + f ) * 2u + 1u].error();
        if ( e < node_best )
        {
          node_best = e;
          bottom[b] = f;
        }
      }
      error += node_best;
    }
    if ( error < best_error )
    {
      best_error = error;
      best_upper = upper;
      best_bottom = bottom;
    }

    /* next upper assignment (odometer) */
    uint32_t k = 0;
    while ( k < num_upper && ++upper[k] == nf )
      upper[k++] = 0u;
    if ( k == num_upper )
      break;
  }

  std::vector<uint32_t> heap( best_upper );
  heap.insert( heap.end(), best_bottom.begin(), best_bottom.end() );

  /* materialize, dropping tests already decided on the path, then recount the leaves */
  std::vector<int> path( nf, -1 );
  std::function<decision_tree( uint32_t )> rec = [&]( uint32_t n ) -> decision_tree {
    if ( n >= heap.size() )
    {
      leaf_counts c;
      for ( std::size_t r = 0; r < data.num_rows; ++r )
      {
        bool reaches = true;
        for ( auto f = 0u; f < nf && reaches; ++f )
          reaches = path[f] < 0 || data.feature( r, f ) == ( path[f] == 1 );
        if ( reaches )
        {
          c.total += data.weight( r );
          c.positive += data.label( r ) ? data.weight( r ) : 0u;
        }
      }
      return decision_tree::leaf( c.label() );
    }
    auto const f = heap[n];
    if ( path[f] >= 0 )
      return rec( 2u * n + 1u + static_cast<uint32_t>( path[f] ) );
    path[f] = 0;
    auto lo = rec( 2u * n + 1u );
    path[f] = 1;
    auto hi = rec( 2u * n + 2u );
    path[f] = -1;
    return decision_tree::branch( f, lo, hi );
  };
  auto tree = collapse_leaves( rec( 0u ) );
  tree.num_features = nf;
  tree.train_error = count_errors( tree, data );
  tree.realized_depth = tree.depth();
  tree.optimal = true;
  return tree;
}

} /* namespace treeals */
