#include "treeals/partition.hpp"

#include "treeals/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>
#include <set>

namespace treeals
{

namespace
{

using node_list = std::vector<uint32_t>;

/* Kahn order of a quotient graph given as successor sets; ties broken by the smaller key */
std::vector<uint32_t> topological_order( std::vector<std::set<uint32_t>> const& succ,
                                         std::vector<uint32_t> const& key )
{
  auto const n = static_cast<uint32_t>( succ.size() );
  std::vector<uint32_t> indeg( n, 0u ), order;
  for ( auto const& s : succ )
    for ( auto j : s )
      ++indeg[j];
  auto cmp = [&]( uint32_t a, uint32_t b ) { return key[a] > key[b]; };
  std::priority_queue<uint32_t, std::vector<uint32_t>, decltype( cmp )> ready( cmp );
  for ( auto i = 0u; i < n; ++i )
    if ( indeg[i] == 0u )
      ready.push( i );
  while ( !ready.empty() )
  {
    auto const i = ready.top();
    ready.pop();
    order.push_back( i );
    for ( auto j : succ[i] )
      if ( --indeg[j] == 0u )
        ready.push( j );
  }
  return order; /* shorter than n if there is a cycle */
}

class partitioner
{
public:
  partitioner( aig const& ntk, partition_params const& ps )
      : ntk_( ntk ), ps_( ps ), fanouts_( ntk.num_nodes() ), is_po_( ntk.num_nodes(), false ),
        rank_( ntk.num_nodes(), 0u ), priority_( ntk.num_nodes() ), stamp_( ntk.num_nodes(), 0u ),
        seen_( ntk.num_nodes(), 0u ), local_( ntk.num_nodes(), 0u ), net_of_( ntk.num_nodes(), 0u )
  {
    for ( auto k = 0u; k < ntk.num_ands(); ++k )
    {
      auto const v = ntk.and_node( k );
      auto const [a, b] = ntk.fanins( v );
      fanouts_[a.node()].push_back( v );
      if ( b.node() != a.node() )
        fanouts_[b.node()].push_back( v );
    }
    for ( auto f : ntk.outputs() )
      is_po_[f.node()] = true;
    compute_ranks();

    std::iota( priority_.begin(), priority_.end(), 0u );
    std::mt19937_64 rng( ps.seed );
    std::shuffle( priority_.begin(), priority_.end(), rng );
  }

  std::vector<node_list> run()
  {
    std::vector<node_list> parts;
    for ( auto& comp : components() )
    {
      if ( fits( comp ) )
      {
        parts.push_back( std::move( comp ) );
        continue;
      }
      for ( auto& piece : split( comp, ps_.initial_parts ) )
        refine( std::move( piece ), parts );
    }
    order( parts );
    return parts;
  }

  std::pair<uint32_t, uint32_t> interface( node_list const& s )
  {
    auto const members = next_epoch();
    for ( auto v : s )
      stamp_[v] = members;
    auto const inputs_seen = next_epoch();
    uint32_t inputs = 0, outputs = 0;
    for ( auto v : s )
    {
      for ( auto f : ntk_.fanins( v ) )
      {
        auto const u = f.node();
        if ( u != 0u && stamp_[u] != members && seen_[u] != inputs_seen )
        {
          seen_[u] = inputs_seen;
          ++inputs;
        }
      }
      if ( is_po_[v] || std::any_of( fanouts_[v].begin(), fanouts_[v].end(),
                                     [&]( auto w ) { return stamp_[w] != members; } ) )
        ++outputs;
    }
    return { inputs, outputs };
  }

private:
  bool fits( node_list const& s )
  {
    auto const [in, out] = interface( s );
    return in <= ps_.max_inputs && out <= ps_.max_outputs;
  }

  uint32_t next_epoch() { return ++epoch_; }

  /* depth-first post-order from the outputs keeps cones together and is topological */
  void compute_ranks()
  {
    std::vector<bool> done( ntk_.num_nodes(), false );
    uint32_t next = 0;
    std::vector<std::pair<uint32_t, uint32_t>> stack;
    auto visit = [&]( uint32_t root ) {
      if ( !ntk_.is_and( root ) || done[root] )
        return;
      stack.emplace_back( root, 0u );
      while ( !stack.empty() )
      {
        auto& [v, child] = stack.back();
        if ( child < 2u )
        {
          auto const u = ntk_.fanins( v )[child++].node();
          if ( ntk_.is_and( u ) && !done[u] )
            stack.emplace_back( u, 0u );
          continue;
        }
        if ( !done[v] )
        {
          done[v] = true;
          rank_[v] = next++;
        }
        stack.pop_back();
      }
    };
    for ( auto f : ntk_.outputs() )
      visit( f.node() );
    for ( auto k = 0u; k < ntk_.num_ands(); ++k )
      visit( ntk_.and_node( k ) );
  }

  void sort_by_rank( node_list& s ) const
  {
    std::sort( s.begin(), s.end(), [&]( auto a, auto b ) { return rank_[a] < rank_[b]; } );
  }

  /* weakly connected components of the AND nodes, ordered by their first node */
  std::vector<node_list> components()
  {
    std::vector<uint32_t> parent( ntk_.num_nodes() );
    std::iota( parent.begin(), parent.end(), 0u );
    auto find = [&]( uint32_t x ) {
      while ( parent[x] != x )
        x = parent[x] = parent[parent[x]];
      return x;
    };
    for ( auto k = 0u; k < ntk_.num_ands(); ++k )
    {
      auto const v = ntk_.and_node( k );
      for ( auto f : ntk_.fanins( v ) )
        if ( ntk_.is_and( f.node() ) )
          parent[find( f.node() )] = find( v );
    }
    std::vector<node_list> comps;
    std::vector<uint32_t> index( ntk_.num_nodes(), ~0u );
    node_list all;
    for ( auto k = 0u; k < ntk_.num_ands(); ++k )
      all.push_back( ntk_.and_node( k ) );
    sort_by_rank( all );
    for ( auto v : all )
    {
      auto const r = find( v );
      if ( index[r] == ~0u )
      {
        index[r] = static_cast<uint32_t>( comps.size() );
        comps.emplace_back();
      }
      comps[index[r]].push_back( v );
    }
    return comps;
  }

  std::vector<node_list> split( node_list const& s, uint32_t num_parts )
  {
    if ( num_parts <= 1u || s.size() < 2u )
      return { s };
    auto const left = num_parts / 2u;
    auto [a, b] = bisect( s, static_cast<double>( left ) / num_parts );
    auto res = split( a, left );
    for ( auto& p : split( b, num_parts - left ) )
      res.push_back( std::move( p ) );
    return res;
  }

  void refine( node_list s, std::vector<node_list>& out )
  {
    if ( fits( s ) )
    {
      out.push_back( std::move( s ) );
      return;
    }
    if ( s.size() == 1u )
      throw input_error( "AND node " + std::to_string( s[0] ) + " alone exceeds the sub-circuit interface limits" );
    auto [a, b] = bisect( s, 0.5 );
    refine( std::move( a ), out );
    refine( std::move( b ), out );
  }

  /* Splits `s` (rank ordered) into a front part feeding a back part; the front holds about ratio * |s| nodes. */
  std::pair<node_list, node_list> bisect( node_list const& s, double ratio )
  {
    auto const n = static_cast<uint32_t>( s.size() );
    auto const members = next_epoch();
    for ( auto i = 0u; i < n; ++i )
    {
      stamp_[s[i]] = members;
      local_[s[i]] = i;
    }

    /* nets: every signal with at least two pins (driver and readers) inside s */
    std::vector<node_list> net_pins;
    std::vector<node_list> vertex_nets( n ), local_fanins( n ), local_fanouts( n );
    auto const nets_epoch = next_epoch();
    auto pin = [&]( uint32_t signal, uint32_t vertex ) {
      if ( seen_[signal] != nets_epoch )
      {
        seen_[signal] = nets_epoch;
        net_of_[signal] = static_cast<uint32_t>( net_pins.size() );
        net_pins.emplace_back();
      }
      net_pins[net_of_[signal]].push_back( vertex );
    };
    for ( auto i = 0u; i < n; ++i )
    {
      auto const v = s[i];
      pin( v, i );
      auto const [a, b] = ntk_.fanins( v );
      for ( auto k = 0u; k < 2u; ++k )
      {
        auto const u = k == 0u ? a.node() : b.node();
        if ( u == 0u || ( k == 1u && u == a.node() ) )
          continue;
        pin( u, i );
        if ( stamp_[u] == members )
        {
          local_fanins[i].push_back( local_[u] );
          local_fanouts[local_[u]].push_back( i );
        }
      }
    }
    for ( uint32_t e = 0; e < net_pins.size(); ++e )
    {
      auto& pins = net_pins[e];
      std::sort( pins.begin(), pins.end() );
      pins.erase( std::unique( pins.begin(), pins.end() ), pins.end() );
      if ( pins.size() >= 2u )
        for ( auto i : pins )
          vertex_nets[i].push_back( e );
    }

    auto const target = ratio * n;
    auto const slack = ps_.balance_tolerance * n;
    auto const lo = static_cast<uint32_t>( std::clamp( std::floor( target - slack ), 1.0, n - 1.0 ) );
    auto const hi = static_cast<uint32_t>( std::clamp( std::ceil( target + slack ), 1.0, n - 1.0 ) );
    auto front = static_cast<uint32_t>( std::clamp( std::round( target ), 1.0, n - 1.0 ) );

    std::vector<uint8_t> side( n );
    for ( auto i = 0u; i < n; ++i )
      side[i] = i < front ? 0u : 1u;
    std::vector<std::array<uint32_t, 2>> count( net_pins.size(), { 0u, 0u } );
    for ( uint32_t e = 0; e < net_pins.size(); ++e )
      if ( net_pins[e].size() >= 2u )
        for ( auto i : net_pins[e] )
          ++count[e][side[i]];

    auto move = [&]( uint32_t i ) {
      auto const from = side[i];
      for ( auto e : vertex_nets[i] )
      {
        --count[e][from];
        ++count[e][from ^ 1u];
      }
      side[i] ^= 1u;
      front = from == 0u ? front - 1u : front + 1u;
    };
    auto legal = [&]( uint32_t i ) {
      if ( side[i] == 0u )
        return std::all_of( local_fanouts[i].begin(), local_fanouts[i].end(), [&]( auto j ) { return side[j] == 1u; } );
      return std::all_of( local_fanins[i].begin(), local_fanins[i].end(), [&]( auto j ) { return side[j] == 0u; } );
    };
    auto gain = [&]( uint32_t i ) {
      int g = 0;
      auto const from = side[i];
      for ( auto e : vertex_nets[i] )
      {
        if ( count[e][from] == 1u )
          ++g;
        if ( count[e][from ^ 1u] == 0u )
          --g;
      }
      return g;
    };

    std::vector<bool> locked( n );
    std::vector<uint32_t> moves;
    for ( auto pass = 0u; pass < max_passes; ++pass )
    {
      std::fill( locked.begin(), locked.end(), false );
      moves.clear();
      int cumulative = 0, best = 0;
      std::size_t best_len = 0;
      while ( true )
      {
        int best_gain = 0;
        uint32_t pick = n;
        for ( auto i = 0u; i < n; ++i )
        {
          if ( locked[i] )
            continue;
          auto const after = side[i] == 0u ? front - 1u : front + 1u;
          if ( after < lo || after > hi || !legal( i ) )
            continue;
          auto const g = gain( i );
          if ( pick == n || g > best_gain || ( g == best_gain && priority_[s[i]] < priority_[s[pick]] ) )
          {
            pick = i;
            best_gain = g;
          }
        }
        if ( pick == n )
          break;
        move( pick );
        locked[pick] = true;
        moves.push_back( pick );
        cumulative += best_gain;
        if ( cumulative > best )
        {
          best = cumulative;
          best_len = moves.size();
        }
      }
      while ( moves.size() > best_len )
      {
        move( moves.back() );
        moves.pop_back();
      }
      if ( best <= 0 )
        break;
    }

    std::pair<node_list, node_list> res;
    for ( auto i = 0u; i < n; ++i )
      ( side[i] == 0u ? res.first : res.second ).push_back( s[i] );
    return res;
  }

  /* topological order of the parts, ties by smallest rank */
  void order( std::vector<node_list>& parts )
  {
    auto const succ = quotient( parts );
    std::vector<uint32_t> key( parts.size() );
    for ( uint32_t i = 0; i < parts.size(); ++i )
      key[i] = rank_[parts[i].front()];
    std::vector<node_list> ordered;
    for ( auto i : topological_order( succ, key ) )
      ordered.push_back( std::move( parts[i] ) );
    parts = std::move( ordered );
  }

  std::vector<std::set<uint32_t>> quotient( std::vector<node_list> const& parts )
  {
    std::vector<uint32_t> owner( ntk_.num_nodes(), ~0u );
    for ( uint32_t p = 0; p < parts.size(); ++p )
      for ( auto v : parts[p] )
        owner[v] = p;
    std::vector<std::set<uint32_t>> succ( parts.size() );
    for ( uint32_t p = 0; p < parts.size(); ++p )
      for ( auto v : parts[p] )
        for ( auto w : fanouts_[v] )
          if ( owner[w] != p && owner[w] != ~0u )
            succ[p].insert( owner[w] );
    return succ;
  }

  static constexpr uint32_t max_passes = 8u;

  aig const& ntk_;
  partition_params ps_;
  std::vector<node_list> fanouts_;
  std::vector<bool> is_po_;
  std::vector<uint32_t> rank_;
  std::vector<uint32_t> priority_;
  std::vector<uint32_t> stamp_, seen_, local_, net_of_;
  uint32_t epoch_{ 0 };
};

std::vector<uint32_t> owners( aig const& ntk, std::vector<sub_circuit> const& parts )
{
  std::vector<uint32_t> owner( ntk.num_nodes(), ~0u );
  for ( uint32_t p = 0; p < parts.size(); ++p )
    for ( auto v : parts[p].members )
      owner[v] = p;
  return owner;
}

} // namespace

std::vector<sub_circuit> partition( aig const& ntk, partition_params const& params )
{
  if ( params.max_inputs < 1u || params.max_outputs < 1u )
    throw input_error( "sub-circuit interface limits must be at least 1" );
  if ( params.initial_parts < 2u )
    throw input_error( "the initial number of parts must be at least 2" );
  if ( !( params.balance_tolerance >= 0.0 && params.balance_tolerance < 0.5 ) )
    throw input_error( "balance tolerance must lie in [0, 0.5)" );

  partitioner p( ntk, params );
  auto lists = p.run();
  std::vector<sub_circuit> parts;
  parts.reserve( lists.size() );
  for ( uint32_t i = 0; i < lists.size(); ++i )
  {
    std::sort( lists[i].begin(), lists[i].end() );
    parts.push_back( extract( ntk, lists[i], i ) );
  }
  return parts;
}

uint32_t cut_size( aig const& ntk, std::vector<sub_circuit> const& parts )
{
  auto const owner = owners( ntk, parts );
  std::vector<bool> cut( ntk.num_nodes(), false );
  for ( uint32_t p = 0; p < parts.size(); ++p )
    for ( auto v : parts[p].members )
      for ( auto f : ntk.fanins( v ) )
        if ( ntk.is_and( f.node() ) && owner[f.node()] != p )
          cut[f.node()] = true;
  return static_cast<uint32_t>( std::count( cut.begin(), cut.end(), true ) );
}

bool is_valid_partition( aig const& ntk, std::vector<sub_circuit> const& parts )
{
  std::vector<uint32_t> owner( ntk.num_nodes(), ~0u );
  for ( uint32_t p = 0; p < parts.size(); ++p )
  {
    for ( auto v : parts[p].members )
    {
      if ( !ntk.is_and( v ) || owner[v] != ~0u )
        return false;
      owner[v] = p;
    }
  }
  for ( auto k = 0u; k < ntk.num_ands(); ++k )
    if ( owner[ntk.and_node( k )] == ~0u )
      return false;

  std::vector<std::set<uint32_t>> succ( parts.size() );
  for ( uint32_t p = 0; p < parts.size(); ++p )
    for ( auto v : parts[p].members )
      for ( auto f : ntk.fanins( v ) )
        if ( ntk.is_and( f.node() ) && owner[f.node()] != p )
          succ[owner[f.node()]].insert( p );
  std::vector<uint32_t> key( parts.size() );
  std::iota( key.begin(), key.end(), 0u );
  return topological_order( succ, key ).size() == parts.size();
}

} /* namespace treeals */
