#include "treeals/error.hpp"
#include "treeals/odt.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <limits>
#include <tuple>
#include <unordered_map>

namespace treeals
{

namespace
{

/* appends the bits of src selected by mask, in order, to dst (zero-initialized) */
template<typename Extract>
inline void gather_with( uint64_t const* src, uint64_t const* mask, std::size_t num_words, uint64_t* dst, Extract extract )
{
  std::size_t o = 0;
  for ( std::size_t w = 0; w < num_words; ++w )
  {
    auto const m = mask[w];
    if ( m == 0u )
      continue;
    auto const bits = extract( src[w], m );
    auto const shift = o & 63u;
    dst[o >> 6] |= bits << shift;
    auto const n = static_cast<std::size_t>( std::popcount( m ) );
    if ( shift != 0u && shift + n > 64u )
      dst[( o >> 6 ) + 1u] |= bits >> ( 64u - shift );
    o += n;
  }
}

inline uint64_t extract_portable( uint64_t x, uint64_t m )
{
  uint64_t r = 0;
  for ( uint64_t b = 1; m; m &= m - 1, b <<= 1 )
    if ( x & m & -m )
      r |= b;
  return r;
}

#if defined( __GNUC__ ) && defined( __x86_64__ )
__attribute__( ( target( "bmi2" ) ) ) void gather_bmi2( uint64_t const* src, uint64_t const* mask, std::size_t num_words,
                                                        uint64_t* dst )
{
  gather_with( src, mask, num_words, dst, []( uint64_t x, uint64_t m ) { return __builtin_ia32_pext_di( x, m ); } );
}

bool const has_bmi2 = __builtin_cpu_supports( "bmi2" );
#endif

void gather_bits( uint64_t const* src, uint64_t const* mask, std::size_t num_words, uint64_t* dst )
{
#if defined( __GNUC__ ) && defined( __x86_64__ )
  if ( has_bmi2 )
    return gather_bmi2( src, mask, num_words, dst );
#endif
  gather_with( src, mask, num_words, dst, extract_portable );
}

/* Rows of (a possibly compacted) dataset: feature columns followed by the label column. */
struct frame
{
  uint32_t num_features{ 0 };
  std::size_t num_rows{ 0 };
  std::size_t num_words{ 0 };
  std::vector<uint64_t> data;

  void reset( uint32_t features, std::size_t rows )
  {
    num_features = features;
    num_rows = rows;
    num_words = ( rows + 63 ) / 64;
    data.assign( ( features + 1u ) * num_words, 0u );
  }

  uint64_t const* column( uint32_t f ) const { return data.data() + f * num_words; }
  uint64_t* column( uint32_t f ) { return data.data() + f * num_words; }
  uint64_t const* labels() const { return column( num_features ); }
};

inline std::size_t count_and( uint64_t const* a, uint64_t const* b, std::size_t nw )
{
  std::size_t n = 0;
  for ( std::size_t w = 0; w < nw; ++w )
    n += std::popcount( a[w] & b[w] );
  return n;
}

struct solution
{
  uint64_t error{ 0 };
  uint32_t depth{ 0 };
  uint32_t nodes{ 1 };
  int32_t feature{ -1 };
  bool label{ false };
};

/* lexicographic (error, depth, nodes); equal candidates keep the earlier (smaller) feature */
inline bool better( solution const& a, solution const& b )
{
  return std::tie( a.error, a.depth, a.nodes ) < std::tie( b.error, b.depth, b.nodes );
}

inline solution leaf_solution( std::size_t count, std::size_t positives )
{
  auto const negatives = count - positives;
  solution s;
  s.label = positives > negatives;
  s.error = std::min( positives, negatives );
  return s;
}

struct entry
{
  solution sol;
  uint64_t lower_bound{ 0 };
  bool solved{ false };
};

/* itemset keys: bit 2f+v is set when the path tests feature f with value v */
struct small_key
{
  std::array<uint64_t, 2> words{};

  explicit small_key( uint32_t ) {}
  void set( uint32_t bit ) { words[bit >> 6] |= uint64_t{ 1 } << ( bit & 63 ); }
  void reset( uint32_t bit ) { words[bit >> 6] &= ~( uint64_t{ 1 } << ( bit & 63 ) ); }
  bool tested( uint32_t f ) const { return ( words[( 2 * f ) >> 6] >> ( ( 2 * f ) & 63 ) ) & 3u; }
  bool operator==( small_key const& ) const = default;
  std::size_t hash() const { return std::hash<uint64_t>{}( words[0] * 0x9e3779b97f4a7c15ull ^ words[1] ); }
};

struct wide_key
{
  std::vector<uint64_t> words;

  explicit wide_key( uint32_t num_features ) : words( ( 2 * num_features + 63 ) / 64, 0u ) {}
  void set( uint32_t bit ) { words[bit >> 6] |= uint64_t{ 1 } << ( bit & 63 ); }
  void reset( uint32_t bit ) { words[bit >> 6] &= ~( uint64_t{ 1 } << ( bit & 63 ) ); }
  bool tested( uint32_t f ) const { return ( words[( 2 * f ) >> 6] >> ( ( 2 * f ) & 63 ) ) & 3u; }
  bool operator==( wide_key const& ) const = default;
  std::size_t hash() const
  {
    std::size_t h = 0;
    for ( auto w : words )
      h = ( h ^ w ) * 0x9e3779b97f4a7c15ull;
    return h;
  }
};

template<class Key>
struct key_hash
{
  std::size_t operator()( Key const& k ) const { return k.hash(); }
};

template<class Key>
class dp_solver
{
public:
  dp_solver( dataset const& data, search_budget const& budget, odt_params const& params )
      : params_( params ), budget_( budget ), key_( data.num_features ),
        start_( std::chrono::steady_clock::now() )
  {
    load( data );
  }

  decision_tree run()
  {
    auto const depth = std::min( budget_.max_depth, root_.num_features );
    std::vector<uint64_t> ones( root_.num_words, ~uint64_t{ 0 } );
    if ( !ones.empty() && ( root_.num_rows & 63 ) )
      ones.back() = ( uint64_t{ 1 } << ( root_.num_rows & 63 ) ) - 1;
    auto const positives = count_and( ones.data(), root_.labels(), root_.num_words );

    /* buffers are addressed by recursion level; size them up front so references stay valid */
    mask_pool_.resize( 2u * depth + 4u );
    build_pool_.resize( 2u * depth + 4u );
    ones_pool_.resize( depth + 2u );
    frames_.resize( depth + 2u );
    tmp_pool_.resize( 2u );

    auto const best = solve( root_, ones.data(), root_.num_rows, positives, depth,
                             std::numeric_limits<uint64_t>::max(), 0u );
    auto tree = collapse_leaves( build( ones.data(), root_.num_rows, positives, depth, 0u ) );
    tree.num_features = root_.num_features;
    tree.optimal = !aborted_;
    tree.train_error = aborted_ ? recount( tree ) : best->error;
    tree.realized_depth = tree.depth();
    return tree;
  }

  odt_stats stats() const { return { explored_, cache_.size() }; }

private:
  void load( dataset const& data )
  {
    std::size_t rows = 0;
    for ( std::size_t r = 0; r < data.num_rows; ++r )
      rows += data.weight( r );
    root_.reset( data.num_features, rows );
    if ( data.weights.empty() )
    {
      for ( auto f = 0u; f < data.num_features; ++f )
        std::copy( data.features[f].words().begin(), data.features[f].words().end(), root_.column( f ) );
      std::copy( data.labels.words().begin(), data.labels.words().end(), root_.column( data.num_features ) );
      return;
    }
    /* integer weights are realized as repeated rows */
    std::size_t out = 0;
    for ( std::size_t r = 0; r < data.num_rows; ++r )
    {
      for ( uint32_t k = 0; k < data.weight( r ); ++k, ++out )
      {
        for ( auto f = 0u; f <= data.num_features; ++f )
        {
          bool const bit = f < data.num_features ? data.feature( r, f ) : data.label( r );
          if ( bit )
            root_.column( f )[out >> 6] |= uint64_t{ 1 } << ( out & 63 );
        }
      }
    }
  }

  uint64_t recount( decision_tree const& tree ) const
  {
    uint64_t errors = 0;
    for ( std::size_t r = 0; r < root_.num_rows; ++r )
    {
      auto bit = [&]( uint32_t f ) { return ( root_.column( f )[r >> 6] >> ( r & 63 ) ) & 1u; };
      if ( tree.evaluate( [&]( uint32_t f ) { return bit( f ) != 0u; } ) != ( bit( root_.num_features ) != 0u ) )
        ++errors;
    }
    return errors;
  }

  bool out_of_budget()
  {
    if ( aborted_ )
      return true;
    ++explored_;
    if ( budget_.node_limit && explored_ > *budget_.node_limit )
      aborted_ = true;
    else if ( budget_.time_limit && ( explored_ & 1023u ) == 0u &&
              std::chrono::steady_clock::now() - start_ > *budget_.time_limit )
      aborted_ = true;
    return aborted_;
  }

  bool small_level( uint32_t depth_left ) const { return params_.count_depth_two && depth_left <= 2u; }

  std::vector<uint64_t>& buffer( std::vector<std::vector<uint64_t>>& pool, uint32_t level, std::size_t nw )
  {
    if ( pool.size() <= level )
      pool.resize( level + 1u );
    pool[level].resize( nw );
    return pool[level];
  }

  uint64_t cached_lower_bound( uint32_t bit )
  {
    if ( !params_.memoize )
      return 0u;
    key_.set( bit );
    auto it = cache_.find( key_ );
    key_.reset( bit );
    if ( it == cache_.end() )
      return 0u;
    return it->second.solved ? it->second.sol.error : it->second.lower_bound;
  }

  /* rows of `fr` selected by `mask` as a new dense frame */
  void compact( frame const& fr, uint64_t const* mask, std::size_t count, frame& out )
  {
    out.reset( fr.num_features, count );
    for ( auto c = 0u; c <= fr.num_features; ++c )
      gather_bits( fr.column( c ), mask, fr.num_words, out.column( c ) );
  }

  /* best depth-1 subtree for the rows in `mask` (or a leaf) */
  solution best_stump( frame const& fr, uint64_t const* mask, std::size_t count, std::size_t positives )
  {
    auto best = leaf_solution( count, positives );
    if ( best.error == 0u )
      return best;
    auto& tmp = buffer( tmp_pool_, 0u, fr.num_words );
    for ( auto f = 0u; f < fr.num_features; ++f )
    {
      if ( key_.tested( f ) )
        continue;
      auto const* col = fr.column( f );
      for ( std::size_t w = 0; w < fr.num_words; ++w )
        tmp[w] = mask[w] & col[w];
      auto const n1 = count_and( tmp.data(), tmp.data(), fr.num_words );
      if ( n1 == 0u || n1 == count )
        continue;
      auto const p1 = count_and( tmp.data(), fr.labels(), fr.num_words );
      auto const l0 = leaf_solution( count - n1, positives - p1 );
      auto const l1 = leaf_solution( n1, p1 );
      solution cand{ l0.error + l1.error, 1u, 3u, static_cast<int32_t>( f ), false };
      if ( better( cand, best ) )
        best = cand;
      if ( best.error == 0u )
        break;
    }
    return best;
  }

  /* exact solution for at most two remaining levels from pairwise counts */
  solution solve_small( frame const& fr, uint64_t const* mask, std::size_t count, std::size_t positives,
                        uint32_t depth_left )
  {
    if ( depth_left == 1u )
      return best_stump( fr, mask, count, positives );

    auto const nf = fr.num_features;
    avail_.clear();
    for ( auto f = 0u; f < nf; ++f )
      if ( !key_.tested( f ) )
        avail_.push_back( f );
    auto const k = avail_.size();
    single_n_.assign( k, 0u );
    single_p_.assign( k, 0u );
    pair_n_.assign( k * k, 0u );
    pair_p_.assign( k * k, 0u );

    auto& a = buffer( tmp_pool_, 0u, fr.num_words );
    auto& al = buffer( tmp_pool_, 1u, fr.num_words );
    auto const* labels = fr.labels();
    for ( std::size_t i = 0; i < k; ++i )
    {
      auto const* col = fr.column( avail_[i] );
      for ( std::size_t w = 0; w < fr.num_words; ++w )
      {
        a[w] = mask[w] & col[w];
        al[w] = a[w] & labels[w];
      }
      single_n_[i] = count_and( a.data(), a.data(), fr.num_words );
      single_p_[i] = count_and( al.data(), al.data(), fr.num_words );
      for ( std::size_t j = i + 1; j < k; ++j )
      {
        auto const* col2 = fr.column( avail_[j] );
        pair_n_[i * k + j] = pair_n_[j * k + i] = count_and( a.data(), col2, fr.num_words );
        pair_p_[i * k + j] = pair_p_[j * k + i] = count_and( al.data(), col2, fr.num_words );
      }
    }

    auto best = leaf_solution( count, positives );
    if ( best.error == 0u )
      return best;
    for ( std::size_t i = 0; i < k; ++i )
    {
      auto const n1 = single_n_[i], p1 = single_p_[i];
      if ( n1 == 0u || n1 == count )
        continue;
      /* side s of feature i, best stump over the remaining features */
      auto side = [&]( bool s ) {
        auto const ns = s ? n1 : count - n1;
        auto const ps = s ? p1 : positives - p1;
        auto sb = leaf_solution( ns, ps );
        if ( sb.error == 0u )
          return sb;
        for ( std::size_t j = 0; j < k; ++j )
        {
          if ( j == i )
            continue;
          auto const n11 = pair_n_[i * k + j], p11 = pair_p_[i * k + j];
          /* rows with feature i == s and feature j == 1 */
          auto const nt = s ? n11 : single_n_[j] - n11;
          auto const pt = s ? p11 : single_p_[j] - p11;
          if ( nt == 0u || nt == ns )
            continue;
          auto const l1 = leaf_solution( nt, pt );
          auto const l0 = leaf_solution( ns - nt, ps - pt );
          solution cand{ l0.error + l1.error, 1u, 3u, static_cast<int32_t>( avail_[j] ), false };
          if ( better( cand, sb ) )
            sb = cand;
          if ( sb.error == 0u )
            break;
        }
        return sb;
      };
      auto const s0 = side( false );
      auto const s1 = side( true );
      solution cand{ s0.error + s1.error, 1u + std::max( s0.depth, s1.depth ), 1u + s0.nodes + s1.nodes,
                     static_cast<int32_t>( avail_[i] ), false };
      if ( better( cand, best ) )
        best = cand;
      if ( best.error == 0u && best.depth == 1u )
        break;
    }
    return best;
  }

  /* optimal solution with error <= ub, or nullopt if none exists */
  std::optional<solution> solve( frame const& fr, uint64_t const* mask, std::size_t count, std::size_t positives,
                                 uint32_t depth_left, uint64_t ub, uint32_t level )
  {
    auto const leaf = leaf_solution( count, positives );
    auto const within = [ub]( solution const& s ) -> std::optional<solution> {
      if ( s.error <= ub )
        return s;
      return std::nullopt;
    };
    if ( leaf.error == 0u || depth_left == 0u )
      return within( leaf );
    if ( out_of_budget() )
      return within( leaf );

    if ( small_level( depth_left ) )
    {
      /* exact regardless of the bound, so the result is always final */
      if ( params_.memoize )
      {
        if ( auto it = cache_.find( key_ ); it != cache_.end() && it->second.solved )
          return within( it->second.sol );
      }
      auto const sol = solve_small( fr, mask, count, positives, depth_left );
      if ( params_.memoize )
        cache_[key_] = entry{ sol, sol.error, true };
      return within( sol );
    }

    if ( params_.memoize )
    {
      if ( auto it = cache_.find( key_ ); it != cache_.end() )
      {
        if ( it->second.solved )
          return within( it->second.sol );
        if ( it->second.lower_bound > ub )
          return std::nullopt;
      }
    }

    auto best = leaf;
    auto& m0 = buffer( mask_pool_, 2u * level, fr.num_words );
    auto& m1 = buffer( mask_pool_, 2u * level + 1u, fr.num_words );
    auto const* labels = fr.labels();
    for ( auto f = 0u; f < fr.num_features; ++f )
    {
      if ( key_.tested( f ) )
        continue;
      auto const* col = fr.column( f );
      for ( std::size_t w = 0; w < fr.num_words; ++w )
      {
        m1[w] = mask[w] & col[w];
        m0[w] = mask[w] & ~col[w];
      }
      auto const n1 = count_and( m1.data(), m1.data(), fr.num_words );
      if ( n1 == 0u || n1 == count )
        continue;
      auto const n0 = count - n1;
      auto const p1 = count_and( m1.data(), labels, fr.num_words );
      auto const p0 = positives - p1;

      auto const bound = std::min( ub, best.error );
      auto const lb0 = cached_lower_bound( 2u * f );
      auto const lb1 = cached_lower_bound( 2u * f + 1u );
      if ( lb0 + lb1 > bound )
        continue;

      key_.set( 2u * f );
      auto const s0 = solve_child( fr, m0.data(), n0, p0, depth_left - 1u, bound - lb1, level + 1u );
      key_.reset( 2u * f );
      if ( !s0 || s0->error + lb1 > bound )
        continue;

      key_.set( 2u * f + 1u );
      auto const s1 = solve_child( fr, m1.data(), n1, p1, depth_left - 1u, bound - s0->error, level + 1u );
      key_.reset( 2u * f + 1u );
      if ( !s1 || s0->error + s1->error > bound )
        continue;

      solution cand{ s0->error + s1->error, 1u + std::max( s0->depth, s1->depth ), 1u + s0->nodes + s1->nodes,
                     static_cast<int32_t>( f ), false };
      if ( better( cand, best ) )
        best = cand;
      if ( best.error == 0u && best.depth == 1u )
        break;
    }

    /* the child searches may have rehashed the table */
    auto& slot = cache_[key_];
    if ( best.error <= ub )
    {
      if ( !slot.solved )
      {
        slot.sol = best;
        slot.solved = !aborted_;
      }
      return best;
    }
    slot.lower_bound = std::max( slot.lower_bound, ub + 1u );
    return std::nullopt;
  }

  /* recursion into a child, compacting the frame once the cover has shrunk enough */
  std::optional<solution> solve_child( frame const& fr, uint64_t const* mask, std::size_t count,
                                       std::size_t positives, uint32_t depth_left, uint64_t ub, uint32_t level )
  {
    if ( depth_left > 2u && fr.num_rows >= 512u && count * 4u <= fr.num_rows )
    {
      if ( params_.memoize && positives != 0u && positives != count )
      {
        if ( auto it = cache_.find( key_ ); it != cache_.end() )
        {
          if ( it->second.solved )
            return it->second.sol.error <= ub ? std::optional<solution>{ it->second.sol } : std::nullopt;
          if ( it->second.lower_bound > ub )
            return std::nullopt;
        }
      }
      auto& child = frames_[level];
      compact( fr, mask, count, child );
      auto& ones = buffer( ones_pool_, level, child.num_words );
      std::fill( ones.begin(), ones.end(), ~uint64_t{ 0 } );
      if ( count & 63 )
        ones.back() = ( uint64_t{ 1 } << ( count & 63 ) ) - 1;
      return solve( child, ones.data(), count, positives, depth_left, ub, level );
    }
    return solve( fr, mask, count, positives, depth_left, ub, level );
  }

  /* rebuilds the chosen tree over the root frame from cached decisions */
  decision_tree build( uint64_t const* mask, std::size_t count, std::size_t positives, uint32_t depth_left,
                       uint32_t level )
  {
    auto const leaf = leaf_solution( count, positives );
    if ( leaf.error == 0u || depth_left == 0u )
      return decision_tree::leaf( leaf.label );

    solution sol = leaf;
    if ( auto it = cache_.find( key_ ); it != cache_.end() && ( it->second.solved || aborted_ ) )
      sol = it->second.sol;
    else if ( small_level( depth_left ) )
      sol = solve_small( root_, mask, count, positives, depth_left );
    if ( sol.feature < 0 )
      return decision_tree::leaf( leaf.label );

    auto const f = static_cast<uint32_t>( sol.feature );
    auto& m0 = buffer( build_pool_, 2u * level, root_.num_words );
    auto& m1 = buffer( build_pool_, 2u * level + 1u, root_.num_words );
    auto const* col = root_.column( f );
    for ( std::size_t w = 0; w < root_.num_words; ++w )
    {
      m1[w] = mask[w] & col[w];
      m0[w] = mask[w] & ~col[w];
    }
    auto const n1 = count_and( m1.data(), m1.data(), root_.num_words );
    auto const p1 = count_and( m1.data(), root_.labels(), root_.num_words );

    key_.set( 2u * f );
    auto lo = build( m0.data(), count - n1, positives - p1, depth_left - 1u, level + 1u );
    key_.reset( 2u * f );
    key_.set( 2u * f + 1u );
    auto hi = build( m1.data(), n1, p1, depth_left - 1u, level + 1u );
    key_.reset( 2u * f + 1u );
    return decision_tree::branch( f, lo, hi );
  }

  odt_params params_;
  search_budget budget_;
  frame root_;
  Key key_;
  std::unordered_map<Key, entry, key_hash<Key>> cache_;
  std::vector<frame> frames_;
  std::vector<std::vector<uint64_t>> mask_pool_, ones_pool_, build_pool_, tmp_pool_;
  std::vector<uint32_t> avail_;
  std::vector<std::size_t> single_n_, single_p_, pair_n_, pair_p_;
  std::chrono::steady_clock::time_point start_;
  uint64_t explored_{ 0 };
  bool aborted_{ false };
};

template<class Key>
decision_tree run_solver( dataset const& data, search_budget const& budget, odt_params const& params,
                          odt_stats* stats )
{
  dp_solver<Key> solver( data, budget, params );
  auto tree = solver.run();
  if ( stats )
    *stats = solver.stats();
  return tree;
}

} // namespace

decision_tree fit_optimal( dataset const& data, search_budget const& budget, odt_params const& params,
                           odt_stats* stats )
{
  if ( data.num_rows == 0u )
    throw input_error( "cannot fit a decision tree on an empty dataset" );
  if ( data.num_features <= 64u )
    return run_solver<small_key>( data, budget, params, stats );
  return run_solver<wide_key>( data, budget, params, stats );
}

} /* namespace treeals */
