#include "treeals/explore.hpp"

#include "treeals/error.hpp"
#include "treeals/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <utility>

namespace treeals
{

void validate( exploration_params const& params )
{
  if ( !( params.error_threshold >= 0.0 && params.error_threshold <= 1.0 ) )
    throw input_error( "error threshold must lie in [0, 1]" );
  if ( params.initial_max_depth < 1u )
    throw input_error( "initial maximum depth must be at least 1" );
  if ( params.step < 1u )
    throw input_error( "step must be at least 1" );
  if ( params.beam_width < 1u )
    throw input_error( "beam width must be at least 1" );
  if ( params.qor_samples < 1u )
    throw input_error( "number of QoR samples must be at least 1" );
}

double loss( uint32_t candidate_area, uint32_t original_area, double candidate_qor )
{
  auto const diff = static_cast<double>( candidate_area ) - static_cast<double>( original_area );
  if ( candidate_qor == 0.0 )
    return candidate_area < original_area ? -std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::infinity();
  return diff / candidate_qor;
}

namespace
{

using clock_type = std::chrono::steady_clock;

synth_params part_synth_params( exploration_params const& params )
{
  synth_params sp;
  sp.max_table_inputs = std::max( default_max_table_inputs, params.partition.max_inputs );
  return sp;
}

/* approximations keyed by (part, stream depth); the initial one is learned at md0 and keyed by its recorded depth */
class approximation_cache
{
public:
  approximation_cache( std::vector<sub_circuit> const& parts, exploration_params const& params )
      : parts_( parts ), params_( params ), synth_( part_synth_params( params ) ), initial_depth_( parts.size(), 0u )
  {
  }

  /* learns the md0 approximations of the given parts */
  void initialize( std::vector<uint32_t> const& which )
  {
    std::vector<approx_sub_circuit> res( which.size() );
    parallel_for( which.size(), params_.jobs, [&]( std::size_t k ) {
      res[k] = approximate_sub_circuit( parts_[which[k]], params_.initial_max_depth, synth_ );
    } );
    for ( std::size_t k = 0; k < which.size(); ++k )
    {
      initial_depth_[which[k]] = res[k].md;
      cache_.emplace( std::make_pair( which[k], res[k].md ), std::move( res[k] ) );
    }
  }

  uint32_t initial_depth( uint32_t part ) const { return initial_depth_[part]; }

  /* learns all missing (part, depth) approximations */
  void require( std::vector<std::pair<uint32_t, uint32_t>> keys )
  {
    std::sort( keys.begin(), keys.end() );
    keys.erase( std::unique( keys.begin(), keys.end() ), keys.end() );
    std::erase_if( keys, [&]( auto const& k ) { return cache_.count( k ) != 0u; } );
    std::vector<approx_sub_circuit> res( keys.size() );
    parallel_for( keys.size(), params_.jobs, [&]( std::size_t k ) {
      res[k] = approximate_sub_circuit( parts_[keys[k].first], keys[k].second, synth_ );
    } );
    for ( std::size_t k = 0; k < keys.size(); ++k )
      cache_.emplace( keys[k], std::move( res[k] ) );
  }

  approx_sub_circuit const& at( uint32_t part, uint32_t md ) const { return cache_.at( { part, md } ); }

private:
  std::vector<sub_circuit> const& parts_;
  exploration_params const& params_;
  synth_params synth_;
  std::vector<uint32_t> initial_depth_;
  std::map<std::pair<uint32_t, uint32_t>, approx_sub_circuit> cache_;
};

aig compose( aig const& base, std::vector<sub_circuit> const& parts, approximation_cache const& cache,
             std::vector<uint32_t> const& applied )
{
  std::vector<region_replacement> repl;
  for ( auto i = 0u; i < parts.size(); ++i )
    if ( applied[i] != 0u )
      repl.push_back( { &parts[i], &cache.at( i, applied[i] ).circuit } );
  if ( repl.empty() )
    return base;
  return substitute( base, repl );
}

struct state
{
  uint32_t id{ 0 };
  std::vector<uint32_t> applied;
  std::vector<int64_t> stream;
  aig composed;
  uint32_t area{ 0 };
};

struct candidate
{
  uint32_t parent{ 0 };
  uint32_t part{ 0 };
  aig composed;
  uint32_t area{ 0 };
  double qor{ 0.0 };
  double loss{ 0.0 };
};

qor_report final_measure( aig const& base, aig const& approx, exploration_params const& params )
{
  if ( base.num_inputs() <= max_exhaustive_qor_inputs )
    return qor_exhaustive( base, approx );
  return qor_monte_carlo( base, approx, params.qor_samples, params.seed + 1u );
}

} // namespace

exploration_result explore( aig const& circuit, exploration_params const& params )
{
  validate( params );
  auto const start = clock_type::now();

  exploration_result res;
  auto const base = cleanup( circuit );
  res.original_area = base.num_ands();
  res.parts = partition( base, params.partition );
  auto const& parts = res.parts;
  auto const num_parts = static_cast<uint32_t>( parts.size() );

  approximation_cache cache( parts, params );
  std::vector<uint32_t> all( num_parts );
  std::iota( all.begin(), all.end(), 0u );
  cache.initialize( all );

  auto const testbench = qor_testbench::monte_carlo( base, params.qor_samples, params.seed );

  state root;
  root.applied.assign( num_parts, 0u );
  root.stream.resize( num_parts );
  for ( auto i = 0u; i < num_parts; ++i )
    root.stream[i] = cache.initial_depth( i );
  root.composed = base;
  root.area = base.num_ands();

  /* an approximation exists for the stream depth and is not applied yet */
  auto const available = [&]( state const& s, uint32_t i ) {
    auto const md = s.stream[i];
    if ( md < 1 || s.applied[i] == static_cast<uint32_t>( md ) )
      return false;
    return md > 1 || params.allow_depth_one || s.applied[i] == 0u;
  };

  struct accepted
  {
    uint32_t id;
    uint32_t area;
    std::vector<uint32_t> applied;
  };
  std::vector<accepted> history{ { 0u, root.area, root.applied } };
  std::vector<state> beam;
  beam.push_back( std::move( root ) );
  uint32_t next_id = 1u;

  while ( true )
  {
    if ( params.time_limit && clock_type::now() - start >= *params.time_limit )
    {
      res.budget_exhausted = true;
      break;
    }

    std::vector<std::pair<uint32_t, uint32_t>> keys;
    std::vector<candidate> cands;
    for ( auto b = 0u; b < beam.size(); ++b )
      for ( auto i = 0u; i < num_parts; ++i )
        if ( available( beam[b], i ) )
        {
          keys.emplace_back( i, static_cast<uint32_t>( beam[b].stream[i] ) );
          cands.push_back( candidate{ b, i, {}, 0u, 0.0, 0.0 } );
        }
    if ( cands.empty() )
      break;
    cache.require( keys );

    parallel_for( cands.size(), params.jobs, [&]( std::size_t k ) {
      auto& c = cands[k];
      auto const& parent = beam[c.parent];
      auto applied = parent.applied;
      applied[c.part] = static_cast<uint32_t>( parent.stream[c.part] );
      c.composed = compose( base, parts, cache, applied );
      c.area = c.composed.num_ands();
      c.qor = testbench.measure( c.composed ).error;
      c.loss = loss( c.area, res.original_area, c.qor );
    } );

    /* +inf losses (no error, no area gain) sort after every finite loss and only fill spare beam slots */
    std::erase_if( cands, [&]( candidate const& c ) { return c.qor > params.error_threshold; } );
    std::stable_sort( cands.begin(), cands.end(), []( candidate const& a, candidate const& b ) {
      return std::tie( a.loss, a.parent, a.part ) < std::tie( b.loss, b.parent, b.part );
    } );

    std::vector<state> next;
    std::set<std::pair<std::vector<uint32_t>, std::vector<int64_t>>> seen;
    for ( auto& c : cands )
    {
      if ( next.size() >= params.beam_width )
        break;
      auto const& parent = beam[c.parent];
      state s;
      s.applied = parent.applied;
      s.stream = parent.stream;
      auto const md = static_cast<uint32_t>( s.stream[c.part] );
      s.applied[c.part] = md;
      s.stream[c.part] -= params.step;
      if ( !seen.emplace( s.applied, s.stream ).second )
        continue;
      s.id = next_id++;
      s.composed = std::move( c.composed );
      s.area = c.area;
      res.trace.push_back( trace_record{ res.iterations, s.id, parent.id, c.part, md, c.loss, s.area, c.qor } );
      history.push_back( { s.id, s.area, s.applied } );
      next.push_back( std::move( s ) );
    }
    if ( next.empty() )
      break;
    beam = std::move( next );
    ++res.iterations;
  }

  /* smallest accepted state that passes the independent re-measurement; the original always does */
  std::stable_sort( history.begin(), history.end(),
                    []( accepted const& a, accepted const& b ) { return std::tie( a.area, a.id ) < std::tie( b.area, b.id ); } );
  for ( auto const& h : history )
  {
    auto composed = compose( base, parts, cache, h.applied );
    auto report = final_measure( base, composed, params );
    if ( report.error <= params.error_threshold || h.id == 0u )
    {
      res.circuit = std::move( composed );
      res.qor = report;
      res.area = res.circuit.num_ands();
      res.final_state = h.id;
      res.applied_depths = h.applied;
      break;
    }
  }

  uint64_t depth_sum = 0, num_trees = 0;
  for ( auto i = 0u; i < num_parts; ++i )
    if ( res.applied_depths[i] != 0u )
      for ( auto const& t : cache.at( i, res.applied_depths[i] ).per_output_trees )
      {
        depth_sum += t.realized_depth;
        ++num_trees;
      }
  res.average_depth = num_trees ? static_cast<double>( depth_sum ) / static_cast<double>( num_trees ) : 0.0;
  return res;
}

aig replay( aig const& circuit, exploration_params const& params, std::vector<trace_record> const& trace,
            uint32_t state_id )
{
  validate( params );
  auto const base = cleanup( circuit );
  auto const parts = partition( base, params.partition );

  std::map<uint32_t, trace_record const*> by_id;
  for ( auto const& r : trace )
    by_id[r.state_id] = &r;

  /* walk back to the original; the latest substitution of a part wins */
  std::vector<uint32_t> applied( parts.size(), 0u );
  for ( auto id = state_id; id != 0u; )
  {
    auto const it = by_id.find( id );
    if ( it == by_id.end() )
      throw input_error( "trace has no record for state " + std::to_string( id ) );
    auto const& r = *it->second;
    if ( r.part >= parts.size() )
      throw input_error( "trace refers to part " + std::to_string( r.part ) + " but the circuit has " +
                         std::to_string( parts.size() ) + " parts" );
    if ( applied[r.part] == 0u )
      applied[r.part] = r.md;
    if ( r.parent_id >= id )
      throw input_error( "trace record " + std::to_string( id ) + " has a non-decreasing parent" );
    id = r.parent_id;
  }

  approximation_cache cache( parts, params );
  std::vector<uint32_t> used;
  for ( auto i = 0u; i < parts.size(); ++i )
    if ( applied[i] != 0u )
      used.push_back( i );
  cache.initialize( used );
  std::vector<std::pair<uint32_t, uint32_t>> keys;
  for ( auto i : used )
    if ( applied[i] != cache.initial_depth( i ) )
      keys.emplace_back( i, applied[i] );
  cache.require( keys );
  return compose( base, parts, cache, applied );
}

namespace
{

std::string format_double( double v )
{
  if ( std::isinf( v ) )
    return v < 0 ? "-inf" : "inf";
  char buf[64];
  auto const [ptr, ec] = std::to_chars( buf, buf + sizeof( buf ), v );
  return std::string( buf, ptr );
}

} // namespace

void write_trace_csv( std::ostream& os, std::vector<trace_record> const& trace )
{
  os << "iteration,state_id,parent_id,part,md,loss,area,qor\n";
  for ( auto const& r : trace )
    os << r.iteration << ',' << r.state_id << ',' << r.parent_id << ',' << r.part << ',' << r.md << ','
       << format_double( r.loss ) << ',' << r.area << ',' << format_double( r.qor ) << '\n';
}

void write_trace_jsonl( std::ostream& os, std::vector<trace_record> const& trace )
{
  for ( auto const& r : trace )
  {
    nlohmann::ordered_json j;
    j["iteration"] = r.iteration;
    j["state_id"] = r.state_id;
    j["parent_id"] = r.parent_id;
    j["part"] = r.part;
    j["md"] = r.md;
    if ( std::isinf( r.loss ) )
      j["loss"] = format_double( r.loss );
    else
      j["loss"] = r.loss;
    j["area"] = r.area;
    j["qor"] = r.qor;
    os << j.dump() << '\n';
  }
}

} /* namespace treeals */
