#include "treeals/cli.hpp"

#include <treeals/dataset.hpp>
#include <treeals/error.hpp>
#include <treeals/odt.hpp>
#include <treeals/parallel.hpp>
#include <treeals/synth.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <sstream>

namespace treeals::cli
{

namespace
{

std::string to_string( netlist_format f ) { return f == netlist_format::aiger ? "aiger" : "blif"; }

/* JSON has no infinities */
nlohmann::ordered_json number( double v )
{
  if ( std::isinf( v ) )
    return v < 0 ? "-inf" : "inf";
  return v;
}

double accuracy( decision_tree const& tree, dataset const& data )
{
  uint64_t total = 0;
  for ( std::size_t r = 0; r < data.num_rows; ++r )
    total += data.weight( r );
  if ( total == 0u )
    return 1.0;
  return 1.0 - static_cast<double>( count_errors( tree, data ) ) / static_cast<double>( total );
}

/* out.aag -> out.md3.aag */
std::filesystem::path with_depth_suffix( std::filesystem::path const& p, uint32_t md )
{
  auto res = p;
  res.replace_filename( p.stem().string() + ".md" + std::to_string( md ) + p.extension().string() );
  return res;
}

} // namespace

depth_range parse_depth_range( std::string const& text )
{
  auto const parse = [&]( std::string_view s ) {
    uint32_t v{};
    auto const [ptr, ec] = std::from_chars( s.data(), s.data() + s.size(), v );
    if ( s.empty() || ec != std::errc{} || ptr != s.data() + s.size() )
      throw input_error( "invalid depth range '" + text + "', expected a..b with non-negative integers" );
    return v;
  };
  depth_range r;
  if ( auto const pos = text.find( ".." ); pos != std::string::npos )
  {
    r.first = parse( std::string_view( text ).substr( 0, pos ) );
    r.last = parse( std::string_view( text ).substr( pos + 2u ) );
  }
  else
    r.first = r.last = parse( text );
  if ( r.first > r.last )
    throw input_error( "empty depth range '" + text + "'" );
  return r;
}

report to_json( qor_report const& q )
{
  report j;
  j["error"] = q.error;
  j["estimator"] = to_string( q.estimator );
  j["samples"] = q.samples;
  j["seed"] = q.seed;
  j["mismatched_bits"] = q.mismatched_bits;
  j["total_bits"] = q.total_bits;
  return j;
}

report to_json( exploration_params const& p )
{
  report j;
  j["threshold"] = p.error_threshold;
  j["initial_depth"] = p.initial_max_depth;
  j["step"] = p.step;
  j["beam"] = p.beam_width;
  j["samples"] = p.qor_samples;
  j["max_sub_inputs"] = p.partition.max_inputs;
  j["max_sub_outputs"] = p.partition.max_outputs;
  j["initial_parts"] = p.partition.initial_parts;
  j["allow_depth_one"] = p.allow_depth_one;
  if ( p.time_limit )
    j["time_limit_ms"] = p.time_limit->count();
  return j;
}

report learn( learn_options const& opts )
{
  auto const data = read_pla_triple( opts.train, opts.validation, opts.test );
  auto const nf = data.train.num_features;
  auto const count = opts.depths.last - opts.depths.first + 1u;

  std::vector<decision_tree> trees( count );
  parallel_for( count, opts.jobs, [&]( std::size_t k ) {
    trees[k] = fit_optimal( data.train, search_budget{ opts.depths.first + static_cast<uint32_t>( k ), {}, {} } );
  } );

  std::size_t best = 0;
  std::vector<double> valid_acc( count );
  for ( std::size_t k = 0; k < count; ++k )
  {
    valid_acc[k] = accuracy( trees[k], data.validation );
    if ( valid_acc[k] > valid_acc[best] )
      best = k;
  }

  report r;
  r["mode"] = "learn";
  r["seed"] = opts.seed;
  r["config"] = { { "train", opts.train.string() },
                  { "validation", opts.validation.string() },
                  { "test", opts.test.string() },
                  { "depths", { { "first", opts.depths.first }, { "last", opts.depths.last } } },
                  { "format", to_string( opts.format ) } };
  r["num_features"] = nf;

  auto results = report::array();
  std::vector<aig> circuits( count );
  for ( std::size_t k = 0; k < count; ++k )
  {
    circuits[k] = tree_to_aig( trees[k], nf );
    report e;
    e["depth"] = opts.depths.first + static_cast<uint32_t>( k );
    e["train_accuracy"] = accuracy( trees[k], data.train );
    e["validation_accuracy"] = valid_acc[k];
    e["test_accuracy"] = accuracy( trees[k], data.test );
    e["and_count"] = circuits[k].num_ands();
    e["realized_depth"] = trees[k].realized_depth;
    e["selected"] = k == best;
    results.push_back( std::move( e ) );
  }
  r["results"] = std::move( results );

  /* constant predictor of the training majority (ties predict 0) */
  uint64_t pos = 0, total = 0;
  for ( std::size_t row = 0; row < data.train.num_rows; ++row )
  {
    total += data.train.weight( row );
    pos += data.train.label( row ) ? data.train.weight( row ) : 0u;
  }
  auto constant = decision_tree::leaf( 2u * pos > total );
  constant.num_features = nf;
  r["constant_predictor"] = { { "label", 2u * pos > total }, { "test_accuracy", accuracy( constant, data.test ) } };

  auto selected = r["results"][best];
  selected["d_avg"] = static_cast<double>( trees[best].realized_depth );
  r["selected"] = std::move( selected );

  if ( opts.out )
  {
    auto circuit = circuits[best];
    circuit.set_output_name( 0u, "y" );
    write_netlist( circuit, *opts.out, opts.format );
  }
  return r;
}

report approximate( approximate_options const& opts )
{
  auto const ntk = read_netlist( opts.netlist );
  auto const& params = opts.exploration;
  validate( params );

  report r;
  r["mode"] = "approximate";
  r["seed"] = params.seed;
  r["config"] = { { "netlist", opts.netlist.string() },
                  { "whole_circuit", opts.whole_circuit },
                  { "format", to_string( opts.format ) },
                  { "exploration", to_json( params ) } };
  if ( opts.whole_circuit )
    r["config"]["depths"] = { { "first", opts.depths.first }, { "last", opts.depths.last } };
  r["original_and_count"] = cleanup( ntk ).num_ands();

  if ( opts.whole_circuit )
  {
    if ( opts.depths.first < 1u )
      throw input_error( "whole-circuit depths start at 1" );
    synth_params sp;
    sp.max_table_inputs = std::max( default_max_table_inputs, params.partition.max_inputs );
    sp.jobs = params.jobs;
    auto results = report::array();
    for ( auto md = opts.depths.first; md <= opts.depths.last; ++md )
    {
      auto const approx = approximate_network( ntk, md, sp );
      auto const q = ntk.num_inputs() <= max_exhaustive_qor_inputs
                         ? qor_exhaustive( ntk, approx.circuit )
                         : qor_monte_carlo( ntk, approx.circuit, params.qor_samples, params.seed );
      double depth_sum = 0.0;
      for ( auto const& t : approx.per_output_trees )
        depth_sum += t.realized_depth;
      report e;
      e["md"] = md;
      e["qor"] = q.error;
      e["estimator"] = to_string( q.estimator );
      e["mismatched_bits"] = q.mismatched_bits;
      e["total_bits"] = q.total_bits;
      e["and_count"] = approx.circuit.num_ands();
      e["d_avg"] = approx.per_output_trees.empty() ? 0.0 : depth_sum / approx.per_output_trees.size();
      e["exact"] = approx.exact;
      results.push_back( std::move( e ) );
      if ( opts.out )
        write_netlist( approx.circuit, with_depth_suffix( *opts.out, md ), opts.format );
    }
    r["results"] = std::move( results );
    r["budget_exhausted"] = false;
    return r;
  }

  auto const res = explore( ntk, params );
  auto results = report::array();
  for ( auto const& t : res.trace )
    results.push_back( { { "iteration", t.iteration },
                         { "state_id", t.state_id },
                         { "parent_id", t.parent_id },
                         { "part", t.part },
                         { "md", t.md },
                         { "loss", number( t.loss ) },
                         { "area", t.area },
                         { "qor", t.qor } } );
  r["results"] = std::move( results );
  r["final"] = { { "qor", to_json( res.qor ) },
                 { "and_count", res.area },
                 { "num_parts", res.parts.size() },
                 { "final_state", res.final_state },
                 { "iterations", res.iterations },
                 { "applied_depths", res.applied_depths },
                 { "d_avg", res.average_depth } };
  r["budget_exhausted"] = res.budget_exhausted;

  if ( opts.out )
    write_netlist( res.circuit, *opts.out, opts.format );
  if ( opts.trace )
  {
    std::ostringstream os;
    if ( opts.trace->extension() == ".jsonl" )
      write_trace_jsonl( os, res.trace );
    else
      write_trace_csv( os, res.trace );
    write_text_file( *opts.trace, os.str() );
  }
  return r;
}

report eval( eval_options const& opts )
{
  auto const original = read_netlist( opts.original );
  auto const approx = read_netlist( opts.approx );
  auto choice = opts.estimator;
  if ( choice == estimator_choice::automatic )
    choice = original.num_inputs() <= max_exhaustive_qor_inputs ? estimator_choice::exhaustive
                                                                 : estimator_choice::monte_carlo;
  auto const q = choice == estimator_choice::exhaustive ? qor_exhaustive( original, approx )
                                                        : qor_monte_carlo( original, approx, opts.samples, opts.seed );
  report r;
  r["mode"] = "eval";
  r["seed"] = opts.seed;
  r["config"] = { { "original", opts.original.string() },
                  { "approx", opts.approx.string() },
                  { "samples", opts.samples } };
  r["qor"] = to_json( q );
  return r;
}

report partition( partition_options const& opts )
{
  auto const ntk = cleanup( read_netlist( opts.netlist ) );
  auto const parts = treeals::partition( ntk, opts.params );

  report r;
  r["mode"] = "partition";
  r["seed"] = opts.params.seed;
  r["config"] = { { "netlist", opts.netlist.string() },
                  { "max_sub_inputs", opts.params.max_inputs },
                  { "max_sub_outputs", opts.params.max_outputs },
                  { "initial_parts", opts.params.initial_parts },
                  { "format", to_string( opts.format ) } };
  r["and_count"] = ntk.num_ands();
  r["num_parts"] = parts.size();
  r["cut_size"] = cut_size( ntk, parts );
  r["valid"] = is_valid_partition( ntk, parts );
  auto results = report::array();
  for ( auto const& p : parts )
    results.push_back( { { "part", p.id },
                         { "inputs", p.num_inputs() },
                         { "outputs", p.num_outputs() },
                         { "ands", p.members.size() } } );
  r["results"] = std::move( results );

  if ( opts.out_dir )
  {
    std::filesystem::create_directories( *opts.out_dir );
    auto const ext = opts.format == netlist_format::aiger ? ".aag" : ".blif";
    for ( auto const& p : parts )
      write_netlist( p.extracted, *opts.out_dir / ( "part" + std::to_string( p.id ) + ext ), opts.format );
  }
  return r;
}

std::string to_csv( report const& r )
{
  auto const mode = r.value( "mode", std::string{} );
  std::vector<std::string> columns;
  std::vector<report> rows;
  if ( mode == "learn" )
    columns = { "depth", "train_accuracy", "validation_accuracy", "test_accuracy", "and_count", "realized_depth",
                "selected" };
  else if ( mode == "approximate" && r["config"].value( "whole_circuit", false ) )
    columns = { "md", "qor", "estimator", "mismatched_bits", "total_bits", "and_count", "d_avg", "exact" };
  else if ( mode == "approximate" )
    columns = { "iteration", "state_id", "parent_id", "part", "md", "loss", "area", "qor" };
  else if ( mode == "partition" )
    columns = { "part", "inputs", "outputs", "ands" };
  else if ( mode == "eval" )
  {
    columns = { "estimator", "samples", "seed", "mismatched_bits", "total_bits", "error" };
    rows.push_back( r["qor"] );
  }
  else
    throw input_error( "report has no tabular form" );
  if ( r.contains( "results" ) )
    for ( auto const& e : r["results"] )
      rows.push_back( e );

  std::string s;
  for ( std::size_t c = 0; c < columns.size(); ++c )
    s += ( c ? "," : "" ) + columns[c];
  s += '\n';
  for ( auto const& row : rows )
  {
    for ( std::size_t c = 0; c < columns.size(); ++c )
    {
      auto const& v = row.at( columns[c] );
      s += ( c ? "," : "" ) + ( v.is_string() ? v.get<std::string>() : v.dump() );
    }
    s += '\n';
  }
  return s;
}

int run( std::vector<std::string> const& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Approximate logic synthesis with optimal decision trees", "treeals" };
  app.require_subcommand( 1 );

  std::string report_format = "json";
  std::optional<std::filesystem::path> report_file;
  std::string netlist_fmt = "aiger";
  uint64_t seed = 0;
  unsigned jobs = 1;
  bool timing = false;

  auto const common = [&]( CLI::App* sub, bool with_format ) {
    sub->add_option( "--report", report_format, "Report format" )->check( CLI::IsMember( { "json", "csv" } ) );
    sub->add_option( "--report-file", report_file, "Write the report here instead of stdout" );
    sub->add_option( "--seed", seed, "Seed of all randomness" );
    sub->add_option( "--jobs", jobs, "Worker threads" )->check( CLI::PositiveNumber );
    sub->add_flag( "--timing", timing, "Add wall-clock time to the report" );
    if ( with_format )
      sub->add_option( "--format", netlist_fmt, "Output netlist format" )->check( CLI::IsMember( { "aiger", "blif" } ) );
  };

  learn_options lo;
  std::string learn_depths = "2..10";
  auto* learn_cmd = app.add_subcommand( "learn", "Learn optimal trees from train/validation/test PLAs" );
  learn_cmd->add_option( "--train", lo.train, "Training PLA" )->required();
  learn_cmd->add_option( "--valid", lo.validation, "Validation PLA" )->required();
  learn_cmd->add_option( "--test", lo.test, "Test PLA" )->required();
  learn_cmd->add_option( "--depth", learn_depths, "Depth range a..b" );
  learn_cmd->add_option( "--out", lo.out, "Netlist of the selected model" );
  common( learn_cmd, true );

  approximate_options ao;
  std::string approx_depths = "1..4";
  std::optional<double> time_limit_s;
  auto& ep = ao.exploration;
  auto* approx_cmd = app.add_subcommand( "approximate", "Approximate a circuit within an error threshold" );
  approx_cmd->add_option( "netlist", ao.netlist, "Input .aag or .blif" )->required();
  approx_cmd->add_option( "--threshold", ep.error_threshold, "Maximum average bit error" );
  approx_cmd->add_option( "--initial-depth", ep.initial_max_depth, "Initial maximum tree depth" );
  approx_cmd->add_option( "--step", ep.step, "Depth decrement per substitution" );
  approx_cmd->add_option( "--beam", ep.beam_width, "Depth streams kept per iteration" );
  approx_cmd->add_option( "--samples", ep.qor_samples, "Monte Carlo vectors" );
  approx_cmd->add_option( "--max-sub-inputs", ep.partition.max_inputs, "Part input limit" );
  approx_cmd->add_option( "--max-sub-outputs", ep.partition.max_outputs, "Part output limit" );
  approx_cmd->add_option( "--initial-parts", ep.partition.initial_parts, "Parts of the first split" );
  approx_cmd->add_flag( "--allow-depth-one", ep.allow_depth_one, "Regenerate parts down to depth 1" );
  approx_cmd->add_option( "--time-limit", time_limit_s, "Exploration time budget in seconds" );
  approx_cmd->add_flag( "--whole-circuit", ao.whole_circuit, "Approximate the circuit as one part per depth" );
  approx_cmd->add_option( "--depth", approx_depths, "Depth range a..b for --whole-circuit" );
  approx_cmd->add_option( "--out", ao.out, "Approximate netlist" );
  approx_cmd->add_option( "--trace", ao.trace, "Exploration trace (.csv or .jsonl)" );
  common( approx_cmd, true );

  eval_options vo;
  std::string estimator = "auto";
  auto* eval_cmd = app.add_subcommand( "eval", "Average bit error of an approximation" );
  eval_cmd->add_option( "original", vo.original, "Reference netlist" )->required();
  eval_cmd->add_option( "approx", vo.approx, "Approximate netlist" )->required();
  eval_cmd->add_option( "--estimator", estimator, "QoR estimator" )
      ->check( CLI::IsMember( { "auto", "exhaustive", "monte-carlo" } ) );
  eval_cmd->add_option( "--samples", vo.samples, "Monte Carlo vectors" );
  common( eval_cmd, false );

  partition_options po;
  auto* part_cmd = app.add_subcommand( "partition", "Partition a circuit into bounded sub-circuits" );
  part_cmd->add_option( "netlist", po.netlist, "Input .aag or .blif" )->required();
  part_cmd->add_option( "--max-sub-inputs", po.params.max_inputs, "Part input limit" );
  part_cmd->add_option( "--max-sub-outputs", po.params.max_outputs, "Part output limit" );
  part_cmd->add_option( "--initial-parts", po.params.initial_parts, "Parts of the first split" );
  part_cmd->add_option( "--out-dir", po.out_dir, "Write each part's logic here" );
  common( part_cmd, true );

  try
  {
    std::vector<std::string> reversed( args.rbegin(), args.rend() );
    app.parse( reversed );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e, out, err );
    return code == 0 ? 0 : static_cast<int>( exit_code::input_error );
  }

  try
  {
    auto const start = std::chrono::steady_clock::now();
    auto const format = netlist_fmt == "aiger" ? netlist_format::aiger : netlist_format::blif;
    report r;
    bool exhausted = false;
    if ( *learn_cmd )
    {
      lo.depths = parse_depth_range( learn_depths );
      lo.format = format;
      lo.jobs = jobs;
      lo.seed = seed;
      r = learn( lo );
    }
    else if ( *approx_cmd )
    {
      ao.depths = parse_depth_range( approx_depths );
      ao.format = format;
      ep.seed = seed;
      ep.partition.seed = seed;
      ep.jobs = jobs;
      if ( time_limit_s )
      {
        if ( !( *time_limit_s >= 0.0 ) )
          throw input_error( "time limit must be non-negative" );
        ep.time_limit = std::chrono::milliseconds( static_cast<int64_t>( *time_limit_s * 1000.0 ) );
      }
      r = approximate( ao );
      exhausted = r.value( "budget_exhausted", false );
    }
    else if ( *eval_cmd )
    {
      vo.estimator = estimator == "auto"         ? estimator_choice::automatic
                     : estimator == "exhaustive" ? estimator_choice::exhaustive
                                                 : estimator_choice::monte_carlo;
      vo.seed = seed;
      r = eval( vo );
    }
    else
    {
      po.params.seed = seed;
      po.format = format;
      r = partition( po );
    }
    if ( timing )
      r["wall_clock_ms"] = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();

    auto const text = report_format == "csv" ? to_csv( r ) : r.dump( 2 ) + "\n";
    if ( report_file )
      write_text_file( *report_file, text );
    else
      out << text;
    return static_cast<int>( exhausted ? exit_code::budget_exceeded : exit_code::success );
  }
  catch ( budget_exceeded const& e )
  {
    err << "error: " << e.what() << '\n';
    return static_cast<int>( exit_code::budget_exceeded );
  }
  catch ( parse_error const& e )
  {
    err << "error: " << e.what() << '\n';
    return static_cast<int>( exit_code::input_error );
  }
  catch ( input_error const& e )
  {
    err << "error: " << e.what() << '\n';
    return static_cast<int>( exit_code::input_error );
  }
  catch ( std::exception const& e )
  {
    err << "error: " << e.what() << '\n';
    return static_cast<int>( exit_code::failure );
  }
}

} /* namespace treeals::cli */
