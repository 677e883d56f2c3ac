#include "treeals/dataset.hpp"

#include "treeals/error.hpp"
#include "treeals/io.hpp"
#include "treeals/simulate.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>

namespace treeals
{

dataset::dataset( uint32_t num_features_, std::size_t num_rows_ )
    : num_features( num_features_ ), num_rows( num_rows_ ),
      features( num_features_, bit_vector( num_rows_ ) ), labels( num_rows_ )
{
}

std::vector<bool> dataset::row( std::size_t r ) const
{
  std::vector<bool> bits( num_features );
  for ( auto f = 0u; f < num_features; ++f )
    bits[f] = features[f].get( r );
  return bits;
}

void dataset::push_row( std::vector<bool> const& bits, bool label, uint32_t weight )
{
  if ( bits.size() != num_features )
    throw input_error( "row width does not match dataset feature count" );
  if ( weight == 0u )
    throw input_error( "row weights must be positive" );
  for ( auto f = 0u; f < num_features; ++f )
    features[f].push_back( bits[f] );
  labels.push_back( label );
  if ( weight != 1u || !weights.empty() )
  {
    weights.resize( num_rows, 1u );
    weights.push_back( weight );
  }
  ++num_rows;
}

namespace
{

void check_table_size( aig const& ntk, uint32_t max_inputs )
{
  if ( ntk.num_inputs() > max_inputs )
  {
    throw input_error( "circuit has " + std::to_string( ntk.num_inputs() ) +
                       " inputs, truth tables are limited to " + std::to_string( max_inputs ) +
                       "; partition the circuit first" );
  }
}

dataset table_skeleton( pattern_set const& inputs )
{
  dataset d( inputs.num_signals(), inputs.num_patterns() );
  for ( auto i = 0u; i < inputs.num_signals(); ++i )
  {
    auto const src = inputs.signal( i );
    std::copy( src.begin(), src.end(), d.features[i].words().begin() );
  }
  return d;
}

} // namespace

dataset truth_table( aig const& ntk, uint32_t output_index, uint32_t max_inputs )
{
  check_table_size( ntk, max_inputs );
  if ( output_index >= ntk.num_outputs() )
    throw input_error( "output index out of range" );
  auto const in = exhaustive_patterns( ntk.num_inputs() );
  auto const out = simulate_patterns( ntk, in );
  auto d = table_skeleton( in );
  auto const src = out.signal( output_index );
  std::copy( src.begin(), src.end(), d.labels.words().begin() );
  return d;
}

std::vector<dataset> truth_tables( aig const& ntk, uint32_t max_inputs )
{
  check_table_size( ntk, max_inputs );
  auto const in = exhaustive_patterns( ntk.num_inputs() );
  auto const out = simulate_patterns( ntk, in );
  std::vector<dataset> res;
  res.reserve( ntk.num_outputs() );
  auto const base = table_skeleton( in );
  for ( auto o = 0u; o < ntk.num_outputs(); ++o )
  {
    auto d = base;
    auto const src = out.signal( o );
    std::copy( src.begin(), src.end(), d.labels.words().begin() );
    res.push_back( std::move( d ) );
  }
  return res;
}

dataset parse_pla( std::string_view text )
{
  std::optional<uint32_t> num_in;
  std::optional<std::size_t> declared_rows;
  dataset d;
  bool ended = false;
  std::size_t line_no = 0, pos = 0;

  auto parse_count = [&]( std::string_view s ) {
    uint64_t v{};
    while ( !s.empty() && ( s.front() == ' ' || s.front() == '\t' ) )
      s.remove_prefix( 1 );
    while ( !s.empty() && ( s.back() == ' ' || s.back() == '\t' ) )
      s.remove_suffix( 1 );
    auto const [ptr, ec] = std::from_chars( s.data(), s.data() + s.size(), v );
    if ( ec != std::errc{} || ptr != s.data() + s.size() )
      throw parse_error( "expected a count", line_no );
    return v;
  };

  while ( pos < text.size() && !ended )
  {
    auto end = text.find( '\n', pos );
    if ( end == std::string_view::npos )
      end = text.size();
    auto line = text.substr( pos, end - pos );
    pos = end + 1;
    ++line_no;
    if ( auto hash = line.find( '#' ); hash != std::string_view::npos )
      line = line.substr( 0, hash );
    while ( !line.empty() && ( line.back() == '\r' || line.back() == ' ' || line.back() == '\t' ) )
      line.remove_suffix( 1 );
    while ( !line.empty() && ( line.front() == ' ' || line.front() == '\t' ) )
      line.remove_prefix( 1 );
    if ( line.empty() )
      continue;

    if ( line[0] == '.' )
    {
      auto const sp = line.find_first_of( " \t" );
      auto const key = line.substr( 0, sp );
      auto const arg = sp == std::string_view::npos ? std::string_view{} : line.substr( sp + 1 );
      if ( key == ".i" )
      {
        num_in = static_cast<uint32_t>( parse_count( arg ) );
        d = dataset( *num_in, 0 );
      }
      else if ( key == ".o" )
      {
        if ( parse_count( arg ) != 1 )
          throw parse_error( "only single-output PLA files are supported (.o 1)", line_no );
      }
      else if ( key == ".p" )
        declared_rows = parse_count( arg );
      else if ( key == ".type" || key == ".ilb" || key == ".ob" )
        continue;
      else if ( key == ".e" || key == ".end" )
        ended = true;
      else
        throw parse_error( "unsupported PLA directive '" + std::string( key ) + "'", line_no );
      continue;
    }

    if ( !num_in )
      throw parse_error( "PLA row before .i header", line_no );
    auto const sp = line.find_first_of( " \t" );
    if ( sp == std::string_view::npos )
      throw parse_error( "PLA row must be '<inputs> <output>'", line_no );
    auto const in_part = line.substr( 0, sp );
    auto out_part = line.substr( sp + 1 );
    while ( !out_part.empty() && ( out_part.front() == ' ' || out_part.front() == '\t' ) )
      out_part.remove_prefix( 1 );
    if ( in_part.size() != *num_in )
      throw parse_error( "row has " + std::to_string( in_part.size() ) + " input bits, expected " +
                             std::to_string( *num_in ),
                         line_no );
    if ( out_part.size() != 1 )
      throw parse_error( "row must have exactly one output bit", line_no );
    std::vector<bool> bits( *num_in );
    for ( std::size_t k = 0; k < in_part.size(); ++k )
    {
      if ( in_part[k] == '-' || in_part[k] == '~' || in_part[k] == '2' )
        throw parse_error( "don't-care input values are not supported", line_no );
      if ( in_part[k] != '0' && in_part[k] != '1' )
        throw parse_error( "invalid input character", line_no );
      bits[k] = in_part[k] == '1';
    }
    if ( out_part[0] != '0' && out_part[0] != '1' )
      throw parse_error( out_part[0] == '-' ? "don't-care output values are not supported" : "invalid output character",
                         line_no );
    d.push_row( bits, out_part[0] == '1' );
  }
  if ( !num_in )
    throw parse_error( "missing .i header" );
  if ( declared_rows && *declared_rows != d.num_rows )
    throw parse_error( ".p declares " + std::to_string( *declared_rows ) + " rows, found " +
                       std::to_string( d.num_rows ) );
  return d;
}

std::string write_pla( dataset const& data )
{
  if ( !data.weights.empty() )
    throw input_error( "weighted datasets cannot be written as PLA" );
  std::ostringstream os;
  os << ".i " << data.num_features << "\n.o 1\n.p " << data.num_rows << "\n.type fr\n";
  for ( std::size_t r = 0; r < data.num_rows; ++r )
  {
    for ( auto f = 0u; f < data.num_features; ++f )
      os << ( data.feature( r, f ) ? '1' : '0' );
    os << ' ' << ( data.label( r ) ? '1' : '0' ) << '\n';
  }
  os << ".e\n";
  return os.str();
}

std::string write_csv( dataset const& data )
{
  std::ostringstream os;
  for ( auto f = 0u; f < data.num_features; ++f )
    os << 'x' << f << ',';
  os << "y,weight\n";
  for ( std::size_t r = 0; r < data.num_rows; ++r )
  {
    for ( auto f = 0u; f < data.num_features; ++f )
      os << ( data.feature( r, f ) ? 1 : 0 ) << ',';
    os << ( data.label( r ) ? 1 : 0 ) << ',' << data.weight( r ) << '\n';
  }
  return os.str();
}

dataset read_pla( std::filesystem::path const& path )
{
  try
  {
    return parse_pla( read_text_file( path ) );
  }
  catch ( parse_error const& e )
  {
    throw parse_error( path.string() + ": " + e.what() );
  }
}

pla_triple read_pla_triple( std::filesystem::path const& train, std::filesystem::path const& validation,
                            std::filesystem::path const& test )
{
  pla_triple t{ read_pla( train ), read_pla( validation ), read_pla( test ) };
  if ( t.train.num_features != t.validation.num_features || t.train.num_features != t.test.num_features )
    throw input_error( "train/validation/test PLA files disagree on the number of inputs" );
  return t;
}

} /* namespace treeals */
