#include "treeals/error.hpp"
#include "treeals/io.hpp"

#include <charconv>
#include <optional>
#include <sstream>
#include <vector>

namespace treeals
{

namespace
{

struct line_reader
{
  std::string_view text;
  std::size_t pos{ 0 };
  std::size_t line_no{ 0 };

  std::optional<std::string_view> next()
  {
    if ( pos >= text.size() )
      return std::nullopt;
    auto const end = text.find( '\n', pos );
    auto line = text.substr( pos, end == std::string_view::npos ? std::string_view::npos : end - pos );
    pos = end == std::string_view::npos ? text.size() : end + 1;
    ++line_no;
    if ( !line.empty() && line.back() == '\r' )
      line.remove_suffix( 1 );
    return line;
  }
};

std::vector<uint64_t> parse_numbers( std::string_view line, std::size_t line_no )
{
  std::vector<uint64_t> nums;
  std::size_t i = 0;
  while ( i < line.size() )
  {
    while ( i < line.size() && ( line[i] == ' ' || line[i] == '\t' ) )
      ++i;
    if ( i == line.size() )
      break;
    uint64_t v{};
    auto const [ptr, ec] = std::from_chars( line.data() + i, line.data() + line.size(), v );
    if ( ec != std::errc{} )
      throw parse_error( "expected unsigned integer", line_no );
    i = static_cast<std::size_t>( ptr - line.data() );
    if ( i < line.size() && line[i] != ' ' && line[i] != '\t' )
      throw parse_error( "unexpected character after integer", line_no );
    nums.push_back( v );
  }
  return nums;
}

} // namespace

aig parse_aiger( std::string_view text )
{
  line_reader in{ text };
  auto header = in.next();
  if ( !header || !header->starts_with( "aag" ) )
    throw parse_error( "missing 'aag' header", 1 );
  if ( header->size() > 3 && ( *header )[3] != ' ' )
    throw parse_error( "malformed header", 1 );

  auto const h = parse_numbers( header->substr( 3 ), 1 );
  if ( h.size() < 5 || h.size() > 9 )
    throw parse_error( "header must be 'aag M I L O A'", 1 );
  auto const max_var = h[0], num_in = h[1], num_latches = h[2], num_out = h[3], num_and = h[4];
  for ( auto k = 5u; k < h.size(); ++k )
  {
    if ( h[k] != 0 )
      throw parse_error( "bad state, constraint, justice and fairness sections are not supported", 1 );
  }
  if ( num_latches != 0 )
    throw parse_error( "sequential AIGER (latches) is not supported", 1 );
  if ( max_var < num_in + num_and )
    throw parse_error( "header M is smaller than I + L + A", 1 );
  if ( max_var > ( uint64_t{ 1 } << 30 ) )
    throw parse_error( "header M too large", 1 );

  auto const max_lit = 2 * max_var + 1;
  enum class kind : uint8_t
  {
    undefined,
    input,
    gate
  };
  std::vector<kind> var_kind( max_var + 1, kind::undefined );
  std::vector<uint32_t> input_index( max_var + 1, 0 );
  std::vector<uint32_t> gate_index( max_var + 1, 0 );

  auto expect_line = [&]( char const* what ) {
    auto l = in.next();
    if ( !l )
      throw parse_error( std::string( "unexpected end of file, expected " ) + what, in.line_no + 1 );
    return parse_numbers( *l, in.line_no );
  };

  for ( auto i = 0u; i < num_in; ++i )
  {
    auto const nums = expect_line( "input" );
    if ( nums.size() != 1 )
      throw parse_error( "input line must hold one literal", in.line_no );
    auto const lit = nums[0];
    if ( lit < 2 || ( lit & 1 ) || lit > max_lit )
      throw parse_error( "invalid input literal " + std::to_string( lit ), in.line_no );
    if ( var_kind[lit >> 1] != kind::undefined )
      throw parse_error( "duplicate definition of literal " + std::to_string( lit ), in.line_no );
    var_kind[lit >> 1] = kind::input;
    input_index[lit >> 1] = i;
  }

  std::vector<uint64_t> out_lits;
  for ( auto i = 0u; i < num_out; ++i )
  {
    auto const nums = expect_line( "output" );
    if ( nums.size() != 1 )
      throw parse_error( "output line must hold one literal", in.line_no );
    if ( nums[0] > max_lit )
      throw parse_error( "output literal exceeds 2M+1", in.line_no );
    out_lits.push_back( nums[0] );
  }

  std::vector<std::array<uint64_t, 3>> gates;
  std::vector<std::size_t> gate_lines;
  for ( auto i = 0u; i < num_and; ++i )
  {
    auto const nums = expect_line( "AND gate" );
    if ( nums.size() != 3 )
      throw parse_error( "AND line must hold three literals", in.line_no );
    auto const lhs = nums[0];
    if ( lhs < 2 || ( lhs & 1 ) || lhs > max_lit )
      throw parse_error( "invalid AND literal " + std::to_string( lhs ), in.line_no );
    if ( nums[1] > max_lit || nums[2] > max_lit )
      throw parse_error( "AND fanin literal exceeds 2M+1", in.line_no );
    if ( var_kind[lhs >> 1] != kind::undefined )
      throw parse_error( "duplicate definition of literal " + std::to_string( lhs ), in.line_no );
    var_kind[lhs >> 1] = kind::gate;
    gate_index[lhs >> 1] = static_cast<uint32_t>( gates.size() );
    gates.push_back( { lhs, nums[1], nums[2] } );
    gate_lines.push_back( in.line_no );
  }

  aig ntk( static_cast<uint32_t>( num_in ) );
  std::vector<std::string> in_names( num_in ), out_names( num_out );
  while ( auto l = in.next() )
  {
    if ( l->empty() )
      continue;
    if ( ( *l )[0] == 'c' )
      break;
    auto const type = ( *l )[0];
    auto const space = l->find( ' ' );
    if ( ( type != 'i' && type != 'o' && type != 'l' ) || space == std::string_view::npos )
      throw parse_error( "malformed symbol table entry", in.line_no );
    std::size_t idx{};
    auto const [ptr, ec] = std::from_chars( l->data() + 1, l->data() + space, idx );
    if ( ec != std::errc{} || ptr != l->data() + space )
      throw parse_error( "malformed symbol index", in.line_no );
    auto name = std::string( l->substr( space + 1 ) );
    if ( type == 'i' && idx < num_in )
      in_names[idx] = std::move( name );
    else if ( type == 'o' && idx < num_out )
      out_names[idx] = std::move( name );
    else
      throw parse_error( "symbol index out of range", in.line_no );
  }

  /* map every variable to a node; AND gates are emitted in a DFS order that
     keeps file order whenever the file is already topologically sorted */
  std::vector<literal> map( max_var + 1 );
  std::vector<uint8_t> state( max_var + 1, 0 ); /* 0 new, 1 on stack, 2 done */
  map[0] = const0;
  state[0] = 2;
  for ( uint64_t v = 1; v <= max_var; ++v )
  {
    if ( var_kind[v] == kind::input )
    {
      map[v] = ntk.input( input_index[v] );
      state[v] = 2;
    }
  }

  auto resolve = [&]( uint64_t root_var, std::size_t line_no ) {
    std::vector<uint64_t> stack{ root_var };
    while ( !stack.empty() )
    {
      auto const v = stack.back();
      if ( state[v] == 2 )
      {
        stack.pop_back();
        continue;
      }
      if ( var_kind[v] != kind::gate )
        throw parse_error( "reference to undefined literal " + std::to_string( 2 * v ), line_no );
      auto const& g = gates[gate_index[v]];
      if ( state[v] == 0 )
      {
        state[v] = 1;
        for ( auto k : { 2, 1 } )
        {
          auto const fv = g[k] >> 1;
          if ( state[fv] == 1 )
            throw parse_error( "combinational cycle through literal " + std::to_string( g[k] ), gate_lines[gate_index[v]] );
          if ( state[fv] == 0 )
          {
            if ( var_kind[fv] != kind::gate )
              throw parse_error( "reference to undefined literal " + std::to_string( g[k] ), gate_lines[gate_index[v]] );
            stack.push_back( fv );
          }
        }
        continue;
      }
      /* state 1: both fanins done */
      map[v] = ntk.add_and( map[g[1] >> 1] ^ ( g[1] & 1 ), map[g[2] >> 1] ^ ( g[2] & 1 ) );
      state[v] = 2;
      stack.pop_back();
    }
  };

  for ( std::size_t i = 0; i < gates.size(); ++i )
    resolve( gates[i][0] >> 1, gate_lines[i] );
  for ( std::size_t i = 0; i < out_lits.size(); ++i )
  {
    auto const v = out_lits[i] >> 1;
    if ( state[v] != 2 )
      throw parse_error( "output references undefined literal " + std::to_string( out_lits[i] ) );
    ntk.add_output( map[v] ^ ( out_lits[i] & 1 ), out_names[i] );
  }
  for ( auto i = 0u; i < num_in; ++i )
    ntk.set_input_name( i, in_names[i] );
  return ntk;
}

std::string write_aiger( aig const& original )
{
  auto const ntk = cleanup( original );
  std::ostringstream os;
  os << "aag " << ntk.num_nodes() - 1u << ' ' << ntk.num_inputs() << " 0 " << ntk.num_outputs() << ' '
     << ntk.num_ands() << '\n';
  for ( auto i = 0u; i < ntk.num_inputs(); ++i )
    os << ntk.input( i ).value << '\n';
  for ( auto f : ntk.outputs() )
    os << f.value << '\n';
  for ( auto k = 0u; k < ntk.num_ands(); ++k )
  {
    auto const& fi = ntk.ands()[k];
    os << literal::make( ntk.and_node( k ) ).value << ' ' << fi[0].value << ' ' << fi[1].value << '\n';
  }
  for ( auto i = 0u; i < ntk.num_inputs(); ++i )
    if ( !ntk.input_name( i ).empty() )
      os << 'i' << i << ' ' << ntk.input_name( i ) << '\n';
  for ( auto i = 0u; i < ntk.num_outputs(); ++i )
    if ( !ntk.output_name( i ).empty() )
      os << 'o' << i << ' ' << ntk.output_name( i ) << '\n';
  return os.str();
}

} /* namespace treeals */
