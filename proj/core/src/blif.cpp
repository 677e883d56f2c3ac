#include "treeals/error.hpp"
#include "treeals/io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace treeals
{

namespace
{

struct cover
{
  std::vector<std::string> fanins;
  std::vector<std::string> cubes;
  bool onset{ true };
  std::size_t line{ 0 };
};

std::vector<std::string> split_tokens( std::string_view s )
{
  std::vector<std::string> toks;
  std::size_t i = 0;
  while ( i < s.size() )
  {
    while ( i < s.size() && ( s[i] == ' ' || s[i] == '\t' ) )
      ++i;
    auto j = i;
    while ( j < s.size() && s[j] != ' ' && s[j] != '\t' )
      ++j;
    if ( j > i )
      toks.emplace_back( s.substr( i, j - i ) );
    i = j;
  }
  return toks;
}

/* joins '\' continuations, strips comments; returns (line number, tokens) */
std::vector<std::pair<std::size_t, std::vector<std::string>>> logical_lines( std::string_view text )
{
  std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
  std::string pending;
  std::size_t pending_line = 0, line_no = 0, pos = 0;
  while ( pos <= text.size() )
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
    if ( pending.empty() )
      pending_line = line_no;
    bool const continued = !line.empty() && line.back() == '\\';
    if ( continued )
      line.remove_suffix( 1 );
    pending += ' ';
    pending += line;
    if ( continued )
      continue;
    auto toks = split_tokens( pending );
    pending.clear();
    if ( !toks.empty() )
      lines.emplace_back( pending_line, std::move( toks ) );
  }
  return lines;
}

} // namespace

aig parse_blif( std::string_view text )
{
  std::string model;
  std::vector<std::string> inputs, outputs;
  std::unordered_map<std::string, cover> covers;
  std::vector<std::string> cover_order;
  cover* current = nullptr;
  bool seen_model = false;

  for ( auto& [line_no, toks] : logical_lines( text ) )
  {
    auto const& head = toks[0];
    if ( head[0] != '.' )
    {
      if ( current == nullptr )
        throw parse_error( "cube outside of a .names block", line_no );
      std::string in_part, out_part;
      if ( current->fanins.empty() )
      {
        if ( toks.size() != 1 )
          throw parse_error( "constant cover must hold a single output column", line_no );
        out_part = toks[0];
      }
      else
      {
        if ( toks.size() != 2 )
          throw parse_error( "cube must be '<inputs> <output>'", line_no );
        in_part = toks[0];
        out_part = toks[1];
      }
      if ( in_part.size() != current->fanins.size() )
        throw parse_error( "cube width does not match .names fanin count", line_no );
      for ( auto c : in_part )
        if ( c != '0' && c != '1' && c != '-' )
          throw parse_error( "invalid cube character", line_no );
      if ( out_part != "0" && out_part != "1" )
        throw parse_error( "cube output must be 0 or 1", line_no );
      bool const on = out_part == "1";
      if ( !current->cubes.empty() && on != current->onset )
        throw parse_error( "cover mixes on-set and off-set cubes", line_no );
      current->onset = on;
      current->cubes.push_back( std::move( in_part ) );
      continue;
    }

    current = nullptr;
    if ( head == ".model" )
    {
      if ( seen_model )
        throw parse_error( "only a single .model is supported", line_no );
      seen_model = true;
      if ( toks.size() > 1 )
        model = toks[1];
    }
    else if ( head == ".inputs" )
      inputs.insert( inputs.end(), toks.begin() + 1, toks.end() );
    else if ( head == ".outputs" )
      outputs.insert( outputs.end(), toks.begin() + 1, toks.end() );
    else if ( head == ".names" )
    {
      if ( toks.size() < 2 )
        throw parse_error( ".names requires an output signal", line_no );
      auto const& out = toks.back();
      if ( covers.contains( out ) )
        throw parse_error( "duplicate definition of signal '" + out + "'", line_no );
      cover c;
      c.fanins.assign( toks.begin() + 1, toks.end() - 1 );
      c.line = line_no;
      current = &covers.emplace( out, std::move( c ) ).first->second;
      cover_order.push_back( out );
    }
    else if ( head == ".end" )
      break;
    else if ( head == ".latch" )
      throw parse_error( "sequential BLIF (.latch) is not supported", line_no );
    else
      throw parse_error( "unsupported BLIF construct '" + head + "'", line_no );
  }

  aig_builder builder( static_cast<uint32_t>( inputs.size() ) );
  std::unordered_map<std::string, literal> signal;
  for ( auto i = 0u; i < inputs.size(); ++i )
  {
    if ( signal.contains( inputs[i] ) )
      throw parse_error( "duplicate input '" + inputs[i] + "'" );
    if ( covers.contains( inputs[i] ) )
      throw parse_error( "duplicate definition of signal '" + inputs[i] + "'", covers[inputs[i]].line );
    signal.emplace( inputs[i], builder.input( i ) );
  }

  auto build_cover = [&]( cover const& c ) {
    std::vector<literal> fanin_lits;
    for ( auto const& f : c.fanins )
      fanin_lits.push_back( signal.at( f ) );
    literal sum = const0;
    for ( auto const& cube : c.cubes )
    {
      literal prod = const1;
      for ( std::size_t k = 0; k < cube.size(); ++k )
      {
        if ( cube[k] == '-' )
          continue;
        prod = builder.create_and( prod, fanin_lits[k] ^ ( cube[k] == '0' ) );
      }
      sum = builder.create_or( sum, prod );
    }
    /* an empty cover is constant 0 regardless of polarity */
    if ( c.cubes.empty() )
      return const0;
    return c.onset ? sum : !sum;
  };

  std::unordered_set<std::string> on_stack;
  auto resolve = [&]( std::string const& root, std::size_t line_no ) {
    std::vector<std::pair<std::string const*, bool>> stack{ { &root, false } };
    while ( !stack.empty() )
    {
      auto [name, expanded] = stack.back();
      if ( signal.contains( *name ) )
      {
        stack.pop_back();
        continue;
      }
      auto it = covers.find( *name );
      if ( it == covers.end() )
        throw parse_error( "undefined signal '" + *name + "'", line_no );
      if ( expanded )
      {
        signal.emplace( *name, build_cover( it->second ) );
        on_stack.erase( *name );
        stack.pop_back();
        continue;
      }
      stack.back().second = true;
      on_stack.insert( *name );
      for ( auto f = it->second.fanins.rbegin(); f != it->second.fanins.rend(); ++f )
      {
        if ( on_stack.contains( *f ) )
          throw parse_error( "combinational cycle through signal '" + *f + "'", it->second.line );
        if ( !signal.contains( *f ) )
        {
          if ( !covers.contains( *f ) )
            throw parse_error( "undefined signal '" + *f + "'", it->second.line );
          stack.emplace_back( &*f, false );
        }
      }
    }
  };

  for ( auto const& name : cover_order )
    resolve( name, covers[name].line );
  for ( auto const& o : outputs )
  {
    if ( !signal.contains( o ) )
      throw parse_error( "undefined output signal '" + o + "'" );
    builder.create_output( signal.at( o ), o );
  }
  auto ntk = cleanup( builder.take() );
  ntk.set_name( model );
  for ( auto i = 0u; i < inputs.size(); ++i )
    ntk.set_input_name( i, inputs[i] );
  return ntk;
}

std::string write_blif( aig const& original )
{
  auto const ntk = cleanup( original );
  std::vector<std::string> names( ntk.num_nodes() );
  names[0] = "_const0";
  for ( auto i = 0u; i < ntk.num_inputs(); ++i )
    names[i + 1] = ntk.input_name( i ).empty() ? "i" + std::to_string( i ) : ntk.input_name( i );
  for ( auto n = ntk.num_inputs() + 1u; n < ntk.num_nodes(); ++n )
    names[n] = "_n" + std::to_string( n );

  std::vector<std::string> out_names( ntk.num_outputs() );
  for ( auto i = 0u; i < ntk.num_outputs(); ++i )
    out_names[i] = ntk.output_name( i ).empty() ? "o" + std::to_string( i ) : ntk.output_name( i );

  std::ostringstream os;
  os << ".model " << ( ntk.name().empty() ? "top" : ntk.name() ) << '\n';
  os << ".inputs";
  for ( auto i = 0u; i < ntk.num_inputs(); ++i )
    os << ' ' << names[i + 1];
  os << "\n.outputs";
  for ( auto const& o : out_names )
    os << ' ' << o;
  os << '\n';
  for ( auto n = ntk.num_inputs() + 1u; n < ntk.num_nodes(); ++n )
  {
    auto const& fi = ntk.fanins( n );
    os << ".names " << names[fi[0].node()] << ' ' << names[fi[1].node()] << ' ' << names[n] << '\n'
       << ( fi[0].is_complemented() ? '0' : '1' ) << ( fi[1].is_complemented() ? '0' : '1' ) << " 1\n";
  }
  for ( auto i = 0u; i < ntk.num_outputs(); ++i )
  {
    auto const f = ntk.output( i );
    if ( f.node() == 0 )
    {
      os << ".names " << out_names[i] << '\n';
      if ( f == const1 )
        os << "1\n";
      continue;
    }
    /* an output that is the same-named input needs no buffer */
    if ( !f.is_complemented() && names[f.node()] == out_names[i] )
      continue;
    os << ".names " << names[f.node()] << ' ' << out_names[i] << '\n'
       << ( f.is_complemented() ? '0' : '1' ) << " 1\n";
  }
  os << ".end\n";
  return os.str();
}

std::string read_text_file( std::filesystem::path const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw input_error( "cannot open '" + path.string() + "'" );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file( std::filesystem::path const& path, std::string_view text )
{
  std::ofstream out( path, std::ios::binary );
  if ( !out )
    throw input_error( "cannot write '" + path.string() + "'" );
  out << text;
}

aig read_netlist( std::filesystem::path const& path )
{
  auto const ext = path.extension().string();
  if ( ext != ".aag" && ext != ".blif" )
    throw input_error( "unknown netlist extension '" + ext + "' (expected .aag or .blif)" );
  auto const text = read_text_file( path );
  try
  {
    return ext == ".aag" ? parse_aiger( text ) : parse_blif( text );
  }
  catch ( parse_error const& e )
  {
    throw parse_error( path.string() + ": " + e.what() );
  }
}

void write_netlist( aig const& ntk, std::filesystem::path const& path, netlist_format format )
{
  write_text_file( path, format == netlist_format::aiger ? write_aiger( ntk ) : write_blif( ntk ) );
}

} /* namespace treeals */
