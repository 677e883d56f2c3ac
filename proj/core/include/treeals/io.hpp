/*!
  \file io.hpp
  \brief ASCII AIGER and combinational BLIF readers/writers

  Only the combinational subsets are supported: AIGER files must have
  zero latches, BLIF files may only contain `.model`, `.inputs`,
  `.outputs`, `.names` and `.end`.  Inputs and outputs keep their
  declaration order.
*/

#pragma once

#include "treeals/aig.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace treeals
{

aig parse_aiger( std::string_view text );

/*! \brief Writes the cleaned network as `aag`, including a symbol table when names exist. */
std::string write_aiger( aig const& ntk );

aig parse_blif( std::string_view text );
std::string write_blif( aig const& ntk );

/*! \brief Reads `.aag` or `.blif` (chosen by extension). */
aig read_netlist( std::filesystem::path const& path );

enum class netlist_format
{
  aiger,
  blif
};

void write_netlist( aig const& ntk, std::filesystem::path const& path, netlist_format format );

std::string read_text_file( std::filesystem::path const& path );
void write_text_file( std::filesystem::path const& path, std::string_view text );

} /* namespace treeals */
