/*!
  \file dataset.hpp
  \brief Binary classification datasets (column-major bitsets)

  Datasets come either from exhaustive truth tables of circuits (row r
  assigns bit i of r to feature i) or from single-output PLA files.
*/

#pragma once

#include "treeals/aig.hpp"
#include "treeals/bit_vector.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace treeals
{

struct dataset
{
  uint32_t num_features{ 0 };
  std::size_t num_rows{ 0 };
  std::vector<bit_vector> features; /* one column per feature */
  bit_vector labels;
  std::vector<uint32_t> weights; /* empty means every row has weight 1 */

  dataset() = default;
  dataset( uint32_t num_features, std::size_t num_rows );

  bool feature( std::size_t row, uint32_t f ) const { return features[f].get( row ); }
  bool label( std::size_t row ) const { return labels.get( row ); }
  uint32_t weight( std::size_t row ) const { return weights.empty() ? 1u : weights[row]; }
  std::vector<bool> row( std::size_t r ) const;

  /* appends a row (used by parsers and tests) */
  void push_row( std::vector<bool> const& bits, bool label, uint32_t weight = 1u );

  bool operator==( dataset const& ) const = default;
};

inline constexpr uint32_t default_max_table_inputs = 14u;

/*! \brief Truth table of one output over the full input space.

  Throws input_error if the circuit has more than `max_inputs` inputs or the
  output index is out of range.
*/
dataset truth_table( aig const& ntk, uint32_t output_index, uint32_t max_inputs = default_max_table_inputs );

/*! \brief Truth tables for every output with a single simulation pass. */
std::vector<dataset> truth_tables( aig const& ntk, uint32_t max_inputs = default_max_table_inputs );

/*! \brief Parses a fully specified single-output PLA (`.i`, `.o 1`, optional `.p`/`.type`, `.e`). */
dataset parse_pla( std::string_view text );
std::string write_pla( dataset const& data );
std::string write_csv( dataset const& data );

dataset read_pla( std::filesystem::path const& path );

struct pla_triple
{
  dataset train;
  dataset validation;
  dataset test;
};

/*! \brief Reads train/validation/test PLAs; throws input_error if feature widths disagree. */
pla_triple read_pla_triple( std::filesystem::path const& train, std::filesystem::path const& validation,
                            std::filesystem::path const& test );

} /* namespace treeals */
