/*!
  \file region.hpp
  \brief Sub-circuit regions: extraction from a parent AIG and substitution back into it
*/

#pragma once

#include "treeals/aig.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace treeals
{

/*! \brief A set of AND nodes of a parent AIG together with its interface.

  `boundary_inputs` are the (uncomplemented) parent signals read by the
  region but not produced inside it, in increasing node order.
  `boundary_outputs` are member nodes read outside the region or by a
  primary output, in increasing node order.  `extracted` has one input per
  boundary input and one output per boundary output.
*/
struct sub_circuit
{
  uint32_t id{ 0 };
  std::vector<uint32_t> members;
  std::vector<literal> boundary_inputs;
  std::vector<uint32_t> boundary_outputs;
  aig extracted;

  uint32_t num_inputs() const { return static_cast<uint32_t>( boundary_inputs.size() ); }
  uint32_t num_outputs() const { return static_cast<uint32_t>( boundary_outputs.size() ); }
};

/*! \brief Computes the interface of `members` and copies its logic into `extracted`.

  Throws input_error if a member is not an AND node of `ntk`.
*/
sub_circuit extract( aig const& ntk, std::span<uint32_t const> members, uint32_t id = 0 );

struct region_replacement
{
  sub_circuit const* region;
  aig const* replacement;
};

/*! \brief Replaces each region by its replacement network in a single pass.

  Regions must be disjoint and come from `ntk`; together they must form an
  acyclic quotient graph.  The result is cleaned and structurally hashed.
*/
aig substitute( aig const& ntk, std::span<region_replacement const> replacements );

aig substitute( aig const& ntk, sub_circuit const& region, aig const& replacement );

} /* namespace treeals */
