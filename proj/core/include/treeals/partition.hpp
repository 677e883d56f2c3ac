/*!
  \file partition.hpp
  \brief Recursive min-cut partitioning of an AIG into bounded-interface sub-circuits

  Each connected component of AND nodes is split by recursive
  Fiduccia-Mattheyses bisection until every part has at most `max_inputs`
  boundary inputs and `max_outputs` boundary outputs.  Bisections are
  directional: the first side may feed the second but never the reverse,
  so the parts always form an acyclic quotient graph.  Recursion stops as
  soon as a side satisfies both limits, which keeps parts small.

  Parts are returned in topological order and `id` is the index.
*/

#pragma once

#include "treeals/aig.hpp"
#include "treeals/region.hpp"

#include <cstdint>
#include <vector>

namespace treeals
{

struct partition_params
{
  uint32_t max_inputs{ 14u };
  uint32_t max_outputs{ 5u };

  /* parts of the first split of a component that exceeds the limits */
  uint32_t initial_parts{ 5u };
  uint64_t seed{ 0u };

  /* allowed deviation of a bisection side from its target size, as a fraction of the node count */
  double balance_tolerance{ 0.1 };
};

/*! \brief Partitions all AND nodes of `ntk`.

  Throws input_error on invalid parameters or if a single AND node already
  violates the input limit (only possible for max_inputs < 2).
*/
std::vector<sub_circuit> partition( aig const& ntk, partition_params const& params = {} );

/*! \brief Number of AND-node signals read by a part other than the one producing them. */
uint32_t cut_size( aig const& ntk, std::vector<sub_circuit> const& parts );

/*! \brief True if the parts are disjoint, cover every AND node and induce an acyclic quotient graph. */
bool is_valid_partition( aig const& ntk, std::vector<sub_circuit> const& parts );

} /* namespace treeals */
