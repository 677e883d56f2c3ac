/*!
  \file synth.hpp
  \brief Decision trees to AIGs, and tree-based approximation of (sub-)circuits

  A branch `(x_f low high)` becomes MUX(x_f; high, low) built from AND
  nodes through the structural-hashing builder, so constant leaves and
  equal subtrees simplify away.  All outputs of an approximation share one
  builder and therefore share identical logic.
*/

#pragma once

#include "treeals/aig.hpp"
#include "treeals/odt.hpp"
#include "treeals/region.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace treeals
{

/*! \brief Adds the logic of `tree` to `builder`, feature f reading `inputs[f]`. */
literal build_tree( aig_builder& builder, decision_tree const& tree, std::span<literal const> inputs );

/*! \brief Single-output AIG computing the tree; throws input_error if a feature is >= num_inputs. */
aig tree_to_aig( decision_tree const& tree, uint32_t num_inputs );

struct synth_params
{
  odt_params odt;
  std::optional<uint64_t> node_limit;
  std::optional<std::chrono::milliseconds> time_limit;

  /* throw budget_exceeded instead of accepting a tree that is not proven optimal */
  bool require_optimal{ true };

  uint32_t max_table_inputs{ default_max_table_inputs };

  /* outputs learned concurrently */
  unsigned jobs{ 1u };
};

struct approx_sub_circuit
{
  uint32_t source_id{ 0 };
  aig circuit;

  /* exact: the smallest realized tree depth over all outputs (at least 1); otherwise the requested depth */
  uint32_t md{ 0 };
  std::vector<decision_tree> per_output_trees;
  bool exact{ false };

  uint64_t total_train_error() const;
};

/*! \brief One optimal tree per output of `ntk` over its full truth table, assembled into one AIG.

  Requires md >= 1 and at most `params.max_table_inputs` inputs.
*/
approx_sub_circuit approximate_network( aig const& ntk, uint32_t md, synth_params const& params = {} );

/*! \brief `approximate_network` on the extracted logic of `sub`, tagged with its id. */
approx_sub_circuit approximate_sub_circuit( sub_circuit const& sub, uint32_t md, synth_params const& params = {} );

} /* namespace treeals */
