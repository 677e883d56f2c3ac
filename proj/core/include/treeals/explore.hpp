/*!
  \file explore.hpp
  \brief Greedy beam exploration over per-part tree depths

  The circuit is partitioned and every part is approximated by optimal
  decision trees of its current maximum depth (its entry in the depth
  stream).  Each iteration tries, for every live state, substituting every
  part whose current approximation is not yet applied, and keeps the
  `beam_width` successors with the smallest loss whose QoR stays within the
  threshold.  An accepted part has its depth lowered by `step` and is
  re-approximated while the depth stays above 1.

  Every state is the original circuit with a set of (part, depth)
  approximations substituted in one pass, so a state is fully described by
  its applied depths and can be replayed from the trace.
*/

#pragma once

#include "treeals/aig.hpp"
#include "treeals/partition.hpp"
#include "treeals/qor.hpp"
#include "treeals/region.hpp"
#include "treeals/synth.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace treeals
{

struct exploration_params
{
  double error_threshold{ 0.0 };
  uint32_t initial_max_depth{ 9u };
  uint32_t step{ 1u };
  uint32_t beam_width{ 3u };
  uint64_t qor_samples{ 10000u };
  uint64_t seed{ 0u };
  partition_params partition;

  /* keep regenerating parts down to depth 1 instead of freezing them there */
  bool allow_depth_one{ false };

  unsigned jobs{ 1u };
  std::optional<std::chrono::milliseconds> time_limit;
};

/*! \brief Throws input_error unless 0 <= err <= 1, md0 >= 1, step >= 1, beam >= 1 and samples >= 1. */
void validate( exploration_params const& params );

/*! \brief (candidate_area - original_area) / qor, with -inf for a free area win at qor 0 and +inf otherwise. */
double loss( uint32_t candidate_area, uint32_t original_area, double candidate_qor );

struct trace_record
{
  uint32_t iteration{ 0 };
  uint32_t state_id{ 0 };
  uint32_t parent_id{ 0 };
  uint32_t part{ 0 };
  uint32_t md{ 0 };
  double loss{ 0.0 };
  uint32_t area{ 0 };
  double qor{ 0.0 };

  bool operator==( trace_record const& ) const = default;
};

struct exploration_result
{
  aig circuit;

  /* final re-measurement: exhaustive up to 20 inputs, otherwise Monte Carlo with seed + 1 */
  qor_report qor;
  uint32_t original_area{ 0 };
  uint32_t area{ 0 };

  /* state 0 is the original circuit */
  uint32_t final_state{ 0 };
  std::vector<trace_record> trace;
  uint32_t iterations{ 0 };

  std::vector<sub_circuit> parts;

  /* depth of the approximation applied to each part in the final circuit, 0 if none */
  std::vector<uint32_t> applied_depths;

  /* mean realized depth over the trees of all substituted parts, 0 if none */
  double average_depth{ 0.0 };

  /* the time limit stopped the search; the result is the best state found so far */
  bool budget_exhausted{ false };
};

exploration_result explore( aig const& circuit, exploration_params const& params );

/*! \brief Rebuilds the circuit of `state_id` from the original by following its chain in `trace`. */
aig replay( aig const& circuit, exploration_params const& params, std::vector<trace_record> const& trace,
            uint32_t state_id );

void write_trace_csv( std::ostream& os, std::vector<trace_record> const& trace );
void write_trace_jsonl( std::ostream& os, std::vector<trace_record> const& trace );

} /* namespace treeals */
