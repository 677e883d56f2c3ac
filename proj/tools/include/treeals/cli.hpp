/*!
  \file cli.hpp
  \brief Command-line front end: learn, approximate, eval and partition

  Every command returns a JSON report that embeds its effective
  configuration and seed.  The job count is left out since it never
  changes results, and timing is only added on request, so repeated runs
  with the same flags are byte-identical.
*/

#pragma once

#include <treeals/explore.hpp>
#include <treeals/io.hpp>
#include <treeals/partition.hpp>
#include <treeals/qor.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace treeals::cli
{

using report = nlohmann::ordered_json;

enum class exit_code : int
{
  success = 0,
  failure = 1,
  input_error = 2,
  budget_exceeded = 3
};

struct depth_range
{
  uint32_t first{ 0 };
  uint32_t last{ 0 };
};

/*! \brief Parses `a..b` or a single depth `a`; throws input_error on malformed or empty ranges. */
depth_range parse_depth_range( std::string const& text );

struct learn_options
{
  std::filesystem::path train;
  std::filesystem::path validation;
  std::filesystem::path test;
  depth_range depths{ 2u, 10u };
  std::optional<std::filesystem::path> out;
  netlist_format format{ netlist_format::aiger };
  unsigned jobs{ 1u };
  uint64_t seed{ 0u };
};

/*! \brief One optimal tree per depth; the model with the best validation accuracy (then the smaller depth) is selected. */
report learn( learn_options const& opts );

struct approximate_options
{
  std::filesystem::path netlist;
  exploration_params exploration;

  /* approximate the circuit as a single part at every depth of `depths` */
  bool whole_circuit{ false };
  depth_range depths{ 1u, 4u };

  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> trace;
  netlist_format format{ netlist_format::aiger };
};

/*! \brief Runs the exploration (or the whole-circuit sweep); `budget_exhausted` in the report flags a time-limited run. */
report approximate( approximate_options const& opts );

enum class estimator_choice
{
  automatic,
  exhaustive,
  monte_carlo
};

struct eval_options
{
  std::filesystem::path original;
  std::filesystem::path approx;
  estimator_choice estimator{ estimator_choice::automatic };
  uint64_t samples{ 10000u };
  uint64_t seed{ 0u };
};

/*! \brief QoR of `approx` against `original`; automatic means exhaustive up to 20 inputs. */
report eval( eval_options const& opts );

struct partition_options
{
  std::filesystem::path netlist;
  partition_params params;
  std::optional<std::filesystem::path> out_dir;
  netlist_format format{ netlist_format::aiger };
};

/*! \brief Part interfaces and cut size; optionally writes every part's extracted logic to `out_dir`. */
report partition( partition_options const& opts );

report to_json( qor_report const& q );
report to_json( exploration_params const& p );

/*! \brief Tabular view of a report: per-depth, per-iteration, per-part or single-row CSV. */
std::string to_csv( report const& r );

/*! \brief Parses `args` (without the program name), runs the command and returns the exit code. */
int run( std::vector<std::string> const& args, std::ostream& out, std::ostream& err );

} /* namespace treeals::cli */
