/*!
  \file odt.hpp
  \brief Depth-bounded optimal decision trees over binary datasets

  `fit_optimal` is a DL8.5-style dynamic program: subproblems are keyed by
  the (order independent) set of feature tests on the path, solutions are
  memoized, and a branch-and-bound upper bound prunes feature choices that
  cannot beat the best complete solution found so far.

  Among trees of equal training error the learner prefers, in order, a
  smaller realized depth, fewer nodes and the smallest root feature index.
  Leaves predict the majority class (ties predict 0).

  `fit_bruteforce` is a slow exhaustive reference used to check optimality.
*/

#pragma once

#include "treeals/dataset.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace treeals
{

struct search_budget
{
  uint32_t max_depth{ 0 };
  std::optional<uint64_t> node_limit;
  std::optional<std::chrono::milliseconds> time_limit;
};

struct odt_params
{
  /*! \brief Reuse cached subproblem results during the search. */
  bool memoize{ true };

  /*! \brief Solve subproblems with at most two remaining levels by pair counting. */
  bool count_depth_two{ true };
};

struct odt_stats
{
  uint64_t explored{ 0 };
  uint64_t cache_entries{ 0 };
};

class decision_tree
{
public:
  struct node
  {
    int32_t feature{ -1 }; /* -1 marks a leaf */
    uint32_t low{ 0 };     /* child for feature = 0 */
    uint32_t high{ 0 };    /* child for feature = 1 */
    bool label{ false };

    bool is_leaf() const { return feature < 0; }
    bool operator==( node const& ) const = default;
  };

  decision_tree() : nodes_{ node{} } {}

  static decision_tree leaf( bool label );
  static decision_tree branch( uint32_t feature, decision_tree const& low, decision_tree const& high );

  uint32_t root() const { return 0u; }
  node const& at( uint32_t index ) const { return nodes_[index]; }
  uint32_t num_nodes() const { return static_cast<uint32_t>( nodes_.size() ); }
  uint32_t num_leaves() const;

  /* depth of the deepest leaf (0 for a single leaf) */
  uint32_t depth() const;

  /* largest tested feature index + 1 (0 for a single leaf) */
  uint32_t min_num_features() const;

  template<class Fn>
  bool evaluate( Fn&& feature_value ) const
  {
    uint32_t n = 0;
    while ( !nodes_[n].is_leaf() )
      n = feature_value( static_cast<uint32_t>( nodes_[n].feature ) ) ? nodes_[n].high : nodes_[n].low;
    return nodes_[n].label;
  }

  /*! \brief s-expression form: a leaf is `0` or `1`, a branch is `(x<f> <low> <high>)`. */
  std::string to_string() const;
  static decision_tree parse( std::string_view text );

  /* structural equality (statistics excluded) */
  bool same_structure( decision_tree const& other ) const { return nodes_ == other.nodes_; }

  uint32_t num_features{ 0 };
  uint64_t train_error{ 0 };
  uint32_t realized_depth{ 0 };
  bool optimal{ true };

private:
  std::vector<node> nodes_;
};

/*! \brief Predicts one row; throws input_error if the width differs from the tree's num_features. */
bool predict( decision_tree const& tree, std::vector<bool> const& features );

/*! \brief Weighted number of misclassified rows. */
uint64_t count_errors( decision_tree const& tree, dataset const& data );

/*! \brief Replaces every branch whose children are equal leaves by that leaf (bottom-up). */
decision_tree collapse_leaves( decision_tree const& tree );

/*! \brief Minimum-error tree of depth at most `budget.max_depth`.

  Throws input_error on an empty dataset.  When the node or time limit is
  hit the best tree found so far is returned with `optimal == false`.
*/
decision_tree fit_optimal( dataset const& data, search_budget const& budget, odt_params const& params = {},
                           odt_stats* stats = nullptr );

/*! \brief Exhaustive enumeration of all complete trees (reference oracle).

  Guarded to at most 10 features and depth 3; throws input_error otherwise.
*/
decision_tree fit_bruteforce( dataset const& data, search_budget const& budget );

} /* namespace treeals */
