/*!
  \file aig.hpp
  \brief And-Inverter Graph: the single circuit representation of treeals

  Node numbering follows AIGER: node 0 is constant false, nodes
  1..num_inputs are primary inputs and AND nodes follow in topological
  order.  A literal is `2 * node + complemented`, so constant true is the
  complemented constant-false literal.
*/

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace treeals
{

struct literal
{
  uint32_t value{ 0 };

  constexpr literal() = default;
  constexpr explicit literal( uint32_t raw ) : value( raw ) {}

  static constexpr literal make( uint32_t node, bool complemented = false )
  {
    return literal{ ( node << 1 ) | ( complemented ? 1u : 0u ) };
  }

  constexpr uint32_t node() const { return value >> 1; }
  constexpr bool is_complemented() const { return value & 1u; }
  constexpr literal regular() const { return literal{ value & ~1u }; }

  constexpr literal operator!() const { return literal{ value ^ 1u }; }
  constexpr literal operator^( bool complement ) const { return literal{ value ^ ( complement ? 1u : 0u ) }; }

  constexpr auto operator<=>( literal const& ) const = default;
};

inline constexpr literal const0{ 0u };
inline constexpr literal const1{ 1u };

struct circuit_metrics
{
  uint32_t and_count{ 0 };
  uint32_t level_depth{ 0 };
  uint32_t num_inputs{ 0 };
  uint32_t num_outputs{ 0 };

  bool operator==( circuit_metrics const& ) const = default;
};

class aig
{
public:
  using fanin_pair = std::array<literal, 2>;

  aig() = default;
  explicit aig( uint32_t num_inputs );

  uint32_t num_inputs() const { return num_inputs_; }
  uint32_t num_ands() const { return static_cast<uint32_t>( ands_.size() ); }
  uint32_t num_outputs() const { return static_cast<uint32_t>( outputs_.size() ); }
  uint32_t num_nodes() const { return 1u + num_inputs_ + num_ands(); }

  literal input( uint32_t index ) const { return literal::make( 1u + index ); }
  bool is_constant( uint32_t node ) const { return node == 0u; }
  bool is_input( uint32_t node ) const { return node >= 1u && node <= num_inputs_; }
  bool is_and( uint32_t node ) const { return node > num_inputs_ && node < num_nodes(); }

  /* fanins of an AND node (node must satisfy is_and) */
  fanin_pair const& fanins( uint32_t node ) const { return ands_[node - num_inputs_ - 1u]; }
  uint32_t and_node( uint32_t index ) const { return num_inputs_ + 1u + index; }

  std::span<fanin_pair const> ands() const { return ands_; }
  std::span<literal const> outputs() const { return outputs_; }
  literal output( uint32_t index ) const { return outputs_[index]; }

  /*! \brief Appends an AND node without hashing or simplification.

    Both fanins must reference existing nodes; throws input_error otherwise.
  */
  literal add_and( literal a, literal b );
  void add_output( literal f, std::string name = {} );
  void set_output( uint32_t index, literal f ) { outputs_[index] = f; }

  std::string const& name() const { return name_; }
  void set_name( std::string name ) { name_ = std::move( name ); }
  std::string const& input_name( uint32_t index ) const { return input_names_[index]; }
  std::string const& output_name( uint32_t index ) const { return output_names_[index]; }
  void set_input_name( uint32_t index, std::string name ) { input_names_[index] = std::move( name ); }
  void set_output_name( uint32_t index, std::string name ) { output_names_[index] = std::move( name ); }
  bool has_names() const;

  /* structural identity, names excluded */
  bool same_structure( aig const& other ) const
  {
    return num_inputs_ == other.num_inputs_ && ands_ == other.ands_ && outputs_ == other.outputs_;
  }

private:
  uint32_t num_inputs_{ 0 };
  std::vector<fanin_pair> ands_;
  std::vector<literal> outputs_;
  std::string name_;
  std::vector<std::string> input_names_;
  std::vector<std::string> output_names_;
};

/*! \brief Incremental AIG construction with constant propagation and structural hashing. */
class aig_builder
{
public:
  explicit aig_builder( uint32_t num_inputs );

  literal input( uint32_t index ) const { return ntk_.input( index ); }
  uint32_t num_inputs() const { return ntk_.num_inputs(); }

  literal create_and( literal a, literal b );
  literal create_or( literal a, literal b ) { return !create_and( !a, !b ); }
  literal create_xor( literal a, literal b );
  /* if sel then then_ else else_ */
  literal create_mux( literal sel, literal then_, literal else_ );

  void create_output( literal f, std::string name = {} ) { ntk_.add_output( f, std::move( name ) ); }

  aig& network() { return ntk_; }
  aig take() { return std::move( ntk_ ); }

private:
  aig ntk_;
  std::unordered_map<uint64_t, uint32_t> table_;
};

/*! \brief Removes AND nodes not reachable from any output; keeps relative node order. */
aig cleanup( aig const& ntk );

/*! \brief Rebuilds the reachable logic through aig_builder (hashing + constant propagation). */
aig strash( aig const& ntk );

/*! \brief Marks nodes in the transitive fanin of the outputs. */
std::vector<bool> reachable_nodes( aig const& ntk );

/*! \brief Fanout count per node (outputs included). */
std::vector<uint32_t> fanout_counts( aig const& ntk );

circuit_metrics metrics( aig const& ntk );

} /* namespace treeals */
