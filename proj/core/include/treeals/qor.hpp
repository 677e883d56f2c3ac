/*!
  \file qor.hpp
  \brief Average bit-error rate between an original and an approximate circuit

  error = mismatched output bits / (evaluated vectors * num_outputs).
  Monte Carlo vectors are drawn uniformly with replacement from
  std::mt19937_64 seeded with the given seed (see random_patterns).
*/

#pragma once

#include "treeals/aig.hpp"
#include "treeals/simulate.hpp"

#include <cstdint>
#include <string>

namespace treeals
{

enum class qor_estimator
{
  exhaustive,
  monte_carlo
};

std::string to_string( qor_estimator e );

struct qor_report
{
  double error{ 0.0 };
  qor_estimator estimator{ qor_estimator::exhaustive };
  uint64_t samples{ 0 };
  uint64_t seed{ 0 };
  uint64_t mismatched_bits{ 0 };
  uint64_t total_bits{ 0 };

  bool operator==( qor_report const& ) const = default;
};

inline constexpr uint32_t max_exhaustive_qor_inputs = 20u;

/*! \brief Error over all 2^n input vectors; throws input_error on arity mismatch or n > 20. */
qor_report qor_exhaustive( aig const& original, aig const& approx );

/*! \brief Error over `samples` random vectors; throws input_error on arity mismatch or samples == 0. */
qor_report qor_monte_carlo( aig const& original, aig const& approx, uint64_t samples, uint64_t seed );

/*! \brief Fixed vector set with the original's responses simulated once, for repeated comparisons. */
class qor_testbench
{
public:
  qor_testbench( aig const& original, pattern_set inputs, qor_estimator estimator, uint64_t seed );

  /* exhaustive testbench (n <= 20) or Monte Carlo testbench */
  static qor_testbench exhaustive( aig const& original );
  static qor_testbench monte_carlo( aig const& original, uint64_t samples, uint64_t seed );

  qor_report measure( aig const& approx ) const;

  pattern_set const& inputs() const { return inputs_; }
  pattern_set const& reference() const { return reference_; }

private:
  uint32_t num_inputs_;
  uint32_t num_outputs_;
  pattern_set inputs_;
  pattern_set reference_;
  qor_estimator estimator_;
  uint64_t seed_;
};

} /* namespace treeals */
