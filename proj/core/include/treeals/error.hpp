/*!
  \file error.hpp
  \brief Exception types shared by all treeals modules
*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treeals
{

/*! \brief Base class of all errors raised by the library. */
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! \brief Malformed textual input (AIGER, BLIF, PLA, tree s-expressions). */
class parse_error : public error
{
public:
  parse_error( std::string const& what, std::size_t line = 0 )
      : error( line == 0 ? what : "line " + std::to_string( line ) + ": " + what ),
        line_( line )
  {
  }

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/*! \brief A precondition on arguments was violated (arity, width, guards). */
class input_error : public error
{
public:
  using error::error;
};

/*! \brief A search or exploration ran out of its node or time budget. */
class budget_exceeded : public error
{
public:
  using error::error;
};

} /* namespace treeals */
