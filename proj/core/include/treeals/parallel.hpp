/*!
  \file parallel.hpp
  \brief Deterministic index-parallel loop

  Each index is processed exactly once and results are written by index, so
  the outcome does not depend on the number of jobs.  If several indices
  throw, the exception of the smallest index is rethrown.
*/

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace treeals
{

template<class Fn>
void parallel_for( std::size_t count, unsigned jobs, Fn&& fn )
{
  jobs = std::max( 1u, std::min<unsigned>( jobs, static_cast<unsigned>( std::min<std::size_t>( count, 1024u ) ) ) );
  if ( jobs <= 1u )
  {
    for ( std::size_t i = 0; i < count; ++i )
      fn( i );
    return;
  }

  std::atomic<std::size_t> next{ 0 };
  std::vector<std::exception_ptr> errors( count );
  auto worker = [&] {
    for ( auto i = next++; i < count; i = next++ )
    {
      try
      {
        fn( i );
      }
      catch ( ... )
      {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve( jobs - 1u );
  for ( auto t = 1u; t < jobs; ++t )
    threads.emplace_back( worker );
  worker();
  for ( auto& t : threads )
    t.join();
  for ( auto const& e : errors )
    if ( e )
      std::rethrow_exception( e );
}

} /* namespace treeals */
