#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "combhelper/error.hpp"
#include "combhelper/exact.hpp"
#include "combhelper/greedy.hpp"
#include "combhelper/local_search.hpp"
#include "combhelper/solution.hpp"

namespace combhelper {

/// Classical algorithm used as a label source or as a benchmarked solver.
enum class Algorithm { kExact, kGreedy, kLocalSearch };

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kExact: return "exact";
    case Algorithm::kGreedy: return "greedy";
    case Algorithm::kLocalSearch: return "local-search";
  }
  return "?";
}

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "exact") return Algorithm::kExact;
  if (s == "greedy") return Algorithm::kGreedy;
  if (s == "local-search" || s == "ls") return Algorithm::kLocalSearch;
  throw InvalidParameter("unknown algorithm '" + std::string(s) +
                         "' (expected exact, greedy or local-search)");
}

inline Solution run_solver(const Graph& g, Problem problem, Algorithm algo, const Candidates& cand,
                           std::uint64_t seed, double exact_time_limit_s) {
  switch (algo) {
    case Algorithm::kGreedy:
      return problem == Problem::kMvc ? greedy_mvc(g, cand) : greedy_mis(g, cand);
    case Algorithm::kLocalSearch:
      return problem == Problem::kMvc ? local_search_mvc(g, cand, seed)
                                      : local_search_mis(g, cand, seed);
    case Algorithm::kExact:
      return exact_solve(g, problem, cand, exact_time_limit_s);
  }
  throw InvalidParameter("unknown algorithm");
}

}  // namespace combhelper
