#pragma once

// Randomized brute-force law suites. Every case draws from its own RNG
// stream (seed, case index), so results do not depend on the execution mode
// or thread count; the serial mode is the reference the parallel one is
// tested against.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lensdyn/random.hpp"

namespace lensdyn::suites {

enum class Exec { Serial, Parallel };

struct Failure {
  std::size_t index = 0;
  std::string law;
  std::string detail;
  friend bool operator==(const Failure&, const Failure&) = default;
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  std::size_t passed = 0;
  std::vector<Failure> failures;
  bool ok() const { return failures.empty(); }
};

struct Options {
  std::uint64_t seed = 0;
  std::size_t cases = 200;
  std::size_t max_size = 5;
  std::size_t max_k = 3;
  Exec exec = Exec::Parallel;
};

using CaseFn = std::function<std::optional<Failure>(std::size_t index, Rng& rng)>;

// Runs case(i, Rng(seed, i)) for i < cases. Exceptions count as failures.
SuiteResult run_cases(const std::string& name, const Options& opts, const CaseFn& fn);

// Random system, random lens, k = 1 + (i mod max_k).
SuiteResult matrix_theorem_suite(const Options& opts);
// Associativity, units and functoriality of the action on systems, sizes ≤ 4.
SuiteResult lens_law_suite(const Options& opts);
// Vertical and horizontal pasting of generated commuting squares.
SuiteResult pasting_suite(const Options& opts);
// Single-entry mutations of commuting squares must fail at the mutated entry.
SuiteResult mutation_suite(const Options& opts);
// walking_cycle(1) represents exactly the steady states.
SuiteResult representability_suite(const Options& opts);
// Exact normalization under step_dist and lens composition; embedding laws.
SuiteResult stochastic_suite(const Options& opts);

}  // namespace lensdyn::suites
