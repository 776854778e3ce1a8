#pragma once

// Random deterministic systems, lenses and charts, plus a constructive
// generator for commuting squares. Used by the randomized law suites.

#include <optional>
#include <string>
#include <vector>

#include "lensdyn/det.hpp"
#include "lensdyn/random.hpp"

namespace lensdyn::det {

// {prefix0, prefix1, ...}
FinSet labelled_set(const std::string& prefix, std::size_t n);

Interface random_interface(Rng& rng, std::size_t min_size, std::size_t max_size,
                           const std::string& tag);
System random_system(Rng& rng, const FinSet& states, const Interface& iface);
// Sizes of S, I, O drawn uniformly from [1, max_size].
System random_system(Rng& rng, std::size_t max_size);
Lens random_lens(Rng& rng, const Interface& inner, const Interface& outer);
Chart random_chart(Rng& rng, const Interface& source, const Interface& target);
// fwd injective and push(o, -) injective for every o; the target must be at
// least as large as the source in both components.
Chart random_injective_chart(Rng& rng, const Interface& source, const Interface& target);

// Given the top chart and left lens, draws an injective bottom chart into a
// fresh interface and solves for a right lens making the square commute.
// Returns nullopt when the constraints on the right lens are inconsistent,
// which cannot happen when the top chart is injective.
std::optional<Square> complete_square(Rng& rng, const Chart& top, const Lens& left,
                                      const std::string& tag);

struct Mutation {
  Square square;
  std::string law;
  std::vector<std::string> witness;
};

// Changes a single entry of left.bwd at a random (o, a3). When top.push(o, -)
// is injective the result fails exactly at (o, a3). Returns nullopt when the
// left lens has no alternative value to switch to.
std::optional<Mutation> mutate_square(Rng& rng, const Square& sq);

}  // namespace lensdyn::det
