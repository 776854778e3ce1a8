#pragma once

// Monadic doctrine over the finite probability monad: Markov systems whose
// update returns an exact rational distribution over states.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lensdyn/det.hpp"
#include "lensdyn/finset.hpp"
#include "lensdyn/random.hpp"

namespace lensdyn::stoch {

using Rational = boost::multiprecision::cpp_rational;

// Accepts "p/q" or "p".
Rational parse_rational(std::string_view text);
// Always "p/q" in lowest terms with q > 0.
std::string format_rational(const Rational& r);

class Dist {
 public:
  // Weights are indexed like `support`; zero weights are allowed.
  Dist(FinSet support, std::vector<Rational> weights);
  static Dist dirac(const FinSet& support, std::size_t at);

  const FinSet& support() const { return support_; }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& operator[](std::size_t i) const { return weights_[i]; }
  bool is_dirac_at(std::size_t i) const { return weights_[i] == 1; }

  friend bool operator==(const Dist&, const Dist&) = default;

 private:
  FinSet support_;
  std::vector<Rational> weights_;
};

class System {
 public:
  // update[s * |inputs| + i] is the distribution of the next state.
  System(FinMap readout, FinSet inputs, std::vector<Dist> update);

  const FinSet& states() const { return readout_.dom(); }
  const FinSet& inputs() const { return inputs_; }
  const FinSet& outputs() const { return readout_.cod(); }
  det::Interface interface() const { return {inputs_, outputs()}; }
  const FinMap& readout() const { return readout_; }
  const Dist& update(std::size_t s, std::size_t i) const {
    return update_[s * inputs_.size() + i];
  }
  const std::vector<Dist>& update_table() const { return update_; }

  friend bool operator==(const System&, const System&) = default;

 private:
  FinMap readout_;
  FinSet inputs_;
  std::vector<Dist> update_;
};

System compose_lens_stoch(const det::Lens& lens, const System& sys);
System tensor_stoch(const System& a, const System& b);
Dist step_dist(const System& sys, const Dist& d, std::string_view input);

// Sampler version string recorded in run reports.
inline constexpr std::string_view kSamplerName = "mt19937_64/inverse-cdf-53bit/v1";

// Inverse-CDF sampling over the canonical state order. Each draw takes the top
// 53 bits u of one mt19937_64 output (engine seeded with `seed`) and picks the
// first state whose cumulative weight c satisfies u < c * 2^53, compared
// exactly.
std::vector<std::string> simulate_stoch(const System& sys, const std::string& s0,
                                        const std::vector<std::string>& word,
                                        std::uint64_t seed);

System embed_det(const det::System& sys);
Family dirac_steady_span(const System& sys);

// Sizes in [1, max_size]; each row has small random integer weights,
// normalized, with some weights zero.
System random_system(Rng& rng, std::size_t max_size);

}  // namespace lensdyn::stoch
