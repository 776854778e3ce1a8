#include "lensdyn/models.hpp"

namespace lensdyn::models {

using expr::parse;

det::System flipflop() {
  FinSet S{"s0", "s1"}, I{"set", "reset", "hold"}, O{"lo", "hi"};
  return det::System(FinMap::from_labels(S, O, {{"s0", "lo"}, {"s1", "hi"}}),
                     BinaryMap::from_labels(S, I, S,
                                            {{"s0", {{"set", "s1"}, {"reset", "s0"}, {"hold", "s0"}}},
                                             {"s1", {{"set", "s1"}, {"reset", "s0"}, {"hold", "s1"}}}}));
}

det::Lens feedback_lens() {
  FinSet I{"set", "reset", "hold"}, O{"lo", "hi"}, I2{"tick"}, O2{"star"};
  return det::Lens(FinMap::from_labels(O, O2, {{"lo", "star"}, {"hi", "star"}}),
                   BinaryMap::from_labels(O, I2, I, {{"lo", {{"tick", "set"}}}, {"hi", {{"tick", "reset"}}}}));
}

det::System oscillator() { return det::compose_lens_system(feedback_lens(), flipflop()); }

stoch::System noisy_flipflop() {
  using stoch::Rational;
  auto ff = flipflop();
  const Rational hit(9, 10), miss(1, 10);
  std::vector<stoch::Dist> update;
  for (std::size_t s = 0; s < ff.states().size(); ++s)
    for (std::size_t i = 0; i < ff.inputs().size(); ++i) {
      const auto target = ff.update()(s, i);
      std::vector<Rational> w(2, Rational(0));
      if (target == s) {
        w[s] = 1;
      } else {
        w[target] = hit;
        w[s] = miss;
      }
      update.emplace_back(ff.states(), std::move(w));
    }
  return stoch::System(ff.readout(), ff.inputs(), std::move(update));
}

ode::System rabbit() {
  return ode::System({"r"}, {"R"}, {"alpha", "beta"}, {parse("r")}, {parse("alpha*r - beta*r")});
}

ode::System fox() {
  return ode::System({"f"}, {"F"}, {"gamma", "delta"}, {parse("f")}, {parse("gamma*f - delta*f")});
}

ode::Lens lv_lens() {
  return ode::Lens({"R", "F"}, {"alpha", "beta", "gamma", "delta"}, {"R", "F"},
                   {"alpha", "c", "d", "delta"}, {parse("R"), parse("F")},
                   {parse("alpha"), parse("c*F"), parse("d*R"), parse("delta")});
}

std::array<double, 2> lv_field(double r, double f, double alpha, double c, double d,
                               double delta) {
  return {alpha * r - c * f * r, d * r * f - delta * f};
}

ode::System walking_line() { return ode::System({"s"}, {"s_out"}, {}, {parse("s")}, {parse("1")}); }

}  // namespace lensdyn::models
