#pragma once

// Small named systems used by the fixtures, tests and the check command.

#include <array>

#include "lensdyn/det.hpp"
#include "lensdyn/ode.hpp"
#include "lensdyn/stoch.hpp"

namespace lensdyn::models {

// States {s0, s1}, inputs {set, reset, hold}, outputs {lo, hi}.
det::System flipflop();
// (I, O) of flipflop ⇆ ({tick}, {star}): lo ↦ set, hi ↦ reset.
det::Lens feedback_lens();
// compose_lens_system(feedback_lens(), flipflop()).
det::System oscillator();
// The flip-flop where set/reset only succeed with probability 9/10.
stoch::System noisy_flipflop();

// dr/dt = alpha*r - beta*r, output R = r.
ode::System rabbit();
// df/dt = gamma*f - delta*f, output F = f.
ode::System fox();
// beta ↦ c*F, gamma ↦ d*R; alpha, delta pass through.
ode::Lens lv_lens();
// Predator-prey right-hand sides written out by hand, params (alpha, c, d, delta).
std::array<double, 2> lv_field(double r, double f, double alpha, double c, double d,
                               double delta);
// ds/dt = 1, output s_out = s.
ode::System walking_line();

}  // namespace lensdyn::models
