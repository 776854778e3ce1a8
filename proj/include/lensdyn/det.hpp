#pragma once

// Deterministic doctrine: finite Moore machines presented as lenses
//   (update, readout) : (S, S) ⇆ (I, O),
// lenses and charts between interfaces, commuting squares, and the
// representable families (steady states, periodic orbits) of a system.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lensdyn/finset.hpp"

namespace lensdyn::det {

struct Interface {
  FinSet inputs;
  FinSet outputs;
  friend bool operator==(const Interface&, const Interface&) = default;
};

class System {
 public:
  // readout: S → O, update: S × I → S.
  System(FinMap readout, BinaryMap update);

  const FinSet& states() const { return readout_.dom(); }
  const FinSet& inputs() const { return update_.second(); }
  const FinSet& outputs() const { return readout_.cod(); }
  Interface interface() const { return {inputs(), outputs()}; }
  const FinMap& readout() const { return readout_; }
  const BinaryMap& update() const { return update_; }

  friend bool operator==(const System&, const System&) = default;

 private:
  FinMap readout_;
  BinaryMap update_;
};

// Vertical morphism (I, O) ⇆ (I', O'): fwd : O → O', bwd : O × I' → I.
class Lens {
 public:
  Lens(FinMap fwd, BinaryMap bwd);
  static Lens identity(const Interface& iface);

  Interface inner() const { return {bwd_.cod(), fwd_.dom()}; }
  Interface outer() const { return {bwd_.second(), fwd_.cod()}; }
  const FinMap& fwd() const { return fwd_; }
  const BinaryMap& bwd() const { return bwd_; }

  friend bool operator==(const Lens&, const Lens&) = default;

 private:
  FinMap fwd_;
  BinaryMap bwd_;
};

// Horizontal morphism (I, O) ⇉ (I', O'): fwd : O → O', push : O × I → I'.
class Chart {
 public:
  Chart(FinMap fwd, BinaryMap push);
  static Chart identity(const Interface& iface);

  Interface source() const { return {push_.second(), fwd_.dom()}; }
  Interface target() const { return {push_.cod(), fwd_.cod()}; }
  const FinMap& fwd() const { return fwd_; }
  const BinaryMap& push() const { return push_; }

  friend bool operator==(const Chart&, const Chart&) = default;

 private:
  FinMap fwd_;
  BinaryMap push_;
};

//   top:    1 ⇉ 2
//   left:   1 ⇆ 3      right: 2 ⇆ 4
//   bottom: 3 ⇉ 4
struct Square {
  Chart top;
  Chart bottom;
  Lens left;
  Lens right;
};

struct CheckResult {
  bool ok = true;
  // Which condition failed and the witnessing labels.
  std::string law;
  std::vector<std::string> witness;
  explicit operator bool() const { return ok; }
};

System compose_lens_system(const Lens& lens, const System& sys);
// l2 after l1.
Lens compose_lenses(const Lens& l1, const Lens& l2);
// c2 after c1.
Chart compose_charts(const Chart& c1, const Chart& c2);
System tensor_systems(const System& a, const System& b);
// ({*}, {*}, {*}) — the monoidal unit.
System trivial_system();

CheckResult check_square(const Square& sq);
// upper.bottom must equal lower.top.
Square paste_vertical(const Square& upper, const Square& lower);
// left.right must equal right.left.
Square paste_horizontal(const Square& left, const Square& right);

CheckResult check_system_morphism(const FinMap& phi, const System& sys,
                                  const System& target);

System walking_cycle(std::size_t k);

// Set of charts rep.interface ⇉ iface, in enumeration order. Each chart is
// labelled by, for every rep output in order, its image followed by the
// images of (output, input) for every rep input.
FinSet chart_hom_set(const Interface& rep, const Interface& iface);

// Covariant morphisms out of `rep` (which must expose its whole state) into
// `sys`, fibred over the charts between their interfaces. Total elements are
// labelled "phi(s_0)|...|phi(s_n)|<chart>".
Family representable_span(const System& rep, const System& sys);
// Serial reference for representable_span; same output.
Family representable_span_serial(const System& rep, const System& sys);

// {(s, i) : update(s, i) = s} over O × I.
Family steady_span(const System& sys);
Family periodic_orbit_span(const System& sys, std::size_t k);

// The lens acting on charts out of a k-cycle interface, as a span.
Span lens_to_span(const Lens& lens, const Interface& rep_interface);

struct TheoremCheck {
  bool ok = true;
  std::size_t composed_total = 0;
  std::size_t transported_total = 0;
  std::optional<std::string> mismatch;
  explicit operator bool() const { return ok; }
};

// periodic_orbit_span(lens ∘ sys, k) ≅ lens_to_span(lens) applied to
// periodic_orbit_span(sys, k).
TheoremCheck check_matrix_theorem(const Lens& lens, const System& sys, std::size_t k);

struct Step {
  std::string state;
  std::string output;
  friend bool operator==(const Step&, const Step&) = default;
};

std::vector<Step> run_word(const System& sys, const std::string& s0,
                           const std::vector<std::string>& word);

}  // namespace lensdyn::det
