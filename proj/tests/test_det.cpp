#include <doctest.h>

#include "lensdyn/det_gen.hpp"
#include "lensdyn/error.hpp"
#include "lensdyn/models.hpp"
#include "oracles.hpp"

using namespace lensdyn;
using det::System;

namespace {

System from_oracle(const oracle::Machine& m) {
  FinSet S(m.S), I(m.I), O(m.O);
  std::map<std::string, std::map<std::string, std::string>> u;
  for (const auto& [cell, t] : m.u) u[cell.first][cell.second] = t;
  return System(FinMap::from_labels(S, O, m.r), BinaryMap::from_labels(S, I, S, u));
}

std::vector<std::string> fiber_labels(const Family& fam, const std::string& base) {
  std::vector<std::string> out;
  for (auto z : fam.fiber(fam.base().index_of(base))) out.push_back(fam.total()[z]);
  return out;
}

}  // namespace

TEST_SUITE("det") {

TEST_CASE("flip-flop wired through the feedback lens oscillates") {
  auto osc = det::compose_lens_system(models::feedback_lens(), models::flipflop());
  CHECK(osc.update().at("s0", "tick") == "s1");
  CHECK(osc.update().at("s1", "tick") == "s0");
  CHECK(osc.readout().at("s0") == "star");
  CHECK(osc == from_oracle(oracle::compose(oracle::plain(models::feedback_lens()),
                                           oracle::plain(models::flipflop()))));
  CHECK(det::compose_lens_system(det::Lens::identity(models::flipflop().interface()), models::flipflop()) ==
        models::flipflop());
  CHECK_THROWS_AS(det::compose_lens_system(models::feedback_lens(), osc), BoundaryError);
}

TEST_CASE("lens composition matches the label-table oracle") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto sys = det::random_system(rng, 4);
    auto l1 = det::random_lens(rng, sys.interface(), det::random_interface(rng, 1, 4, "a"));
    auto l2 = det::random_lens(rng, l1.outer(), det::random_interface(rng, 1, 4, "b"));
    auto expected = oracle::compose(oracle::plain(l2), oracle::compose(oracle::plain(l1), oracle::plain(sys)));
    CHECK(det::compose_lens_system(det::compose_lenses(l1, l2), sys) == from_oracle(expected));
    // A one-state system stays one-state.
    auto one = det::random_system(rng, det::labelled_set("s", 1), sys.interface());
    CHECK(det::compose_lens_system(l1, one).states().size() == 1);
  }
}

TEST_CASE("tensor products") {
  auto ff = models::flipflop();
  auto t = det::tensor_systems(ff, det::trivial_system());
  CHECK(t.states().size() == 2);
  CHECK(t.update().at("s0|*", "set|*") == "s1|*");
  CHECK(t.readout().at("s1|*") == "hi|*");

  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    auto a = det::random_system(rng, 3), b = det::random_system(rng, 3);
    auto ab = det::tensor_systems(a, b);
    CHECK(ab.states().size() == a.states().size() * b.states().size());
    auto fa = oracle::fiber_counts(det::steady_span(a)), fb = oracle::fiber_counts(det::steady_span(b));
    auto fab = oracle::fiber_counts(det::steady_span(ab));
    // Base of the tensor is (Oa|Ob)|(Ia|Ib); component bases are Oa|Ia and Ob|Ib.
    std::uint64_t total = 0;
    for (const auto& [ka, na] : fa)
      for (const auto& [kb, nb] : fb) {
        auto oa = ka.substr(0, ka.find('|')), ia = ka.substr(ka.find('|') + 1);
        auto ob = kb.substr(0, kb.find('|')), ib = kb.substr(kb.find('|') + 1);
        CHECK(fab[oa + "|" + ob + "|" + ia + "|" + ib] == na * nb);
        total += na * nb;
      }
    CHECK(det::steady_span(ab).total().size() == total);
  }
}

TEST_CASE("system morphisms") {
  auto ff = models::flipflop();
  CHECK(det::check_system_morphism(FinMap::identity(ff.states()), ff, ff));
  // Relabel s0 <-> t0, s1 <-> t1.
  FinSet T{"t1", "t0"};
  System relabeled(FinMap::from_labels(T, ff.outputs(), {{"t0", "lo"}, {"t1", "hi"}}),
                   BinaryMap::from_labels(T, ff.inputs(), T,
                                          {{"t0", {{"set", "t1"}, {"reset", "t0"}, {"hold", "t0"}}},
                                           {"t1", {{"set", "t1"}, {"reset", "t0"}, {"hold", "t1"}}}}));
  CHECK(det::check_system_morphism(FinMap::from_labels(ff.states(), T, {{"s0", "t0"}, {"s1", "t1"}}), ff,
                                   relabeled));
  FinSet one{"u"};
  System collapsed(FinMap::from_labels(one, ff.outputs(), {{"u", "lo"}}),
                   BinaryMap::from_labels(one, ff.inputs(), one, {{"u", {{"set", "u"}, {"reset", "u"}, {"hold", "u"}}}}));
  auto r = det::check_system_morphism(FinMap::from_labels(ff.states(), one, {{"s0", "u"}, {"s1", "u"}}), ff,
                                      collapsed);
  CHECK_FALSE(r);
  CHECK(r.law == "readout");
  CHECK(r.witness == std::vector<std::string>{"s1"});
}

TEST_CASE("squares: identities commute, generated squares commute, mutations are located") {
  auto iface = models::flipflop().interface();
  det::Square id{det::Chart::identity(iface), det::Chart::identity(iface), det::Lens::identity(iface),
                 det::Lens::identity(iface)};
  CHECK(det::check_square(id));

  Rng rng(21);
  int completed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto c1 = det::random_interface(rng, 2, 3, "1");
    auto top = det::random_injective_chart(rng, c1, det::random_interface(rng, 3, 4, "2"));
    auto sq = det::complete_square(rng, top, det::random_lens(rng, c1, det::random_interface(rng, 1, 3, "3")), "4");
    if (!sq) continue;
    ++completed;
    CHECK(oracle::square_commutes(*sq));
    CHECK(det::check_square(*sq));
    auto m = det::mutate_square(rng, *sq);
    if (!m) continue;
    CHECK_FALSE(oracle::square_commutes(m->square));
    auto r = det::check_square(m->square);
    CHECK_FALSE(r);
    CHECK(r.law == m->law);
    CHECK(r.witness == m->witness);
  }
  CHECK(completed > 150);
}

TEST_CASE("walking cycles") {
  auto w3 = det::walking_cycle(3);
  CHECK(w3.states().elements() == std::vector<std::string>{"c0", "c1", "c2"});
  CHECK(w3.update().at("c2", "*") == "c0");
  CHECK(w3.readout() == FinMap::identity(w3.states()));
  CHECK(det::walking_cycle(1).update().at("c0", "*") == "c0");
  CHECK_THROWS_AS(det::walking_cycle(0), ValidationError);
  CHECK_THROWS_AS(det::representable_span(models::flipflop(), models::flipflop()), Error);
}

TEST_CASE("flip-flop steady states") {
  auto ff = models::flipflop();
  auto rep = det::representable_span(det::walking_cycle(1), ff);
  CHECK(oracle::fiber_counts(rep) ==
        oracle::Counts{{"lo|reset", 1}, {"lo|hold", 1}, {"hi|set", 1}, {"hi|hold", 1}});
  CHECK(fiber_labels(rep, "lo|reset") == std::vector<std::string>{"s0|lo|reset"});
  CHECK(fiber_labels(rep, "hi|hold") == std::vector<std::string>{"s1|hi|hold"});
  auto steady = det::steady_span(ff);
  CHECK(steady.total().elements() == std::vector<std::string>{"s0|reset", "s0|hold", "s1|set", "s1|hold"});
  CHECK(steady.base() == product(ff.outputs(), ff.inputs()));
}

TEST_CASE("oscillator orbits") {
  auto osc = models::oscillator();
  CHECK(det::steady_span(osc).total().empty());
  CHECK(det::periodic_orbit_span(osc, 1).total().empty());
  auto two = det::periodic_orbit_span(osc, 2);
  CHECK(two.base().elements() == std::vector<std::string>{"star|tick|star|tick"});
  CHECK(fiber_labels(two, "star|tick|star|tick") ==
        std::vector<std::string>{"s0|s1|star|tick|star|tick", "s1|s0|star|tick|star|tick"});
}

TEST_CASE("flip-flop period-2 orbits") {
  auto two = det::periodic_orbit_span(models::flipflop(), 2);
  CHECK(oracle::fiber_counts(two) == oracle::orbit_counts(oracle::plain(models::flipflop()), 2));
  // phi(0) = s1 (hi) steps to phi(1) = s0 (lo) on reset and back on set.
  CHECK(fiber_labels(two, "hi|reset|lo|set") == std::vector<std::string>{"s1|s0|hi|reset|lo|set"});
  CHECK(fiber_labels(two, "hi|set|lo|reset").empty());
}

TEST_CASE("orbit spans agree with brute-force enumeration; parallel agrees with serial") {
  Rng rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    auto sys = det::random_system(rng, 4);
    const std::size_t k = 1 + trial % 3;
    auto fam = det::periodic_orbit_span(sys, k);
    CHECK(oracle::fiber_counts(fam) == oracle::orbit_counts(oracle::plain(sys), k));
    CHECK(fam == det::representable_span_serial(det::walking_cycle(k), sys));
  }
}

TEST_CASE("systems with no states have empty orbit families") {
  FinSet none, I{"i"}, O{"o"};
  System empty(FinMap(none, O, {}), BinaryMap(none, I, none, {}));
  for (std::size_t k = 1; k <= 3; ++k) {
    auto fam = det::periodic_orbit_span(empty, k);
    CHECK(fam.total().empty());
    CHECK(fam.base().size() == 1);
  }
  CHECK(det::check_matrix_theorem(det::Lens::identity(empty.interface()), empty, 2));
}

TEST_CASE("lens spans") {
  auto l = models::feedback_lens();
  auto s = det::lens_to_span(l, det::walking_cycle(1).interface());
  CHECK(s.apex().elements() == std::vector<std::string>{"lo|tick", "hi|tick"});
  CHECK(s.left().at("lo|tick") == "lo|set");
  CHECK(s.left().at("hi|tick") == "hi|reset");
  CHECK(s.right().at("lo|tick") == "star|tick");
  CHECK(s.right().at("hi|tick") == "star|tick");
  for (const auto& row : span_to_matrix(s)) CHECK(std::count(row.begin(), row.end(), 1u) <= 1);

  auto iface = models::flipflop().interface();
  for (std::size_t k = 1; k <= 2; ++k)
    CHECK(spans_isomorphic(det::lens_to_span(det::Lens::identity(iface), det::walking_cycle(k).interface()),
                           identity_span(power(product(iface.outputs, iface.inputs), k))));
}

TEST_CASE("matrix theorem on the flip-flop") {
  auto r = det::check_matrix_theorem(models::feedback_lens(), models::flipflop(), 1);
  CHECK(r);
  CHECK(r.composed_total == 0);
  CHECK(r.transported_total == 0);
  auto r2 = det::check_matrix_theorem(models::feedback_lens(), models::flipflop(), 2);
  CHECK(r2);
  CHECK(r2.composed_total == 2);
  for (std::size_t k = 1; k <= 3; ++k)
    CHECK(det::check_matrix_theorem(det::Lens::identity(models::flipflop().interface()), models::flipflop(), k));
}

TEST_CASE("matrix theorem against the transport oracle") {
  Rng rng(99);
  for (int trial = 0; trial < 150; ++trial) {
    auto sys = det::random_system(rng, 4);
    auto lens = det::random_lens(rng, sys.interface(), det::random_interface(rng, 1, 4, "x"));
    const std::size_t k = 1 + trial % 3;
    auto plain_lens = oracle::plain(lens);
    auto plain_sys = oracle::plain(sys);
    auto composed = oracle::orbit_counts(oracle::compose(plain_lens, plain_sys), k);
    CHECK(composed == oracle::transported_counts(plain_lens, plain_sys, k));
    CHECK(oracle::fiber_counts(det::periodic_orbit_span(det::compose_lens_system(lens, sys), k)) == composed);
    CHECK(det::check_matrix_theorem(lens, sys, k));
  }
}

TEST_CASE("running words") {
  auto ff = models::flipflop();
  auto steps = det::run_word(ff, "s0", {"set", "hold", "reset"});
  REQUIRE(steps.size() == 4);
  CHECK(steps[1] == det::Step{"s1", "hi"});
  CHECK(steps[2].state == "s1");
  CHECK(steps[3].state == "s0");
  CHECK(det::run_word(ff, "s1", {}) == std::vector<det::Step>{{"s1", "hi"}});
  CHECK_THROWS_AS(det::run_word(ff, "s2", {}), ValidationError);
  CHECK_THROWS_AS(det::run_word(ff, "s0", {"tick"}), ValidationError);

  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    auto sys = det::random_system(rng, 4);
    auto lens = det::random_lens(rng, sys.interface(), det::random_interface(rng, 1, 4, "x"));
    std::vector<std::string> word(rng.below(8));
    for (auto& w : word) w = lens.outer().inputs[rng.below(lens.outer().inputs.size())];
    auto composed = det::run_word(det::compose_lens_system(lens, sys), sys.states()[0], word);
    // Translate each outer input through bwd at the current output, step by step.
    auto s = sys.states()[0];
    for (std::size_t j = 0; j < word.size(); ++j) {
      s = sys.update().at(s, lens.bwd().at(sys.readout().at(s), word[j]));
      CHECK(composed[j + 1].state == s);
      CHECK(composed[j + 1].output == lens.fwd().at(sys.readout().at(s)));
    }
  }
}

}  // TEST_SUITE
