#include <doctest.h>

#include <cmath>

#include "lensdyn/error.hpp"
#include "lensdyn/models.hpp"
#include "lensdyn/ode.hpp"
#include "lensdyn/random.hpp"

using namespace lensdyn;
using expr::parse;
using ode::ParamSignal;

namespace {

ode::System one_var(const std::string& field, std::vector<std::string> params = {}) {
  return ode::System({"s"}, {"out"}, std::move(params), {parse("s")}, {parse(field)});
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double error_at_one(double h) {
  auto tr = ode::rk4_solve(one_var("s"), {1.0}, ParamSignal::constant({}), 0.0, 1.0, h);
  return std::abs(tr.values.back()[0] - std::exp(1.0));
}

}  // namespace

TEST_SUITE("ode") {

TEST_CASE("predator-prey wiring by substitution") {
  auto rf = ode::tensor_ode(models::rabbit(), models::fox());
  CHECK(rf.state_vars() == std::vector<std::string>{"r", "f"});
  CHECK(rf.param_vars().size() == 4);
  auto lv = ode::compose_lens_ode(models::lv_lens(), rf);
  CHECK(expr::to_string(lv.field()[0]) == "alpha*r - c*f*r");
  CHECK(expr::to_string(lv.field()[1]) == "d*r*f - delta*f");
  CHECK(lv.state_vars() == rf.state_vars());
  CHECK(lv.param_vars() == std::vector<std::string>{"alpha", "c", "d", "delta"});

  const std::vector<double> p{1.0, 0.5, 0.2, 0.4};
  CHECK(ode::eval_field(lv, std::vector<double>{2.0, 1.0}, p) == std::vector<double>{1.0, 0.0});
  CHECK(ode::eval_field(lv, std::vector<double>{0.0, 0.0}, p) == std::vector<double>{0.0, 0.0});

  Rng rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const double r = rng.uniform(0, 10), f = rng.uniform(0, 10);
    const std::vector<double> q{rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
    auto got = ode::eval_field(lv, std::vector<double>{r, f}, q);
    auto want = models::lv_field(r, f, q[0], q[1], q[2], q[3]);
    CHECK(rel_err(got[0], want[0]) <= 1e-12);
    CHECK(rel_err(got[1], want[1]) <= 1e-12);
  }
}

TEST_CASE("tensor products concatenate") {
  ode::System empty({}, {}, {}, {}, {});
  auto r = models::rabbit();
  CHECK(ode::tensor_ode(r, empty) == r);
  CHECK_THROWS_AS(ode::tensor_ode(r, r), BoundaryError);
  auto rf = ode::tensor_ode(r, models::fox());
  const std::vector<double> p{1.1, 0.3, 0.7, 0.2};
  auto joint = ode::eval_field(rf, std::vector<double>{1.5, 2.5}, p);
  CHECK(joint[0] == ode::eval_field(r, std::vector<double>{1.5}, std::vector<double>{1.1, 0.3})[0]);
  CHECK(joint[1] == ode::eval_field(models::fox(), std::vector<double>{2.5}, std::vector<double>{0.7, 0.2})[0]);
}

TEST_CASE("system and lens validation") {
  CHECK_THROWS_AS(ode::System({"x"}, {"x"}, {}, {parse("x")}, {parse("1")}), ValidationError);
  CHECK_THROWS_WITH_AS(ode::System({"x"}, {"o"}, {}, {parse("x")}, {parse("k*x")}), doctest::Contains("'k'"),
                       ValidationError);
  CHECK_THROWS_AS(ode::System({"x"}, {"o"}, {}, {parse("x + k")}, {parse("1")}), ValidationError);
  try {
    ode::compose_lens_ode(models::lv_lens(), models::rabbit());
    FAIL("expected a boundary error");
  } catch (const BoundaryError& e) {
    CHECK(std::string(e.what()).find("F") != std::string::npos);
  }
}

TEST_CASE("identity and composite lenses") {
  auto rf = ode::tensor_ode(models::rabbit(), models::fox());
  auto id = ode::compose_lens_ode(ode::Lens::identity(rf), rf);
  auto lv = models::lv_lens();
  // A second lens renaming the outer params and rescaling the outputs.
  ode::Lens post({"R", "F"}, {"alpha", "c", "d", "delta"}, {"total"}, {"a", "k"}, {parse("R + F")},
                 {parse("a"), parse("k/2"), parse("k*R"), parse("a/3")});
  // Backward maps may not read the new outputs, and outer params may not shadow inner outputs.
  CHECK_THROWS_AS(ode::Lens({"R"}, {"p"}, {"o"}, {"q"}, {parse("R")}, {parse("o")}), ValidationError);
  CHECK_THROWS_AS(ode::Lens({"R"}, {"p"}, {"o"}, {"R"}, {parse("R")}, {parse("R")}), ValidationError);
  auto twice = ode::compose_lens_ode(post, ode::compose_lens_ode(lv, rf));
  auto once = ode::compose_lens_ode(ode::compose_ode_lenses(lv, post), rf);
  CHECK(twice.param_vars() == once.param_vars());

  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> x{rng.uniform(0, 5), rng.uniform(0, 5)};
    const std::vector<double> p4{rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
    CHECK(ode::eval_field(id, x, p4) == ode::eval_field(rf, x, p4));
    const std::vector<double> p2{rng.uniform(0, 2), rng.uniform(0, 2)};
    auto a = ode::eval_field(twice, x, p2), b = ode::eval_field(once, x, p2);
    for (std::size_t c = 0; c < 2; ++c) CHECK(rel_err(a[c], b[c]) <= 1e-12);
    CHECK(ode::eval_readout(twice, x) == ode::eval_readout(once, x));
  }
}

TEST_CASE("RK4 accuracy and order") {
  CHECK(error_at_one(1e-3) <= 1e-8);
  const double e1 = error_at_one(1e-2), e2 = error_at_one(5e-3), e3 = error_at_one(2.5e-3);
  CHECK(e1 / e2 >= 12.0);
  CHECK(e1 / e2 <= 20.0);
  CHECK(e2 / e3 >= 12.0);
  CHECK(e2 / e3 <= 20.0);

  auto walk = ode::rk4_solve(models::walking_line(), {0.0}, ParamSignal::constant({}), 0.0, 5.0, 1e-3);
  REQUIRE(walk.times.size() == 5001);
  for (std::size_t j = 0; j < walk.times.size(); ++j) CHECK(std::abs(walk.values[j][0] - walk.times[j]) <= 1e-12);
  CHECK(std::abs(walk.values.back()[0] - 5.0) <= 1e-12);
  CHECK(walk.outputs.back() == walk.values.back());
}

TEST_CASE("grids with a short final step") {
  auto tr = ode::rk4_solve(models::walking_line(), {1.0}, ParamSignal::constant({}), 0.0, 1.0, 0.3);
  CHECK(tr.times == std::vector<double>{0.0, 0.3, 0.6, 0.8999999999999999, 1.0});
  CHECK(std::abs(tr.values.back()[0] - 2.0) <= 1e-12);
  CHECK_THROWS_AS(ode::rk4_solve(models::walking_line(), {0.0}, ParamSignal::constant({}), 1.0, 1.0, 0.1),
                  ValidationError);
  CHECK_THROWS_AS(ode::rk4_solve(models::walking_line(), {0.0}, ParamSignal::constant({}), 0.0, 1.0, 2.0),
                  ValidationError);
  CHECK_THROWS_WITH_AS(ode::rk4_solve(one_var("s^2"), {1.0}, ParamSignal::constant({}), 0.0, 2.0, 1e-2),
                       doctest::Contains("t="), EvalError);
}

TEST_CASE("parameter signals hold the last sample") {
  auto sig = ParamSignal::table({0.0, 1.0, 2.0}, {{10.0}, {20.0}, {30.0}});
  CHECK(sig.at(-1.0)[0] == 10.0);
  CHECK(sig.at(0.5)[0] == 10.0);
  CHECK(sig.at(1.0)[0] == 20.0);
  CHECK(sig.at(7.0)[0] == 30.0);
  CHECK_THROWS_AS(ParamSignal::table({0.0, 0.0}, {{1.0}, {2.0}}), ValidationError);
  // ds/dt = k with k stepping from 1 to 3 at t = 1. Stages sample at their own
  // times, so the step ending at t = 1 sees k = 3 in its last stage:
  // 0.75 + 0.25*(1 + 2 + 2 + 3)/6 + 3.
  auto tr = ode::rk4_solve(one_var("k", {"k"}), {0.0}, ParamSignal::table({0.0, 1.0}, {{1.0}, {3.0}}), 0.0, 2.0, 0.25);
  CHECK(std::abs(tr.values[3][0] - 0.75) <= 1e-12);
  CHECK(std::abs(tr.values.back()[0] - (0.75 + 1.0 / 3.0 + 3.0)) <= 1e-12);
  CHECK_THROWS_AS(ode::rk4_solve(one_var("k", {"k"}), {0.0}, ParamSignal::constant({}), 0.0, 1.0, 0.1),
                  BoundaryError);
}

TEST_CASE("predator-prey trajectory stays positive") {
  auto lv = ode::compose_lens_ode(models::lv_lens(), ode::tensor_ode(models::rabbit(), models::fox()));
  auto tr = ode::rk4_solve(lv, {2.0, 1.0}, ParamSignal::constant({1.0, 0.5, 0.2, 0.4}), 0.0, 5.0, 1e-3);
  CHECK(tr.times.size() == 5001);
  for (const auto& row : tr.values) CHECK((row[0] > 0 && row[1] > 0));
  auto csv = ode::trajectory_csv(tr);
  CHECK(csv.rfind("time,r,f,R,F\n0,2,1,2,1\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5002);
}

TEST_CASE("residuals") {
  auto walk = ode::rk4_solve(models::walking_line(), {0.0}, ParamSignal::constant({}), 0.0, 1.0, 0.1);
  auto r0 = ode::check_residual(models::walking_line(), walk, ParamSignal::constant({}), 1e-12);
  CHECK(r0);
  CHECK(r0.max_residual <= 1e-12);

  const auto sys = one_var("s");
  auto tr = ode::rk4_solve(sys, {1.0}, ParamSignal::constant({}), 0.0, 1.0, 1e-3);
  CHECK(ode::check_residual(sys, tr, ParamSignal::constant({}), 1e-5));
  // Central differences are O(h^2); C = 1 covers e/6 with room to spare.
  for (double h : {1e-2, 5e-3, 1e-3}) {
    auto t = ode::rk4_solve(sys, {1.0}, ParamSignal::constant({}), 0.0, 1.0, h);
    CHECK(ode::check_residual(sys, t, ParamSignal::constant({}), 1.0 * h * h));
  }

  auto bad = tr;
  bad.values[400][0] += 0.1;
  auto r = ode::check_residual(sys, bad, ParamSignal::constant({}), 1e-5);
  CHECK_FALSE(r);
  CHECK(r.index >= 399);
  CHECK(r.index <= 401);
  CHECK(r.component == 0);

  auto short_tr = tr;
  short_tr.times.resize(2);
  short_tr.values.resize(2);
  CHECK_THROWS_AS(ode::check_residual(sys, short_tr, ParamSignal::constant({}), 1.0), ValidationError);
}

TEST_CASE("substituting then solving equals solving with the wiring") {
  auto rf = ode::tensor_ode(models::rabbit(), models::fox());
  auto rep = ode::check_solve_functoriality(models::lv_lens(), rf, {2.0, 1.0},
                                            ParamSignal::constant({1.0, 0.5, 0.2, 0.4}), 0.0, 5.0, 1e-3, 1e-9);
  CHECK(rep);
  CHECK(rep.max_deviation <= 1e-9);
  CHECK(rep.composed.times.size() == 5001);

  auto id = ode::check_solve_functoriality(ode::Lens::identity(rf), rf, {2.0, 1.0},
                                           ParamSignal::constant({1.0, 0.1, 0.05, 0.4}), 0.0, 5.0, 1e-3, 1e-12);
  CHECK(id);

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    // ds/dt = a0 + a1*s + a2*s^2 * p with p = w0 + w1*o + q wired from the output.
    const double a0 = rng.uniform(-1, 1), a1 = rng.uniform(-1, 1), a2 = rng.uniform(-0.2, 0.2);
    const double w0 = rng.uniform(-1, 1), w1 = rng.uniform(-0.5, 0.5);
    auto lit = [](double v) { return ode::format_double(v); };
    auto sys = one_var("(" + lit(a0) + ") + (" + lit(a1) + ")*s + (" + lit(a2) + ")*s^2*p", {"p"});
    ode::Lens wire({"out"}, {"p"}, {"y"}, {"q"}, {parse("out")}, {parse("(" + lit(w0) + ") + (" + lit(w1) + ")*out + q")});
    auto r = ode::check_solve_functoriality(wire, sys, {rng.uniform(-0.5, 0.5)}, ParamSignal::constant({0.1}),
                                            0.0, 1.0, 1e-2, 1e-9);
    CHECK_MESSAGE(r, "deviation " << r.max_deviation);
  }
}

}  // TEST_SUITE
