#include "lensdyn/suites.hpp"

#include <omp.h>

#include <exception>

#include "lensdyn/det.hpp"
#include "lensdyn/det_gen.hpp"
#include "lensdyn/stoch.hpp"

namespace lensdyn::suites {

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return "(" + out + ")";
}

std::optional<Failure> guarded(const CaseFn& fn, std::size_t i, std::uint64_t seed) {
  Rng rng(seed, i);
  try {
    return fn(i, rng);
  } catch (const std::exception& e) {
    return Failure{i, "exception", e.what()};
  }
}

det::Interface grow(Rng& rng, const det::Interface& from, const std::string& tag) {
  return {det::labelled_set("i" + tag + "_", from.inputs.size() + rng.below(2)),
          det::labelled_set("o" + tag + "_", from.outputs.size() + rng.below(2))};
}

std::optional<Failure> square_failure(std::size_t i, const char* which,
                                      const det::CheckResult& r) {
  if (r) return std::nullopt;
  return Failure{i, which, r.law + " condition fails at " + join(r.witness)};
}

}  // namespace

SuiteResult run_cases(const std::string& name, const Options& opts, const CaseFn& fn) {
  std::vector<std::optional<Failure>> results(opts.cases);
  if (opts.exec == Exec::Parallel) {
    const auto n = static_cast<long long>(opts.cases);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i)
      results[static_cast<std::size_t>(i)] = guarded(fn, static_cast<std::size_t>(i), opts.seed);
  } else {
    for (std::size_t i = 0; i < opts.cases; ++i) results[i] = guarded(fn, i, opts.seed);
  }
  SuiteResult out{name, opts.cases, 0, {}};
  for (auto& r : results) {
    if (r) out.failures.push_back(std::move(*r));
    else ++out.passed;
  }
  return out;
}

SuiteResult matrix_theorem_suite(const Options& opts) {
  return run_cases("matrix-theorem", opts, [&](std::size_t i, Rng& rng) -> std::optional<Failure> {
    auto sys = det::random_system(rng, opts.max_size);
    auto lens = det::random_lens(rng, sys.interface(),
                                 det::random_interface(rng, 1, opts.max_size, "x"));
    const auto k = 1 + i % opts.max_k;
    auto r = det::check_matrix_theorem(lens, sys, k);
    if (r) return std::nullopt;
    return Failure{i, "matrix-theorem",
                   "k=" + std::to_string(k) + ": fibers differ over " + r.mismatch.value_or("?")};
  });
}

SuiteResult lens_law_suite(const Options& opts) {
  const auto max = std::min<std::size_t>(opts.max_size, 4);
  return run_cases("lens-laws", opts, [max](std::size_t i, Rng& rng) -> std::optional<Failure> {
    auto a = det::random_interface(rng, 1, max, "a");
    auto b = det::random_interface(rng, 1, max, "b");
    auto c = det::random_interface(rng, 1, max, "c");
    auto d = det::random_interface(rng, 1, max, "d");
    auto l1 = det::random_lens(rng, a, b);
    auto l2 = det::random_lens(rng, b, c);
    auto l3 = det::random_lens(rng, c, d);
    using det::compose_lenses;
    if (!(compose_lenses(compose_lenses(l1, l2), l3) == compose_lenses(l1, compose_lenses(l2, l3))))
      return Failure{i, "lens-associativity", "tables differ"};
    if (!(compose_lenses(det::Lens::identity(a), l1) == l1) ||
        !(compose_lenses(l1, det::Lens::identity(b)) == l1))
      return Failure{i, "lens-unit", "tables differ"};

    auto g1 = det::random_chart(rng, a, b);
    auto g2 = det::random_chart(rng, b, c);
    auto g3 = det::random_chart(rng, c, d);
    using det::compose_charts;
    if (!(compose_charts(compose_charts(g1, g2), g3) == compose_charts(g1, compose_charts(g2, g3))))
      return Failure{i, "chart-associativity", "tables differ"};
    if (!(compose_charts(det::Chart::identity(a), g1) == g1) ||
        !(compose_charts(g1, det::Chart::identity(b)) == g1))
      return Failure{i, "chart-unit", "tables differ"};

    auto sys = det::random_system(rng, det::labelled_set("s", rng.between(1, max)), a);
    if (!(det::compose_lens_system(l2, det::compose_lens_system(l1, sys)) ==
          det::compose_lens_system(compose_lenses(l1, l2), sys)))
      return Failure{i, "lens-action", "tables differ"};
    return std::nullopt;
  });
}

SuiteResult pasting_suite(const Options& opts) {
  return run_cases("square-pasting", opts, [](std::size_t i, Rng& rng) -> std::optional<Failure> {
    auto c1 = det::random_interface(rng, 1, 3, "1");
    auto c2 = grow(rng, c1, "2");
    auto c3 = det::random_interface(rng, 1, 3, "3");
    auto top = det::random_injective_chart(rng, c1, c2);
    auto sq1 = det::complete_square(rng, top, det::random_lens(rng, c1, c3), "4");
    if (!sq1) return Failure{i, "generator", "could not complete square"};
    if (auto f = square_failure(i, "generated-square", det::check_square(*sq1))) return f;

    auto lower_lens = det::random_lens(rng, sq1->left.outer(), det::random_interface(rng, 1, 3, "5"));
    auto sq2 = det::complete_square(rng, sq1->bottom, lower_lens, "6");
    if (!sq2) return Failure{i, "generator", "could not complete lower square"};
    if (auto f = square_failure(i, "vertical-pasting", det::check_square(det::paste_vertical(*sq1, *sq2))))
      return f;

    auto side = det::random_injective_chart(rng, c2, grow(rng, c2, "7"));
    auto sq3 = det::complete_square(rng, side, sq1->right, "8");
    if (!sq3) return Failure{i, "generator", "could not complete side square"};
    if (auto f = square_failure(i, "horizontal-pasting",
                                det::check_square(det::paste_horizontal(*sq1, *sq3))))
      return f;
    return std::nullopt;
  });
}

SuiteResult mutation_suite(const Options& opts) {
  return run_cases("square-mutation", opts, [](std::size_t i, Rng& rng) -> std::optional<Failure> {
    det::Interface c1{det::labelled_set("i1_", rng.between(2, 3)),
                      det::labelled_set("o1_", rng.between(1, 3))};
    auto top = det::random_injective_chart(rng, c1, grow(rng, c1, "2"));
    auto sq = det::complete_square(rng, top,
                                   det::random_lens(rng, c1, det::random_interface(rng, 1, 3, "3")),
                                   "4");
    if (!sq) return Failure{i, "generator", "could not complete square"};
    auto m = det::mutate_square(rng, *sq);
    if (!m) return Failure{i, "generator", "no mutation available"};
    auto r = det::check_square(m->square);
    if (r) return Failure{i, "mutation-undetected", "mutated entry " + join(m->witness)};
    if (r.law != m->law || r.witness != m->witness)
      return Failure{i, "mutation-mislocated",
                     "expected " + join(m->witness) + ", reported " + join(r.witness)};
    return std::nullopt;
  });
}

SuiteResult representability_suite(const Options& opts) {
  return run_cases("representability", opts, [&](std::size_t i, Rng& rng) -> std::optional<Failure> {
    auto sys = det::random_system(rng, opts.max_size);
    auto rep = det::representable_span(det::walking_cycle(1), sys);
    auto steady = det::steady_span(sys);
    if (!(rep.base() == steady.base())) return Failure{i, "representability", "bases differ"};
    if (rep.total().size() != steady.total().size())
      return Failure{i, "representability", "totals differ in size"};
    // rep elements are "s|o|i"; steady elements are "s|i".
    for (std::size_t z = 0; z < rep.total().size(); ++z) {
      const auto& label = rep.total()[z];
      const auto first = label.find(kTupleSep);
      const auto last = label.rfind(kTupleSep);
      auto match = steady.total().find(label.substr(0, first) + kTupleSep + label.substr(last + 1));
      if (!match || steady.proj()(*match) != rep.proj()(z))
        return Failure{i, "representability", "no steady state matches " + label};
    }
    return std::nullopt;
  });
}

SuiteResult stochastic_suite(const Options& opts) {
  return run_cases("stochastic", opts, [&](std::size_t i, Rng& rng) -> std::optional<Failure> {
    using stoch::Rational;
    auto sys = stoch::random_system(rng, opts.max_size);
    std::vector<Rational> w(sys.states().size());
    Rational total = 0;
    for (auto& x : w) total += (x = Rational(static_cast<long long>(rng.between(1, 9))));
    for (auto& x : w) x /= total;
    stoch::Dist d(sys.states(), std::move(w));
    for (const auto& input : sys.inputs()) {
      d = stoch::step_dist(sys, d, input);
      Rational sum = 0;
      for (const auto& x : d.weights()) sum += x;
      if (sum != 1) return Failure{i, "step-normalization", "sum " + stoch::format_rational(sum)};
    }
    auto lens = det::random_lens(rng, sys.interface(), det::random_interface(rng, 1, opts.max_size, "x"));
    const auto composed = stoch::compose_lens_stoch(lens, sys);
    for (const auto& row : composed.update_table()) {
      Rational sum = 0;
      for (const auto& x : row.weights()) sum += x;
      if (sum != 1) return Failure{i, "lens-normalization", "sum " + stoch::format_rational(sum)};
    }

    auto a = det::random_system(rng, opts.max_size);
    auto b = det::random_system(rng, 3);
    auto dl = det::random_lens(rng, a.interface(), det::random_interface(rng, 1, opts.max_size, "y"));
    if (!(stoch::embed_det(det::compose_lens_system(dl, a)) ==
          stoch::compose_lens_stoch(dl, stoch::embed_det(a))))
      return Failure{i, "embed-lens", "tables differ"};
    if (!(stoch::embed_det(det::tensor_systems(a, b)) ==
          stoch::tensor_stoch(stoch::embed_det(a), stoch::embed_det(b))))
      return Failure{i, "embed-tensor", "tables differ"};
    return std::nullopt;
  });
}

}  // namespace lensdyn::suites
