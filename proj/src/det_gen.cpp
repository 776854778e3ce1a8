#include "lensdyn/det_gen.hpp"

#include <numeric>

#include "lensdyn/error.hpp"

namespace lensdyn::det {

namespace {

std::vector<std::size_t> random_table(Rng& rng, std::size_t n, std::size_t cod) {
  std::vector<std::size_t> t(n);
  if (cod == 0) {
    if (n != 0) throw ValidationError("no map into an empty set");
    return t;
  }
  for (auto& v : t) v = rng.below(cod);
  return t;
}

std::vector<std::size_t> random_injection(Rng& rng, std::size_t n, std::size_t cod) {
  if (n > cod) throw ValidationError("no injection into a smaller set");
  std::vector<std::size_t> pool(cod);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t j = 0; j < n; ++j) std::swap(pool[j], pool[j + rng.below(cod - j)]);
  pool.resize(n);
  return pool;
}

}  // namespace

FinSet labelled_set(const std::string& prefix, std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t j = 0; j < n; ++j) labels[j] = prefix + std::to_string(j);
  return FinSet(std::move(labels));
}

Interface random_interface(Rng& rng, std::size_t min_size, std::size_t max_size,
                           const std::string& tag) {
  return {labelled_set("i" + tag + "_", rng.between(min_size, max_size)),
          labelled_set("o" + tag + "_", rng.between(min_size, max_size))};
}

System random_system(Rng& rng, const FinSet& states, const Interface& iface) {
  return System(FinMap(states, iface.outputs, random_table(rng, states.size(), iface.outputs.size())),
                BinaryMap(states, iface.inputs, states,
                          random_table(rng, states.size() * iface.inputs.size(), states.size())));
}

System random_system(Rng& rng, std::size_t max_size) {
  auto states = labelled_set("s", rng.between(1, max_size));
  return random_system(rng, states, random_interface(rng, 1, max_size, ""));
}

Lens random_lens(Rng& rng, const Interface& inner, const Interface& outer) {
  return Lens(FinMap(inner.outputs, outer.outputs,
                     random_table(rng, inner.outputs.size(), outer.outputs.size())),
              BinaryMap(inner.outputs, outer.inputs, inner.inputs,
                        random_table(rng, inner.outputs.size() * outer.inputs.size(),
                                     inner.inputs.size())));
}

Chart random_chart(Rng& rng, const Interface& source, const Interface& target) {
  return Chart(FinMap(source.outputs, target.outputs,
                      random_table(rng, source.outputs.size(), target.outputs.size())),
               BinaryMap(source.outputs, source.inputs, target.inputs,
                         random_table(rng, source.outputs.size() * source.inputs.size(),
                                      target.inputs.size())));
}

Chart random_injective_chart(Rng& rng, const Interface& source, const Interface& target) {
  const auto nI = source.inputs.size();
  std::vector<std::size_t> push;
  push.reserve(source.outputs.size() * nI);
  for (std::size_t o = 0; o < source.outputs.size(); ++o) {
    auto row = random_injection(rng, nI, target.inputs.size());
    push.insert(push.end(), row.begin(), row.end());
  }
  return Chart(FinMap(source.outputs, target.outputs,
                      random_injection(rng, source.outputs.size(), target.outputs.size())),
               BinaryMap(source.outputs, source.inputs, target.inputs, std::move(push)));
}

std::optional<Square> complete_square(Rng& rng, const Chart& top, const Lens& left,
                                      const std::string& tag) {
  const auto corner3 = left.outer();
  const auto corner2 = top.target();
  const Interface corner4{
      labelled_set("i" + tag + "_", corner3.inputs.size() + rng.below(2)),
      labelled_set("o" + tag + "_", corner3.outputs.size() + rng.below(2))};
  auto bottom = random_injective_chart(rng, corner3, corner4);

  constexpr std::size_t kFree = std::size_t(-1);
  const auto& O1 = top.fwd().dom();
  const auto nI4 = corner4.inputs.size();
  std::vector<std::size_t> fwd(corner2.outputs.size(), kFree);
  std::vector<std::size_t> bwd(corner2.outputs.size() * nI4, kFree);

  for (std::size_t o = 0; o < O1.size(); ++o) {
    auto& slot = fwd[top.fwd()(o)];
    const auto want = bottom.fwd()(left.fwd()(o));
    if (slot != kFree && slot != want) return std::nullopt;
    slot = want;
  }
  for (std::size_t o = 0; o < O1.size(); ++o) {
    for (std::size_t a = 0; a < corner3.inputs.size(); ++a) {
      auto& slot = bwd[top.fwd()(o) * nI4 + bottom.push()(left.fwd()(o), a)];
      const auto want = top.push()(o, left.bwd()(o, a));
      if (slot != kFree && slot != want) return std::nullopt;
      slot = want;
    }
  }
  for (auto& v : fwd)
    if (v == kFree) v = rng.below(corner4.outputs.size());
  for (auto& v : bwd)
    if (v == kFree) v = rng.below(corner2.inputs.size());

  Lens right(FinMap(corner2.outputs, corner4.outputs, std::move(fwd)),
             BinaryMap(corner2.outputs, corner4.inputs, corner2.inputs, std::move(bwd)));
  return Square{top, std::move(bottom), left, std::move(right)};
}

std::optional<Mutation> mutate_square(Rng& rng, const Square& sq) {
  const auto& bwd = sq.left.bwd();
  if (bwd.first().empty() || bwd.second().empty() || bwd.cod().size() < 2) return std::nullopt;
  const auto o = rng.below(bwd.first().size());
  const auto a = rng.below(bwd.second().size());
  auto table = bwd.table();
  auto& entry = table[o * bwd.second().size() + a];
  entry = (entry + 1 + rng.below(bwd.cod().size() - 1)) % bwd.cod().size();
  Lens left(sq.left.fwd(), BinaryMap(bwd.first(), bwd.second(), bwd.cod(), std::move(table)));
  return Mutation{Square{sq.top, sq.bottom, std::move(left), sq.right}, "inputs",
                  {bwd.first()[o], bwd.second()[a]}};
}

}  // namespace lensdyn::det
