#include "lensdyn/stoch.hpp"

#include <random>

#include "lensdyn/error.hpp"

namespace lensdyn::stoch {

using boost::multiprecision::cpp_int;

namespace {

cpp_int parse_integer(std::string_view text) {
  std::size_t start = (!text.empty() && (text[0] == '-' || text[0] == '+')) ? 1 : 0;
  if (start == text.size()) throw ValidationError("malformed rational '" + std::string(text) + "'");
  for (std::size_t j = start; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9')
      throw ValidationError("malformed rational '" + std::string(text) + "'");
  return cpp_int(std::string(text));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  auto den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw ValidationError("zero denominator in '" + std::string(text) + "'");
  return Rational(parse_integer(text.substr(0, slash)), den);
}

std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

Dist::Dist(FinSet support, std::vector<Rational> weights)
    : support_(std::move(support)), weights_(std::move(weights)) {
  if (weights_.size() != support_.size())
    throw ValidationError("distribution has wrong number of weights");
  Rational total = 0;
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (weights_[j] < 0)
      throw ValidationError("negative weight for '" + support_[j] + "'");
    total += weights_[j];
  }
  if (total != 1)
    throw ValidationError("weights sum to " + format_rational(total) + ", expected 1");
}

Dist Dist::dirac(const FinSet& support, std::size_t at) {
  std::vector<Rational> w(support.size(), Rational(0));
  w.at(at) = 1;
  return Dist(support, std::move(w));
}

System::System(FinMap readout, FinSet inputs, std::vector<Dist> update)
    : readout_(std::move(readout)), inputs_(std::move(inputs)), update_(std::move(update)) {
  if (update_.size() != states().size() * inputs_.size())
    throw ValidationError("update table is not total on states × inputs");
  for (const auto& d : update_)
    if (!(d.support() == states()))
      throw ValidationError("update distribution is not over the state set");
}

System compose_lens_stoch(const det::Lens& lens, const System& sys) {
  if (!(lens.inner() == sys.interface()))
    throw BoundaryError("lens does not match stochastic system interface");
  const auto outer = lens.outer();
  std::vector<Dist> update;
  update.reserve(sys.states().size() * outer.inputs.size());
  for (std::size_t s = 0; s < sys.states().size(); ++s)
    for (std::size_t i = 0; i < outer.inputs.size(); ++i)
      update.push_back(sys.update(s, lens.bwd()(sys.readout()(s), i)));
  return System(compose(lens.fwd(), sys.readout()), outer.inputs, std::move(update));
}

System tensor_stoch(const System& a, const System& b) {
  auto S = product(a.states(), b.states());
  auto I = product(a.inputs(), b.inputs());
  auto O = product(a.outputs(), b.outputs());
  const auto nb = b.states().size();
  std::vector<std::size_t> r(S.size());
  std::vector<Dist> update;
  update.reserve(S.size() * I.size());
  for (std::size_t sa = 0; sa < a.states().size(); ++sa)
    for (std::size_t sb = 0; sb < nb; ++sb) {
      r[sa * nb + sb] = a.readout()(sa) * b.outputs().size() + b.readout()(sb);
      for (std::size_t ia = 0; ia < a.inputs().size(); ++ia)
        for (std::size_t ib = 0; ib < b.inputs().size(); ++ib) {
          const auto& da = a.update(sa, ia);
          const auto& db = b.update(sb, ib);
          std::vector<Rational> w(S.size());
          for (std::size_t x = 0; x < a.states().size(); ++x)
            for (std::size_t y = 0; y < nb; ++y) w[x * nb + y] = da[x] * db[y];
          update.emplace_back(S, std::move(w));
        }
    }
  return System(FinMap(S, O, std::move(r)), I, std::move(update));
}

Dist step_dist(const System& sys, const Dist& d, std::string_view input) {
  if (!(d.support() == sys.states()))
    throw BoundaryError("distribution is not over the system's states");
  const auto i = sys.inputs().index_of(input);
  std::vector<Rational> w(sys.states().size(), Rational(0));
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (d[s] == 0) continue;
    const auto& next = sys.update(s, i);
    for (std::size_t t = 0; t < w.size(); ++t) w[t] += d[s] * next[t];
  }
  return Dist(sys.states(), std::move(w));
}

std::vector<std::string> simulate_stoch(const System& sys, const std::string& s0,
                                        const std::vector<std::string>& word,
                                        std::uint64_t seed) {
  auto s = sys.states().index_of(s0);
  std::vector<std::size_t> inputs;
  for (const auto& w : word) inputs.push_back(sys.inputs().index_of(w));

  std::mt19937_64 eng(seed);
  const cpp_int scale = cpp_int(1) << 53;
  std::vector<std::string> path{sys.states()[s]};
  for (auto i : inputs) {
    const cpp_int u = cpp_int(eng() >> 11);
    const auto& d = sys.update(s, i);
    Rational cum = 0;
    std::size_t pick = d.support().size();
    for (std::size_t t = 0; t < d.support().size(); ++t) {
      if (d[t] == 0) continue;
      cum += d[t];
      if (u * denominator(cum) < numerator(cum) * scale) {
        pick = t;
        break;
      }
    }
    s = pick;
    path.push_back(sys.states()[s]);
  }
  return path;
}

System embed_det(const det::System& sys) {
  std::vector<Dist> update;
  update.reserve(sys.states().size() * sys.inputs().size());
  for (std::size_t s = 0; s < sys.states().size(); ++s)
    for (std::size_t i = 0; i < sys.inputs().size(); ++i)
      update.push_back(Dist::dirac(sys.states(), sys.update()(s, i)));
  return System(sys.readout(), sys.inputs(), std::move(update));
}

Family dirac_steady_span(const System& sys) {
  auto base = product(sys.outputs(), sys.inputs());
  const auto nI = sys.inputs().size();
  std::vector<std::string> labels;
  std::vector<std::size_t> proj;
  for (std::size_t s = 0; s < sys.states().size(); ++s)
    for (std::size_t i = 0; i < nI; ++i)
      if (sys.update(s, i).is_dirac_at(s)) {
        labels.push_back(sys.states()[s] + kTupleSep + sys.inputs()[i]);
        proj.push_back(sys.readout()(s) * nI + i);
      }
  return Family(FinMap(FinSet(std::move(labels)), base, std::move(proj)));
}

System random_system(Rng& rng, std::size_t max_size) {
  auto labels = [](const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(prefix + std::to_string(j));
    return FinSet(std::move(out));
  };
  auto S = labels("s", rng.between(1, max_size));
  auto I = labels("i", rng.between(1, max_size));
  auto O = labels("o", rng.between(1, max_size));
  std::vector<std::size_t> r(S.size());
  for (auto& v : r) v = rng.below(O.size());
  std::vector<Dist> update;
  for (std::size_t k = 0; k < S.size() * I.size(); ++k) {
    std::vector<cpp_int> raw(S.size());
    cpp_int total = 0;
    for (auto& w : raw) {
      w = rng.below(3) == 0 ? 0 : rng.between(1, 12);
      total += w;
    }
    if (total == 0) {
      raw[rng.below(S.size())] = 1;
      total = 1;
    }
    std::vector<Rational> w(S.size());
    for (std::size_t j = 0; j < w.size(); ++j) w[j] = Rational(raw[j], total);
    update.emplace_back(S, std::move(w));
  }
  return System(FinMap(S, O, std::move(r)), I, std::move(update));
}

}  // namespace lensdyn::stoch
