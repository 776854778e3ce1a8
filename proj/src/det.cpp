#include "lensdyn/det.hpp"

#include <omp.h>

#include <limits>

#include "lensdyn/error.hpp"

namespace lensdyn::det {

namespace {

std::string describe(const Interface& i) {
  return "(inputs " + i.inputs.describe() + ", outputs " + i.outputs.describe() + ")";
}

void require_same(const Interface& a, const Interface& b, const char* what) {
  if (!(a == b))
    throw BoundaryError(std::string(what) + ": " + describe(a) + " vs " + describe(b));
}

std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t j = 0; j < exp; ++j) {
    if (base != 0 && out > std::numeric_limits<std::size_t>::max() / base)
      throw Error("enumeration too large");
    out *= base;
  }
  return out;
}

constexpr std::size_t kMaxEnumeration = std::size_t{1} << 26;

}  // namespace

System::System(FinMap readout, BinaryMap update)
    : readout_(std::move(readout)), update_(std::move(update)) {
  if (!(update_.first() == readout_.dom()) || !(update_.cod() == readout_.dom()))
    throw ValidationError("update must map states × inputs to states");
}

Lens::Lens(FinMap fwd, BinaryMap bwd) : fwd_(std::move(fwd)), bwd_(std::move(bwd)) {
  if (!(bwd_.first() == fwd_.dom()))
    throw ValidationError("lens backward map must be indexed by the inner outputs");
}

Lens Lens::identity(const Interface& iface) {
  std::vector<std::size_t> t(iface.outputs.size() * iface.inputs.size());
  for (std::size_t o = 0; o < iface.outputs.size(); ++o)
    for (std::size_t i = 0; i < iface.inputs.size(); ++i) t[o * iface.inputs.size() + i] = i;
  return Lens(FinMap::identity(iface.outputs),
              BinaryMap(iface.outputs, iface.inputs, iface.inputs, std::move(t)));
}

Chart::Chart(FinMap fwd, BinaryMap push) : fwd_(std::move(fwd)), push_(std::move(push)) {
  if (!(push_.first() == fwd_.dom()))
    throw ValidationError("chart input map must be indexed by the source outputs");
}

Chart Chart::identity(const Interface& iface) {
  auto l = Lens::identity(iface);
  return Chart(l.fwd(), l.bwd());
}

System compose_lens_system(const Lens& lens, const System& sys) {
  require_same(lens.inner(), sys.interface(), "lens does not match system interface");
  const auto& S = sys.states();
  const auto outer = lens.outer();
  std::vector<std::size_t> t(S.size() * outer.inputs.size());
  for (std::size_t s = 0; s < S.size(); ++s)
    for (std::size_t i = 0; i < outer.inputs.size(); ++i)
      t[s * outer.inputs.size() + i] = sys.update()(s, lens.bwd()(sys.readout()(s), i));
  return System(compose(lens.fwd(), sys.readout()), BinaryMap(S, outer.inputs, S, std::move(t)));
}

Lens compose_lenses(const Lens& l1, const Lens& l2) {
  require_same(l1.outer(), l2.inner(), "cannot compose lenses");
  const auto& O = l1.fwd().dom();
  const auto& I2 = l2.bwd().second();
  std::vector<std::size_t> t(O.size() * I2.size());
  for (std::size_t o = 0; o < O.size(); ++o)
    for (std::size_t i = 0; i < I2.size(); ++i)
      t[o * I2.size() + i] = l1.bwd()(o, l2.bwd()(l1.fwd()(o), i));
  return Lens(compose(l2.fwd(), l1.fwd()), BinaryMap(O, I2, l1.bwd().cod(), std::move(t)));
}

Chart compose_charts(const Chart& c1, const Chart& c2) {
  require_same(c1.target(), c2.source(), "cannot compose charts");
  const auto& O = c1.fwd().dom();
  const auto& I = c1.push().second();
  std::vector<std::size_t> t(O.size() * I.size());
  for (std::size_t o = 0; o < O.size(); ++o)
    for (std::size_t i = 0; i < I.size(); ++i)
      t[o * I.size() + i] = c2.push()(c1.fwd()(o), c1.push()(o, i));
  return Chart(compose(c2.fwd(), c1.fwd()), BinaryMap(O, I, c2.push().cod(), std::move(t)));
}

System tensor_systems(const System& a, const System& b) {
  auto S = product(a.states(), b.states());
  auto I = product(a.inputs(), b.inputs());
  auto O = product(a.outputs(), b.outputs());
  const auto nb = b.states().size(), nib = b.inputs().size();
  std::vector<std::size_t> r(S.size()), u(S.size() * I.size());
  for (std::size_t sa = 0; sa < a.states().size(); ++sa)
    for (std::size_t sb = 0; sb < nb; ++sb) {
      const auto s = sa * nb + sb;
      r[s] = a.readout()(sa) * b.outputs().size() + b.readout()(sb);
      for (std::size_t ia = 0; ia < a.inputs().size(); ++ia)
        for (std::size_t ib = 0; ib < nib; ++ib)
          u[s * I.size() + ia * nib + ib] = a.update()(sa, ia) * nb + b.update()(sb, ib);
    }
  return System(FinMap(S, O, std::move(r)), BinaryMap(S, I, S, std::move(u)));
}

System trivial_system() {
  FinSet one({"*"});
  return System(FinMap::identity(one), BinaryMap(one, one, one, {0}));
}

CheckResult check_square(const Square& sq) {
  require_same(sq.top.source(), sq.left.inner(), "square corner 1");
  require_same(sq.top.target(), sq.right.inner(), "square corner 2");
  require_same(sq.bottom.source(), sq.left.outer(), "square corner 3");
  require_same(sq.bottom.target(), sq.right.outer(), "square corner 4");

  const auto& O1 = sq.top.fwd().dom();
  const auto& I3 = sq.left.bwd().second();
  for (std::size_t o = 0; o < O1.size(); ++o) {
    if (sq.right.fwd()(sq.top.fwd()(o)) != sq.bottom.fwd()(sq.left.fwd()(o)))
      return {false, "outputs", {O1[o]}};
  }
  for (std::size_t o = 0; o < O1.size(); ++o) {
    for (std::size_t a = 0; a < I3.size(); ++a) {
      auto upper = sq.top.push()(o, sq.left.bwd()(o, a));
      auto lower = sq.right.bwd()(sq.top.fwd()(o), sq.bottom.push()(sq.left.fwd()(o), a));
      if (upper != lower) return {false, "inputs", {O1[o], I3[a]}};
    }
  }
  return {};
}

Square paste_vertical(const Square& upper, const Square& lower) {
  if (!(upper.bottom == lower.top))
    throw BoundaryError("vertical pasting needs a shared horizontal edge");
  return {upper.top, lower.bottom, compose_lenses(upper.left, lower.left),
          compose_lenses(upper.right, lower.right)};
}

Square paste_horizontal(const Square& left, const Square& right) {
  if (!(left.right == right.left))
    throw BoundaryError("horizontal pasting needs a shared vertical edge");
  return {compose_charts(left.top, right.top), compose_charts(left.bottom, right.bottom),
          left.left, right.right};
}

CheckResult check_system_morphism(const FinMap& phi, const System& sys,
                                  const System& target) {
  if (!(phi.dom() == sys.states()) || !(phi.cod() == target.states()))
    throw BoundaryError("state map does not go between the two state sets");
  require_same(sys.interface(), target.interface(), "systems must share an interface");
  for (std::size_t s = 0; s < sys.states().size(); ++s)
    if (target.readout()(phi(s)) != sys.readout()(s))
      return {false, "readout", {sys.states()[s]}};
  for (std::size_t s = 0; s < sys.states().size(); ++s)
    for (std::size_t i = 0; i < sys.inputs().size(); ++i)
      if (phi(sys.update()(s, i)) != target.update()(phi(s), i))
        return {false, "update", {sys.states()[s], sys.inputs()[i]}};
  return {};
}

System walking_cycle(std::size_t k) {
  if (k < 1) throw ValidationError("walking cycle length must be at least 1");
  std::vector<std::string> labels;
  std::vector<std::size_t> next(k);
  for (std::size_t j = 0; j < k; ++j) {
    labels.push_back("c" + std::to_string(j));
    next[j] = (j + 1) % k;
  }
  FinSet S(std::move(labels));
  return System(FinMap::identity(S), BinaryMap(S, FinSet({"*"}), S, std::move(next)));
}

FinSet chart_hom_set(const Interface& rep, const Interface& iface) {
  const auto m = rep.inputs.size();
  auto per_output = m == 0 ? iface.outputs : product(iface.outputs, power(iface.inputs, m));
  if (checked_pow(per_output.size(), rep.outputs.size()) > kMaxEnumeration)
    throw Error("chart set too large to enumerate");
  return power(per_output, rep.outputs.size());
}

namespace {

bool exposes_state(const System& rep) {
  return rep.outputs() == rep.states() && rep.readout() == FinMap::identity(rep.states());
}

struct RepresentableBuffer {
  std::vector<std::string> labels;
  std::vector<std::size_t> proj;
};

// Appends the elements for state maps phi with index in [begin, end).
void enumerate_state_maps(const System& rep, const System& sys, const FinSet& base,
                          std::size_t begin, std::size_t end, RepresentableBuffer& out) {
  const auto n = rep.states().size();
  const auto m = rep.inputs().size();
  const auto nS = sys.states().size();
  const auto nI = sys.inputs().size();
  const auto nO = sys.outputs().size();
  const auto local_radix = nO * checked_pow(nI, m);

  std::vector<std::size_t> phi(n);
  std::vector<std::vector<std::size_t>> admissible(n * m);
  std::vector<std::size_t> choice(n * m);
  std::vector<std::size_t> local(n);
  std::vector<std::string> parts(n);

  for (std::size_t p = begin; p < end; ++p) {
    auto rest = p;
    for (std::size_t j = n; j-- > 0;) {
      phi[j] = rest % nS;
      rest /= nS;
    }
    bool any = true;
    for (std::size_t j = 0; j < n && any; ++j) {
      for (std::size_t a = 0; a < m; ++a) {
        auto& adm = admissible[j * m + a];
        adm.clear();
        const auto want = phi[rep.update()(j, a)];
        for (std::size_t i = 0; i < nI; ++i)
          if (sys.update()(phi[j], i) == want) adm.push_back(i);
        if (adm.empty()) {
          any = false;
          break;
        }
      }
    }
    if (!any) continue;

    for (std::size_t j = 0; j < n; ++j) parts[j] = sys.states()[phi[j]];
    const auto phi_label = join_labels(parts);

    std::fill(choice.begin(), choice.end(), 0);
    while (true) {
      for (std::size_t j = 0; j < n; ++j) {
        auto idx = sys.readout()(phi[j]);
        for (std::size_t a = 0; a < m; ++a) idx = idx * nI + admissible[j * m + a][choice[j * m + a]];
        local[j] = idx;
      }
      const auto b = tuple_index(local, local_radix);
      out.labels.push_back(phi_label + kTupleSep + base[b]);
      out.proj.push_back(b);
      // Odometer over the admissible input choices, last coordinate fastest.
      bool advanced = false;
      for (std::size_t pos = n * m; pos-- > 0;) {
        if (++choice[pos] < admissible[pos].size()) {
          advanced = true;
          break;
        }
        choice[pos] = 0;
      }
      if (!advanced) break;
    }
  }
}

void require_exposed(const System& rep) {
  if (!exposes_state(rep))
    throw ValidationError("representing system must expose its entire state");
}

Family assemble(const FinSet& base, RepresentableBuffer&& buf) {
  return Family(FinMap(FinSet(std::move(buf.labels)), base, std::move(buf.proj)));
}

}  // namespace

Family representable_span_serial(const System& rep, const System& sys) {
  require_exposed(rep);
  auto base = chart_hom_set(rep.interface(), sys.interface());
  const auto count = checked_pow(sys.states().size(), rep.states().size());
  RepresentableBuffer buf;
  enumerate_state_maps(rep, sys, base, 0, count, buf);
  return assemble(base, std::move(buf));
}

Family representable_span(const System& rep, const System& sys) {
  require_exposed(rep);
  auto base = chart_hom_set(rep.interface(), sys.interface());
  const auto count = checked_pow(sys.states().size(), rep.states().size());
  if (count > kMaxEnumeration) throw Error("state-map enumeration too large");

  const auto threads = static_cast<std::size_t>(omp_get_max_threads());
  std::vector<RepresentableBuffer> chunks(threads);
#pragma omp parallel num_threads(static_cast<int>(threads))
  {
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
    const auto nt = static_cast<std::size_t>(omp_get_num_threads());
    const auto lo = count * t / nt;
    const auto hi = count * (t + 1) / nt;
    enumerate_state_maps(rep, sys, base, lo, hi, chunks[t]);
  }
  RepresentableBuffer buf;
  for (auto& c : chunks) {
    buf.labels.insert(buf.labels.end(), std::make_move_iterator(c.labels.begin()),
                      std::make_move_iterator(c.labels.end()));
    buf.proj.insert(buf.proj.end(), c.proj.begin(), c.proj.end());
  }
  return assemble(base, std::move(buf));
}

Family steady_span(const System& sys) {
  auto base = product(sys.outputs(), sys.inputs());
  const auto nI = sys.inputs().size();
  std::vector<std::string> labels;
  std::vector<std::size_t> proj;
  for (std::size_t s = 0; s < sys.states().size(); ++s)
    for (std::size_t i = 0; i < nI; ++i)
      if (sys.update()(s, i) == s) {
        labels.push_back(sys.states()[s] + kTupleSep + sys.inputs()[i]);
        proj.push_back(sys.readout()(s) * nI + i);
      }
  return Family(FinMap(FinSet(std::move(labels)), base, std::move(proj)));
}

Family periodic_orbit_span(const System& sys, std::size_t k) {
  if (k < 1) throw ValidationError("orbit period must be at least 1");
  return representable_span(walking_cycle(k), sys);
}

Span lens_to_span(const Lens& lens, const Interface& rep_interface) {
  if (rep_interface.inputs.size() != 1 || rep_interface.outputs.empty())
    throw BoundaryError("lens_to_span expects the interface of a walking cycle");
  const auto k = rep_interface.outputs.size();
  const auto inner = lens.inner();
  const auto outer = lens.outer();
  const auto nI = inner.inputs.size();
  const auto nI2 = outer.inputs.size();

  auto apex_factor = product(inner.outputs, outer.inputs);
  auto apex = power(apex_factor, k);
  auto source = power(product(inner.outputs, inner.inputs), k);
  auto target = power(product(outer.outputs, outer.inputs), k);

  const auto radix = apex_factor.size();
  std::vector<std::size_t> left(apex.size()), right(apex.size()), digits(k), ld(k), rd(k);
  for (std::size_t x = 0; x < apex.size(); ++x) {
    auto rest = x;
    for (std::size_t j = k; j-- > 0;) {
      digits[j] = rest % radix;
      rest /= radix;
    }
    for (std::size_t j = 0; j < k; ++j) {
      const auto o = digits[j] / nI2;
      const auto i2 = digits[j] % nI2;
      ld[j] = o * nI + lens.bwd()(o, i2);
      rd[j] = lens.fwd()(o) * nI2 + i2;
    }
    left[x] = tuple_index(ld, inner.outputs.size() * nI);
    right[x] = tuple_index(rd, outer.outputs.size() * nI2);
  }
  return Span(FinMap(apex, source, std::move(left)), FinMap(apex, target, std::move(right)));
}

TheoremCheck check_matrix_theorem(const Lens& lens, const System& sys, std::size_t k) {
  require_same(lens.inner(), sys.interface(), "lens does not match system interface");
  auto composed = periodic_orbit_span(compose_lens_system(lens, sys), k);
  auto transported = apply_span_to_family(lens_to_span(lens, walking_cycle(k).interface()),
                                          periodic_orbit_span(sys, k));
  auto iso = families_isomorphic(composed, transported);
  TheoremCheck out;
  out.ok = static_cast<bool>(iso);
  out.composed_total = composed.total().size();
  out.transported_total = transported.total().size();
  out.mismatch = iso.mismatch;
  return out;
}

std::vector<Step> run_word(const System& sys, const std::string& s0,
                           const std::vector<std::string>& word) {
  auto s = sys.states().index_of(s0);
  std::vector<Step> out;
  out.push_back({sys.states()[s], sys.outputs()[sys.readout()(s)]});
  for (const auto& w : word) {
    s = sys.update()(s, sys.inputs().index_of(w));
    out.push_back({sys.states()[s], sys.outputs()[sys.readout()(s)]});
  }
  return out;
}

}  // namespace lensdyn::det
