#include "lensdyn/finset.hpp"

#include <numeric>

#include "lensdyn/error.hpp"

namespace lensdyn {

FinSet::FinSet() : rep_(std::make_shared<const Rep>()) {}

FinSet::FinSet(std::initializer_list<std::string> labels)
    : FinSet(std::vector<std::string>(labels)) {}

FinSet::FinSet(std::vector<std::string> labels) {
  auto rep = std::make_shared<Rep>();
  rep->index.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw ValidationError("empty element label");
    if (!rep->index.emplace(labels[i], i).second)
      throw ValidationError("duplicate element label '" + labels[i] + "'");
  }
  rep->labels = std::move(labels);
  rep_ = std::move(rep);
}

std::optional<std::size_t> FinSet::find(std::string_view label) const {
  auto it = rep_->index.find(std::string(label));
  if (it == rep_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t FinSet::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw ValidationError("unknown element '" + std::string(label) + "' (not in " +
                        describe() + ")");
}

std::string FinSet::describe() const {
  std::string out = "{";
  for (std::size_t i = 0; i < size(); ++i) {
    if (i) out += ", ";
    out += (*this)[i];
  }
  return out + "}";
}

bool operator==(const FinSet& a, const FinSet& b) {
  return a.rep_ == b.rep_ || a.rep_->labels == b.rep_->labels;
}

std::string join_labels(std::span<const std::string> parts) {
  if (parts.empty()) return std::string(kUnitLabel);
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) {
    out += kTupleSep;
    out += parts[i];
  }
  return out;
}

FinSet product(const FinSet& a, const FinSet& b) {
  std::vector<std::string> labels;
  labels.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) labels.push_back(x + kTupleSep + y);
  return FinSet(std::move(labels));
}

FinSet unit_set() { return FinSet({std::string(kUnitLabel)}); }

FinSet power(const FinSet& a, std::size_t k) {
  if (k == 0) return unit_set();
  if (k == 1) return a;
  FinSet acc = a;
  for (std::size_t j = 1; j < k; ++j) acc = product(acc, a);
  return acc;
}

std::size_t tuple_index(std::span<const std::size_t> digits, std::size_t radix) {
  std::size_t idx = 0;
  for (auto d : digits) idx = idx * radix + d;
  return idx;
}

FinMap::FinMap(FinSet dom, FinSet cod, std::vector<std::size_t> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
  if (table_.size() != dom_.size())
    throw ValidationError("map table has " + std::to_string(table_.size()) +
                          " entries for a domain of size " + std::to_string(dom_.size()));
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i] >= cod_.size())
      throw ValidationError("map value for '" + dom_[i] + "' outside codomain " +
                            cod_.describe());
}

FinMap FinMap::from_labels(FinSet dom, FinSet cod,
                           const std::map<std::string, std::string>& table) {
  std::vector<std::size_t> idx(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    auto it = table.find(dom[i]);
    if (it == table.end())
      throw ValidationError("map is not total: no value for '" + dom[i] + "'");
    idx[i] = cod.index_of(it->second);
  }
  for (const auto& [k, v] : table)
    if (!dom.contains(k)) throw ValidationError("map key '" + k + "' not in domain");
  return FinMap(std::move(dom), std::move(cod), std::move(idx));
}

FinMap FinMap::identity(const FinSet& s) {
  std::vector<std::size_t> idx(s.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return FinMap(s, s, std::move(idx));
}

const std::string& FinMap::at(std::string_view label) const {
  return cod_[table_[dom_.index_of(label)]];
}

FinMap compose(const FinMap& g, const FinMap& f) {
  if (!(f.cod() == g.dom()))
    throw BoundaryError("cannot compose maps: " + f.cod().describe() + " vs " +
                        g.dom().describe());
  std::vector<std::size_t> idx(f.dom().size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = g(f(i));
  return FinMap(f.dom(), g.cod(), std::move(idx));
}

FinMap pairing(const FinMap& f, const FinMap& g) {
  if (!(f.dom() == g.dom()))
    throw BoundaryError("cannot pair maps with domains " + f.dom().describe() + " and " +
                        g.dom().describe());
  std::vector<std::size_t> idx(f.dom().size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = f(i) * g.cod().size() + g(i);
  return FinMap(f.dom(), product(f.cod(), g.cod()), std::move(idx));
}

BinaryMap::BinaryMap(FinSet a, FinSet b, FinSet cod, std::vector<std::size_t> table)
    : a_(std::move(a)), b_(std::move(b)), cod_(std::move(cod)), table_(std::move(table)) {
  if (table_.size() != a_.size() * b_.size())
    throw ValidationError("binary map table has wrong size");
  for (std::size_t i = 0; i < a_.size(); ++i)
    for (std::size_t j = 0; j < b_.size(); ++j)
      if ((*this)(i, j) >= cod_.size())
        throw ValidationError("value at ('" + a_[i] + "', '" + b_[j] + "') outside " +
                              cod_.describe());
}

BinaryMap BinaryMap::from_labels(
    FinSet a, FinSet b, FinSet cod,
    const std::map<std::string, std::map<std::string, std::string>>& table) {
  std::vector<std::size_t> idx(a.size() * b.size());
  for (const auto& [k, row] : table) {
    if (!a.contains(k)) throw ValidationError("table key '" + k + "' not in " + a.describe());
    for (const auto& [k2, v] : row)
      if (!b.contains(k2))
        throw ValidationError("table key '" + k2 + "' not in " + b.describe());
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto row = table.find(a[i]);
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (row == table.end() || !row->second.count(b[j]))
        throw ValidationError("table is not total: no value for ('" + a[i] + "', '" + b[j] +
                              "')");
      idx[i * b.size() + j] = cod.index_of(row->second.at(b[j]));
    }
  }
  return BinaryMap(std::move(a), std::move(b), std::move(cod), std::move(idx));
}

const std::string& BinaryMap::at(std::string_view a, std::string_view b) const {
  return cod_[(*this)(a_.index_of(a), b_.index_of(b))];
}

Span::Span(FinMap left, FinMap right) : left_(std::move(left)), right_(std::move(right)) {
  if (!(left_.dom() == right_.dom()))
    throw ValidationError("span legs have different domains");
}

Family::Family(FinMap proj) : proj_(std::move(proj)) {}

std::vector<std::size_t> Family::fiber_sizes() const {
  std::vector<std::size_t> sizes(base().size(), 0);
  for (auto b : proj_.table()) ++sizes[b];
  return sizes;
}

std::vector<std::size_t> Family::fiber(std::size_t b) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < total().size(); ++i)
    if (proj_(i) == b) out.push_back(i);
  return out;
}

Span identity_span(const FinSet& a) {
  return Span(FinMap::identity(a), FinMap::identity(a));
}

Span compose_spans(const Span& s1, const Span& s2) {
  if (!(s1.target() == s2.source()))
    throw BoundaryError("cannot compose spans: target " + s1.target().describe() +
                        " does not match source " + s2.source().describe());
  // Bucket the second apex by its left leg; buckets keep apex order.
  std::vector<std::vector<std::size_t>> over(s2.source().size());
  for (std::size_t y = 0; y < s2.apex().size(); ++y) over[s2.left()(y)].push_back(y);

  std::vector<std::string> labels;
  std::vector<std::size_t> left, right;
  for (std::size_t x = 0; x < s1.apex().size(); ++x) {
    for (auto y : over[s1.right()(x)]) {
      labels.push_back(s1.apex()[x] + kTupleSep + s2.apex()[y]);
      left.push_back(s1.left()(x));
      right.push_back(s2.right()(y));
    }
  }
  FinSet apex(std::move(labels));
  return Span(FinMap(apex, s1.source(), std::move(left)),
              FinMap(apex, s2.target(), std::move(right)));
}

CountMatrix span_to_matrix(const Span& s) {
  CountMatrix m(s.source().size(), std::vector<std::uint64_t>(s.target().size(), 0));
  for (std::size_t x = 0; x < s.apex().size(); ++x) ++m[s.left()(x)][s.right()(x)];
  return m;
}

Family apply_span_to_family(const Span& s, const Family& fam) {
  if (!(fam.base() == s.source()))
    throw BoundaryError("family base " + fam.base().describe() +
                        " does not match span source " + s.source().describe());
  std::vector<std::vector<std::size_t>> over(fam.base().size());
  for (std::size_t z = 0; z < fam.total().size(); ++z) over[fam.proj()(z)].push_back(z);

  std::vector<std::string> labels;
  std::vector<std::size_t> proj;
  for (std::size_t x = 0; x < s.apex().size(); ++x) {
    for (auto z : over[s.left()(x)]) {
      labels.push_back(s.apex()[x] + kTupleSep + fam.total()[z]);
      proj.push_back(s.right()(x));
    }
  }
  return Family(FinMap(FinSet(std::move(labels)), s.target(), std::move(proj)));
}

Family span_as_family(const Span& s) { return Family(pairing(s.left(), s.right())); }

FamilyIso families_isomorphic(const Family& f1, const Family& f2) {
  if (!(f1.base() == f2.base()))
    throw BoundaryError("families have different bases: " + f1.base().describe() + " vs " +
                        f2.base().describe());
  const auto n = f1.base().size();
  std::vector<std::vector<std::size_t>> fib1(n), fib2(n);
  for (std::size_t z = 0; z < f1.total().size(); ++z) fib1[f1.proj()(z)].push_back(z);
  for (std::size_t z = 0; z < f2.total().size(); ++z) fib2[f2.proj()(z)].push_back(z);

  FamilyIso result;
  for (std::size_t b = 0; b < n; ++b) {
    if (fib1[b].size() != fib2[b].size()) {
      result.mismatch = f1.base()[b];
      return result;
    }
  }
  std::vector<std::size_t> witness(f1.total().size());
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t j = 0; j < fib1[b].size(); ++j) witness[fib1[b][j]] = fib2[b][j];
  result.witness = std::move(witness);
  return result;
}

FamilyIso spans_isomorphic(const Span& s1, const Span& s2) {
  if (!(s1.source() == s2.source()) || !(s1.target() == s2.target()))
    throw BoundaryError("spans have different boundaries");
  return families_isomorphic(span_as_family(s1), span_as_family(s2));
}

}  // namespace lensdyn
