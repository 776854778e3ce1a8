#pragma once

// Finite sets with text labels, total maps between them, spans, and families
// over a base (objects of a slice category). Spans compose by pullback, which
// on cardinalities is matrix multiplication.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lensdyn {

// Separator used when labelling tuple elements. User labels should avoid it.
inline constexpr char kTupleSep = '|';
// Label of the single element of an empty product.
inline constexpr std::string_view kUnitLabel = "()";

class FinSet {
 public:
  FinSet();
  explicit FinSet(std::vector<std::string> labels);
  FinSet(std::initializer_list<std::string> labels);

  std::size_t size() const { return rep_->labels.size(); }
  bool empty() const { return rep_->labels.empty(); }
  const std::string& operator[](std::size_t i) const { return rep_->labels[i]; }
  const std::vector<std::string>& elements() const { return rep_->labels; }
  auto begin() const { return rep_->labels.begin(); }
  auto end() const { return rep_->labels.end(); }

  std::optional<std::size_t> find(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }
  // Throws ValidationError naming the label when absent.
  std::size_t index_of(std::string_view label) const;

  // "{a, b, c}" for error messages.
  std::string describe() const;

  friend bool operator==(const FinSet& a, const FinSet& b);

 private:
  struct Rep {
    std::vector<std::string> labels;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Rep> rep_;
};

std::string join_labels(std::span<const std::string> parts);

// a × b, a-major, labels "x|y".
FinSet product(const FinSet& a, const FinSet& b);
// a^k in lexicographic order, first coordinate most significant.
// power(a, 1) is a itself; power(a, 0) is the one-element set {"()"}.
FinSet power(const FinSet& a, std::size_t k);
// Index of the tuple with the given coordinate indices inside power(a, k).
std::size_t tuple_index(std::span<const std::size_t> digits, std::size_t radix);
FinSet unit_set();

// Total function dom → cod stored as one codomain index per domain index.
class FinMap {
 public:
  FinMap(FinSet dom, FinSet cod, std::vector<std::size_t> table);
  static FinMap from_labels(FinSet dom, FinSet cod,
                            const std::map<std::string, std::string>& table);
  static FinMap identity(const FinSet& s);

  const FinSet& dom() const { return dom_; }
  const FinSet& cod() const { return cod_; }
  const std::vector<std::size_t>& table() const { return table_; }
  std::size_t operator()(std::size_t i) const { return table_[i]; }
  const std::string& at(std::string_view label) const;

  friend bool operator==(const FinMap& a, const FinMap& b) = default;

 private:
  FinSet dom_;
  FinSet cod_;
  std::vector<std::size_t> table_;
};

// g ∘ f; requires f.cod == g.dom.
FinMap compose(const FinMap& g, const FinMap& f);
// x ↦ (f(x), g(x)) into product(f.cod, g.cod).
FinMap pairing(const FinMap& f, const FinMap& g);

// Total function a × b → cod, row-major in a.
class BinaryMap {
 public:
  BinaryMap(FinSet a, FinSet b, FinSet cod, std::vector<std::size_t> table);
  static BinaryMap from_labels(
      FinSet a, FinSet b, FinSet cod,
      const std::map<std::string, std::map<std::string, std::string>>& table);

  const FinSet& first() const { return a_; }
  const FinSet& second() const { return b_; }
  const FinSet& cod() const { return cod_; }
  const std::vector<std::size_t>& table() const { return table_; }
  std::size_t operator()(std::size_t i, std::size_t j) const {
    return table_[i * b_.size() + j];
  }
  const std::string& at(std::string_view a, std::string_view b) const;

  friend bool operator==(const BinaryMap& x, const BinaryMap& y) = default;

 private:
  FinSet a_;
  FinSet b_;
  FinSet cod_;
  std::vector<std::size_t> table_;
};

// source ← apex → target
class Span {
 public:
  Span(FinMap left, FinMap right);

  const FinSet& source() const { return left_.cod(); }
  const FinSet& target() const { return right_.cod(); }
  const FinSet& apex() const { return left_.dom(); }
  const FinMap& left() const { return left_; }
  const FinMap& right() const { return right_; }

  friend bool operator==(const Span& a, const Span& b) = default;

 private:
  FinMap left_;
  FinMap right_;
};

// total → base
class Family {
 public:
  explicit Family(FinMap proj);

  const FinSet& base() const { return proj_.cod(); }
  const FinSet& total() const { return proj_.dom(); }
  const FinMap& proj() const { return proj_; }

  std::vector<std::size_t> fiber_sizes() const;
  // Total indices lying over base index b, in total order.
  std::vector<std::size_t> fiber(std::size_t b) const;

  friend bool operator==(const Family& a, const Family& b) = default;

 private:
  FinMap proj_;
};

using CountMatrix = std::vector<std::vector<std::uint64_t>>;

Span identity_span(const FinSet& a);
// Pullback over the shared middle set; apex labels "x|y", s1-apex-major.
Span compose_spans(const Span& s1, const Span& s2);
CountMatrix span_to_matrix(const Span& s);
// Pull back along the left leg, push forward along the right leg.
Family apply_span_to_family(const Span& s, const Family& fam);
// The span viewed as a family over source × target.
Family span_as_family(const Span& s);

struct FamilyIso {
  // witness[i] = index in the second total matched with index i of the first.
  std::optional<std::vector<std::size_t>> witness;
  // Label of the first base point whose fiber sizes differ.
  std::optional<std::string> mismatch;
  explicit operator bool() const { return witness.has_value(); }
};

FamilyIso families_isomorphic(const Family& f1, const Family& f2);
FamilyIso spans_isomorphic(const Span& s1, const Span& s2);

}  // namespace lensdyn
