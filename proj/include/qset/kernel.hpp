#pragma once

// Canonical quasi-sets.
//
// A QSet is stored only in canonical form: a sorted list of (element class,
// count) entries. Two QSet values are indistinguishable exactly when their
// entry lists are identical, so `==` on QSet *is* the indistinguishability
// relation. M-atom labels exist only inside labeled builds (LabeledQSet) and
// are erased by canonicalize().

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qset/error.hpp"

namespace qset {

enum class KindId : std::uint32_t {};
enum class CAtomId : std::uint32_t {};
using Count = std::uint64_t;

struct Kind {
  KindId id;
  std::string display_name;
};

class Element;
struct Entry;

class QSet {
 public:
  QSet();

  std::span<const Entry> entries() const;
  bool empty() const;
  /// Number of distinct element classes at the top level.
  std::size_t distinct() const;
  /// Quasi-cardinal: sum of all top-level counts.
  Count qcard() const;
  /// True iff no m-atom occurs hereditarily (predicate Z).
  bool classical() const;
  /// Hereditary nesting depth; rank({}) = 0, atoms have rank 0.
  std::size_t rank() const;
  std::size_t hash() const;

  /// Count of the class of `e` at the top level (0 when absent).
  Count count_of(const Element& e) const;
  bool contains(const Element& e) const { return count_of(e) > 0; }

  friend bool operator==(const QSet& a, const QSet& b);
  friend std::strong_ordering operator<=>(const QSet& a, const QSet& b);

 private:
  struct Node;
  explicit QSet(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
  friend class QSetBuilder;
};

/// An element class descriptor: an m-atom kind, a classical atom, a nested
/// canonical qset, or a primitive ordered pair of element classes.
class Element {
 public:
  enum class Tag : std::uint8_t { matom = 0, catom = 1, set = 2, pair = 3 };

  static Element matom(KindId kind);
  static Element catom(CAtomId id);
  static Element pair(Element first, Element second);
  Element(QSet set);  // NOLINT(google-explicit-constructor): qsets are elements

  Tag tag() const { return static_cast<Tag>(rep_.index()); }
  bool is_atom() const { return tag() == Tag::matom || tag() == Tag::catom; }
  bool is_set() const { return tag() == Tag::set; }
  bool is_pair() const { return tag() == Tag::pair; }

  KindId kind() const;
  CAtomId catom_id() const;
  const QSet& set() const;
  const Element& first() const;
  const Element& second() const;

  bool classical() const;
  std::size_t rank() const;
  std::size_t hash() const;

  friend bool operator==(const Element& a, const Element& b);
  friend std::strong_ordering operator<=>(const Element& a, const Element& b);

 private:
  struct PairNode;
  using Rep = std::variant<KindId, CAtomId, QSet, std::shared_ptr<const PairNode>>;
  explicit Element(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

struct Entry {
  Element element;
  Count count;

  friend bool operator==(const Entry&, const Entry&) = default;
};

struct Element::PairNode {
  Element first;
  Element second;
  std::size_t hash;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const { return e.hash(); }
  std::size_t operator()(const QSet& s) const { return s.hash(); }
};

/// Accumulates counts and produces a canonical QSet.
class QSetBuilder {
 public:
  /// Adds `n` occurrences of `e`. Occurrences of a classical element are the
  /// same object, so its count never exceeds 1.
  QSetBuilder& add(const Element& e, Count n = 1);
  /// Raises the count of `e` to at least `n`.
  QSetBuilder& raise(const Element& e, Count n);
  QSet build() const;

  /// Wraps entries that are already strictly sorted by element, with
  /// positive counts and classical elements at count 1.
  static QSet from_sorted(std::vector<Entry> entries);

 private:
  std::map<Element, Count> counts_;
};

QSet make_qset(std::initializer_list<Entry> entries);

// ---------------------------------------------------------------------------
// Session facilities: kind/atom declarations and m-atom label allocation.

class AtomRef;

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(const Vocabulary&) = delete;
  Vocabulary& operator=(const Vocabulary&) = delete;

  KindId declare_kind(std::string display_name);
  CAtomId declare_catom(std::string name);
  /// A fresh m-atom of `kind`, distinct from every other atom handed out.
  AtomRef fresh_matom(KindId kind);

  Kind kind(KindId id) const;
  std::string kind_name(KindId id) const;
  std::string catom_name(CAtomId id) const;
  std::size_t kind_count() const;
  std::size_t catom_count() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> kinds_;
  std::vector<std::string> catoms_;
  std::uint64_t next_label_ = 1;
};

/// A concrete urelement. M-atoms carry an internal label that no public
/// operation reveals; only identity-sensitive plumbing (canonicalize, relabel)
/// looks at it.
class AtomRef {
 public:
  static AtomRef catom(CAtomId id) { return AtomRef(id); }

  bool is_matom() const { return std::holds_alternative<MAtom>(rep_); }
  KindId kind() const;
  CAtomId catom_id() const;
  /// The indistinguishability class of this atom (label forgotten).
  Element element() const;

 private:
  struct MAtom {
    KindId kind;
    std::uint64_t label;
  };
  explicit AtomRef(MAtom m) : rep_(m) {}
  explicit AtomRef(CAtomId id) : rep_(id) {}
  std::variant<MAtom, CAtomId> rep_;

  friend class Vocabulary;
  friend struct AtomIdentity;
};

// Labeled builds: concrete (identity-carrying) hereditarily finite qsets.
struct LabeledElement;
struct LabeledQSet {
  std::vector<LabeledElement> elements;
};
struct LabeledPair {
  std::shared_ptr<const LabeledElement> first;
  std::shared_ptr<const LabeledElement> second;
};
struct LabeledElement {
  std::variant<AtomRef, LabeledQSet, LabeledPair> node;
};

LabeledElement labeled_pair(LabeledElement first, LabeledElement second);

/// Erases labels: repeated identical objects collapse, indistinguishable
/// distinct objects are counted.
QSet canonicalize(const LabeledQSet& build);
Element canonicalize(const LabeledElement& build);

using LabelPermutation = std::vector<std::pair<AtomRef, AtomRef>>;

/// Applies a kind-preserving relabeling and canonicalizes. Test harness for
/// the no-identity contract: the result always equals canonicalize(build).
/// Throws Errc::invalid_permutation when a pair changes kind, involves a
/// classical atom, or the mapping is not injective on the build's atoms.
QSet relabel(const LabeledQSet& build, const LabelPermutation& perm);

/// Every m-atom occurring hereditarily in `build`, each distinct atom once.
std::vector<AtomRef> matoms_of(const LabeledQSet& build);

// ---------------------------------------------------------------------------
// Relations on element classes.

inline bool indist(const Element& x, const Element& y) { return x == y; }
inline Count qcard(const QSet& x) { return x.qcard(); }
inline bool is_classical(const QSet& x) { return x.classical(); }
inline Count mem_count(const Element& e, const QSet& x) { return x.count_of(e); }

/// Canonical textual form, e.g. "{K^2, A1, {J}}". M-classes come first by
/// kind id, then classical atoms by id, then nested qsets and pairs sorted by
/// their own text.
std::string render(const QSet& x, const Vocabulary& vocab);
std::string render(const Element& e, const Vocabulary& vocab);

}  // namespace qset

template <>
struct std::hash<qset::Element> {
  std::size_t operator()(const qset::Element& e) const noexcept { return e.hash(); }
};
template <>
struct std::hash<qset::QSet> {
  std::size_t operator()(const qset::QSet& s) const noexcept { return s.hash(); }
};
