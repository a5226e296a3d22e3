#include "qset/kernel.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace qset {

namespace {

constexpr std::size_t kGolden = 0x9e3779b97f4a7c15ULL;

std::size_t mix(std::size_t seed, std::size_t value) {
  seed ^= value + kGolden + (seed << 6) + (seed >> 2);
  return seed;
}

}  // namespace

// ---------------------------------------------------------------------------
// QSet

constexpr std::size_t kEmptyHash = 0xC0FFEE;

struct QSet::Node {
  std::vector<Entry> entries;
  Count qcard = 0;
  std::size_t rank = 0;
  std::size_t hash = kEmptyHash;
  bool classical = true;
};

QSet::QSet() {
  static const auto empty = std::make_shared<const Node>();
  node_ = empty;
}

QSet::QSet(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

std::span<const Entry> QSet::entries() const { return node_->entries; }
bool QSet::empty() const { return node_->entries.empty(); }
std::size_t QSet::distinct() const { return node_->entries.size(); }
Count QSet::qcard() const { return node_->qcard; }
bool QSet::classical() const { return node_->classical; }
std::size_t QSet::rank() const { return node_->rank; }
std::size_t QSet::hash() const { return node_->hash; }

Count QSet::count_of(const Element& e) const {
  const auto& es = node_->entries;
  auto it = std::lower_bound(es.begin(), es.end(), e,
                             [](const Entry& entry, const Element& key) { return entry.element < key; });
  if (it != es.end() && it->element == e) return it->count;
  return 0;
}

bool operator==(const QSet& a, const QSet& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->qcard != b.node_->qcard) return false;
  return a.node_->entries == b.node_->entries;
}

std::strong_ordering operator<=>(const QSet& a, const QSet& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  const auto& x = a.node_->entries;
  const auto& y = b.node_->entries;
  if (auto c = x.size() <=> y.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (auto c = x[i].element <=> y[i].element; c != 0) return c;
    if (auto c = x[i].count <=> y[i].count; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Element

Element Element::matom(KindId kind) { return Element(Rep(std::in_place_index<0>, kind)); }
Element Element::catom(CAtomId id) { return Element(Rep(std::in_place_index<1>, id)); }
Element::Element(QSet set) : rep_(std::in_place_index<2>, std::move(set)) {}

Element Element::pair(Element first, Element second) {
  std::size_t h = mix(mix(0x5041495253ULL, first.hash()), second.hash());
  auto node = std::make_shared<const PairNode>(PairNode{std::move(first), std::move(second), h});
  return Element(Rep(std::in_place_index<3>, std::move(node)));
}

KindId Element::kind() const { return std::get<0>(rep_); }
CAtomId Element::catom_id() const { return std::get<1>(rep_); }
const QSet& Element::set() const { return std::get<2>(rep_); }
const Element& Element::first() const { return std::get<3>(rep_)->first; }
const Element& Element::second() const { return std::get<3>(rep_)->second; }

bool Element::classical() const {
  switch (tag()) {
    case Tag::matom: return false;
    case Tag::catom: return true;
    case Tag::set: return set().classical();
    case Tag::pair: return first().classical() && second().classical();
  }
  return false;
}

std::size_t Element::rank() const {
  switch (tag()) {
    case Tag::matom:
    case Tag::catom: return 0;
    case Tag::set: return set().rank();
    case Tag::pair: return 1 + std::max(first().rank(), second().rank());
  }
  return 0;
}

std::size_t Element::hash() const {
  switch (tag()) {
    case Tag::matom: return mix(0x11, static_cast<std::size_t>(kind()));
    case Tag::catom: return mix(0x22, static_cast<std::size_t>(catom_id()));
    case Tag::set: return mix(0x33, set().hash());
    case Tag::pair: return std::get<3>(rep_)->hash;
  }
  return 0;
}

bool operator==(const Element& a, const Element& b) {
  if (a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case Element::Tag::matom: return a.kind() == b.kind();
    case Element::Tag::catom: return a.catom_id() == b.catom_id();
    case Element::Tag::set: return a.set() == b.set();
    case Element::Tag::pair: {
      const auto& pa = std::get<3>(a.rep_);
      const auto& pb = std::get<3>(b.rep_);
      if (pa == pb) return true;
      return pa->hash == pb->hash && pa->first == pb->first && pa->second == pb->second;
    }
  }
  return false;
}

std::strong_ordering operator<=>(const Element& a, const Element& b) {
  if (auto c = a.tag() <=> b.tag(); c != 0) return c;
  switch (a.tag()) {
    case Element::Tag::matom: return a.kind() <=> b.kind();
    case Element::Tag::catom: return a.catom_id() <=> b.catom_id();
    case Element::Tag::set: return a.set() <=> b.set();
    case Element::Tag::pair:
      if (auto c = a.first() <=> b.first(); c != 0) return c;
      return a.second() <=> b.second();
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------
// Builder

QSetBuilder& QSetBuilder::add(const Element& e, Count n) {
  if (n == 0) return *this;
  auto& slot = counts_[e];
  slot = e.classical() ? 1 : slot + n;
  return *this;
}

QSetBuilder& QSetBuilder::raise(const Element& e, Count n) {
  if (n == 0) return *this;
  if (e.classical()) n = 1;
  auto& slot = counts_[e];
  slot = std::max(slot, n);
  return *this;
}

QSet QSetBuilder::build() const {
  std::vector<Entry> entries;
  entries.reserve(counts_.size());
  for (const auto& [element, count] : counts_) entries.push_back(Entry{element, count});
  return from_sorted(std::move(entries));
}

QSet QSetBuilder::from_sorted(std::vector<Entry> entries) {
  auto node = std::make_shared<QSet::Node>();
  std::size_t h = kEmptyHash;
  for (const auto& [element, count] : entries) {
    node->qcard += count;
    node->rank = std::max(node->rank, element.rank() + 1);
    node->classical = node->classical && element.classical();
    h = mix(mix(h, element.hash()), static_cast<std::size_t>(count));
  }
  node->entries = std::move(entries);
  node->hash = h;
  return QSet(std::move(node));
}

QSet make_qset(std::initializer_list<Entry> entries) {
  QSetBuilder b;
  for (const auto& e : entries) b.add(e.element, e.count);
  return b.build();
}

// ---------------------------------------------------------------------------
// Vocabulary and atoms

KindId Vocabulary::declare_kind(std::string display_name) {
  if (display_name.empty()) throw Error(Errc::invalid_argument, "kind display name must be nonempty");
  std::lock_guard lock(mu_);
  kinds_.push_back(std::move(display_name));
  return static_cast<KindId>(kinds_.size() - 1);
}

CAtomId Vocabulary::declare_catom(std::string name) {
  if (name.empty()) throw Error(Errc::invalid_argument, "classical atom name must be nonempty");
  std::lock_guard lock(mu_);
  catoms_.push_back(std::move(name));
  return static_cast<CAtomId>(catoms_.size() - 1);
}

AtomRef Vocabulary::fresh_matom(KindId kind) {
  std::lock_guard lock(mu_);
  if (static_cast<std::size_t>(kind) >= kinds_.size()) {
    throw Error(Errc::invalid_argument, "undeclared kind");
  }
  return AtomRef(AtomRef::MAtom{kind, next_label_++});
}

Kind Vocabulary::kind(KindId id) const { return Kind{id, kind_name(id)}; }

std::string Vocabulary::kind_name(KindId id) const {
  std::lock_guard lock(mu_);
  auto i = static_cast<std::size_t>(id);
  return i < kinds_.size() ? kinds_[i] : "K" + std::to_string(i);
}

std::string Vocabulary::catom_name(CAtomId id) const {
  std::lock_guard lock(mu_);
  auto i = static_cast<std::size_t>(id);
  return i < catoms_.size() ? catoms_[i] : "A" + std::to_string(i);
}

std::size_t Vocabulary::kind_count() const {
  std::lock_guard lock(mu_);
  return kinds_.size();
}

std::size_t Vocabulary::catom_count() const {
  std::lock_guard lock(mu_);
  return catoms_.size();
}

KindId AtomRef::kind() const { return std::get<MAtom>(rep_).kind; }
CAtomId AtomRef::catom_id() const { return std::get<CAtomId>(rep_); }

Element AtomRef::element() const {
  if (is_matom()) return Element::matom(kind());
  return Element::catom(catom_id());
}

// Identity of concrete atoms, for plumbing that must see labels.
struct AtomIdentity {
  using Key = std::pair<int, std::uint64_t>;  // (0, label) for m-atoms, (1, id) for c-atoms

  static Key key(const AtomRef& a) {
    if (a.is_matom()) return {0, std::get<AtomRef::MAtom>(a.rep_).label};
    return {1, static_cast<std::uint64_t>(a.catom_id())};
  }
};

LabeledElement labeled_pair(LabeledElement first, LabeledElement second) {
  return LabeledElement{LabeledPair{std::make_shared<const LabeledElement>(std::move(first)),
                                    std::make_shared<const LabeledElement>(std::move(second))}};
}

namespace {

// Identity key of a labeled object: equal keys iff the same concrete object.
std::string identity_key(const LabeledElement& e);

std::string identity_key(const LabeledQSet& s) {
  std::set<std::string> keys;
  for (const auto& e : s.elements) keys.insert(identity_key(e));
  std::string out = "{";
  for (const auto& k : keys) {
    out += k;
    out += ',';
  }
  out += '}';
  return out;
}

std::string identity_key(const LabeledElement& e) {
  return std::visit(
      [](const auto& node) -> std::string {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          auto [tag, id] = AtomIdentity::key(node);
          return (tag == 0 ? "m" : "c") + std::to_string(id);
        } else if constexpr (std::is_same_v<T, LabeledQSet>) {
          return identity_key(node);
        } else {
          return "<" + identity_key(*node.first) + "," + identity_key(*node.second) + ">";
        }
      },
      e.node);
}

}  // namespace

QSet canonicalize(const LabeledQSet& build) {
  std::set<std::string> seen;
  QSetBuilder b;
  for (const auto& e : build.elements) {
    if (!seen.insert(identity_key(e)).second) continue;
    b.add(canonicalize(e));
  }
  return b.build();
}

Element canonicalize(const LabeledElement& build) {
  return std::visit(
      [](const auto& node) -> Element {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          return node.element();
        } else if constexpr (std::is_same_v<T, LabeledQSet>) {
          return Element(canonicalize(node));
        } else {
          return Element::pair(canonicalize(*node.first), canonicalize(*node.second));
        }
      },
      build.node);
}

namespace {

void collect_matoms(const LabeledElement& e, std::vector<AtomRef>& out, std::set<AtomIdentity::Key>& seen) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          if (node.is_matom() && seen.insert(AtomIdentity::key(node)).second) out.push_back(node);
        } else if constexpr (std::is_same_v<T, LabeledQSet>) {
          for (const auto& child : node.elements) collect_matoms(child, out, seen);
        } else {
          collect_matoms(*node.first, out, seen);
          collect_matoms(*node.second, out, seen);
        }
      },
      e.node);
}

LabeledElement apply_permutation(const LabeledElement& e, const std::map<AtomIdentity::Key, AtomRef>& map) {
  return std::visit(
      [&](const auto& node) -> LabeledElement {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, AtomRef>) {
          auto it = map.find(AtomIdentity::key(node));
          return LabeledElement{it == map.end() ? node : it->second};
        } else if constexpr (std::is_same_v<T, LabeledQSet>) {
          LabeledQSet out;
          out.elements.reserve(node.elements.size());
          for (const auto& child : node.elements) out.elements.push_back(apply_permutation(child, map));
          return LabeledElement{std::move(out)};
        } else {
          return labeled_pair(apply_permutation(*node.first, map), apply_permutation(*node.second, map));
        }
      },
      e.node);
}

}  // namespace

std::vector<AtomRef> matoms_of(const LabeledQSet& build) {
  std::vector<AtomRef> out;
  std::set<AtomIdentity::Key> seen;
  for (const auto& e : build.elements) collect_matoms(e, out, seen);
  return out;
}

QSet relabel(const LabeledQSet& build, const LabelPermutation& perm) {
  std::map<AtomIdentity::Key, AtomRef> map;
  for (const auto& [from, to] : perm) {
    if (!from.is_matom() || !to.is_matom()) {
      throw Error(Errc::invalid_permutation, "only m-atoms can be relabeled");
    }
    if (from.kind() != to.kind()) throw Error(Errc::invalid_permutation, "relabeling must preserve kinds");
    if (!map.emplace(AtomIdentity::key(from), to).second) {
      throw Error(Errc::invalid_permutation, "an m-atom is mapped twice");
    }
  }
  std::set<AtomIdentity::Key> images;
  for (const auto& atom : matoms_of(build)) {
    auto it = map.find(AtomIdentity::key(atom));
    const AtomRef& image = it == map.end() ? atom : it->second;
    if (!images.insert(AtomIdentity::key(image)).second) {
      throw Error(Errc::invalid_permutation, "relabeling is not injective on the build");
    }
  }
  LabeledQSet moved;
  moved.elements.reserve(build.elements.size());
  for (const auto& e : build.elements) moved.elements.push_back(apply_permutation(e, map));
  return canonicalize(moved);
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string render_entry(const Entry& entry, const Vocabulary& vocab) {
  std::string text = render(entry.element, vocab);
  if (entry.count > 1) text += "^" + std::to_string(entry.count);
  return text;
}

}  // namespace

std::string render(const QSet& x, const Vocabulary& vocab) {
  std::vector<std::string> atoms;
  std::vector<std::string> sets;
  std::vector<std::string> pairs;
  for (const auto& entry : x.entries()) {
    if (entry.element.is_atom()) {
      atoms.push_back(render_entry(entry, vocab));  // already in kind-id, then atom-id order
    } else if (entry.element.is_set()) {
      sets.push_back(render_entry(entry, vocab));
    } else {
      pairs.push_back(render_entry(entry, vocab));
    }
  }
  std::sort(sets.begin(), sets.end());
  std::sort(pairs.begin(), pairs.end());
  std::string out = "{";
  bool first = true;
  for (const auto* group : {&atoms, &sets, &pairs}) {
    for (const auto& text : *group) {
      if (!first) out += ", ";
      out += text;
      first = false;
    }
  }
  out += "}";
  return out;
}

std::string render(const Element& e, const Vocabulary& vocab) {
  switch (e.tag()) {
    case Element::Tag::matom: return vocab.kind_name(e.kind());
    case Element::Tag::catom: return vocab.catom_name(e.catom_id());
    case Element::Tag::set: return render(e.set(), vocab);
    case Element::Tag::pair: return "<" + render(e.first(), vocab) + ", " + render(e.second(), vocab) + ">";
  }
  return {};
}

}  // namespace qset
