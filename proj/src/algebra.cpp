#include "qset/algebra.hpp"

#include <algorithm>
#include <limits>

namespace qset {

Count binomial(Count n, Count k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Count result = 1;
  for (Count i = 1; i <= k; ++i) {
    // result * (n - k + i) / i stays integral at every step
    Count factor = n - k + i;
    if (result > std::numeric_limits<Count>::max() / factor) {
      throw Error(Errc::cap_exceeded, "binomial coefficient overflows");
    }
    result = result * factor / i;
  }
  return result;
}

QSet power(const QSet& x, const Limits& limits) {
  if (x.qcard() > limits.power_operand) {
    throw Error(Errc::cap_exceeded, "power operand qcard " + std::to_string(x.qcard()) + " exceeds cap " +
                                        std::to_string(limits.power_operand));
  }
  auto classes = x.entries();
  std::vector<Count> choice(classes.size(), 0);
  QSetBuilder out;
  // Mixed-radix walk over (k_1, ..., k_m) with 0 <= k_i <= n_i.
  while (true) {
    QSetBuilder sub;
    Count multiplicity = 1;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      sub.add(classes[i].element, choice[i]);
      multiplicity *= binomial(classes[i].count, choice[i]);
    }
    out.add(Element(sub.build()), multiplicity);

    std::size_t digit = 0;
    while (digit < classes.size() && choice[digit] == classes[digit].count) {
      choice[digit] = 0;
      ++digit;
    }
    if (digit == classes.size()) break;
    ++choice[digit];
  }
  return out.build();
}

QSet singleton_in(const Element& x, const QSet& u) {
  Count n = u.count_of(x);
  if (n == 0) throw Error(Errc::not_in_universe, "element is not a member of the universe");
  return QSetBuilder().add(x, n).build();
}

QSet pair_in(const Element& x, const Element& y, const QSet& u) {
  return union_of(singleton_in(x, u), singleton_in(y, u));
}

QSet opair_in(const Element& x, const Element& y, const QSet& u) {
  QSet single = singleton_in(x, u);
  QSet both = pair_in(x, y, u);
  return QSetBuilder().raise(Element(single), 1).raise(Element(both), 1).build();
}

QSet product(const QSet& x, const QSet& y, const Limits& limits) {
  Count total = 0;
  if (__builtin_mul_overflow(x.qcard(), y.qcard(), &total) || total > limits.product_result) {
    throw Error(Errc::cap_exceeded, "product qcard exceeds cap " + std::to_string(limits.product_result));
  }
  QSetBuilder out;
  for (const auto& a : x.entries()) {
    for (const auto& b : y.entries()) {
      out.add(Element::pair(a.element, b.element), a.count * b.count);
    }
  }
  return out.build();
}

QSet union_of(const QSet& x, const QSet& y) {
  auto a = x.entries();
  auto b = y.entries();
  std::vector<Entry> merged;
  merged.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].element < b[j].element)) {
      merged.push_back(a[i++]);
    } else if (i == a.size() || b[j].element < a[i].element) {
      merged.push_back(b[j++]);
    } else {
      merged.push_back(Entry{a[i].element, std::max(a[i].count, b[j].count)});
      ++i;
      ++j;
    }
  }
  return QSetBuilder::from_sorted(std::move(merged));
}

IndexedFamily::IndexedFamily(QSet index, std::vector<std::pair<Element, QSet>> entries)
    : index_(std::move(index)), entries_(std::move(entries)) {
  if (!index_.classical()) throw Error(Errc::non_classical_index, "family index must be a classical qset");
  std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  bool exact = entries_.size() == index_.distinct();
  for (std::size_t i = 0; exact && i < entries_.size(); ++i) {
    exact = entries_[i].first == index_.entries()[i].element;
  }
  if (!exact) throw Error(Errc::invalid_argument, "family entries must be keyed by exactly the index elements");
}

QSet family_union(const IndexedFamily& family) {
  if (!family.index().classical()) {
    throw Error(Errc::non_classical_index, "family index must be a classical qset");
  }
  QSet acc;
  for (const auto& [key, member] : family.entries()) acc = union_of(acc, member);
  return acc;
}

}  // namespace qset
