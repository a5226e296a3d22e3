#pragma once

// Constructor algebra over canonical qsets: power qset, universe-relative
// singleton/pair/ordered pair, cartesian product, union and indexed union.

#include <vector>

#include "qset/kernel.hpp"

namespace qset {

/// Enumeration guards. Exceeding one is an error, never a silent truncation.
struct Limits {
  Count power_operand = 16;    // max qcard(x) accepted by power(x)
  Count product_result = 4096;  // max qcard(x) * qcard(y) accepted by product
};

/// Every sub-qset form of x. The form taking k_i copies from a class of count
/// n_i occurs with multiplicity prod C(n_i, k_i), so qcard(power(x)) = 2^qcard(x).
QSet power(const QSet& x, const Limits& limits = {});

/// [x]_U: the full indistinguishability class of x inside U, with its count.
QSet singleton_in(const Element& x, const QSet& u);
/// [x, y]_U = [x]_U u [y]_U.
QSet pair_in(const Element& x, const Element& y, const QSet& u);
/// <x, y>_U = { [x]_U, [x, y]_U }, collapsing to one element when both agree.
QSet opair_in(const Element& x, const Element& y, const QSet& u);

/// Primitive-pair product: <a, b> carries count_x(a) * count_y(b).
QSet product(const QSet& x, const QSet& y, const Limits& limits = {});

/// Class-wise maximum of counts.
QSet union_of(const QSet& x, const QSet& y);

/// A family (x_i) indexed by the elements of a classical qset.
class IndexedFamily {
 public:
  /// Throws Errc::non_classical_index when `index` contains an m-atom and
  /// Errc::invalid_argument unless the entry keys are exactly the index elements.
  IndexedFamily(QSet index, std::vector<std::pair<Element, QSet>> entries);

  const QSet& index() const { return index_; }
  const std::vector<std::pair<Element, QSet>>& entries() const { return entries_; }

 private:
  QSet index_;
  std::vector<std::pair<Element, QSet>> entries_;
};

/// Union over all members of the family; the empty family yields {}.
QSet family_union(const IndexedFamily& family);

/// C(n, k) as an exact integer; throws Errc::cap_exceeded on overflow.
Count binomial(Count n, Count k);

}  // namespace qset
