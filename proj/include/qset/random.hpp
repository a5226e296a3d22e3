#pragma once

// Seeded generators for qsets and quasi-functions. Only the raw 64-bit engine
// output is used (std distributions are implementation-defined), so a seed
// gives the same structures on every platform.

#include <cstdint>
#include <random>
#include <vector>

#include "qset/kernel.hpp"
#include "qset/morphism.hpp"

namespace qset {

using Rng = std::mt19937_64;

inline std::size_t uniform_index(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }
inline bool coin(Rng& rng, unsigned percent) { return rng() % 100 < percent; }

struct Alphabet {
  std::vector<KindId> kinds;
  std::vector<CAtomId> catoms;
};

struct QSetShape {
  Count max_qcard = 4;
  std::size_t max_depth = 1;      // nesting levels below the top
  unsigned nested_percent = 25;   // chance an occurrence is a nested qset
  unsigned pair_percent = 0;      // chance an occurrence is a primitive pair
};

QSet random_qset(Rng& rng, const Alphabet& alphabet, const QSetShape& shape);

/// A uniformly chosen class-level function dom -> cod. cod must be nonempty
/// unless dom is empty.
QuasiFunction random_qfun(Rng& rng, const QSet& dom, const QSet& cod);

/// Every flat qset (atoms only) over the alphabet with qcard <= max_qcard.
std::vector<QSet> all_flat_qsets(const Alphabet& alphabet, Count max_qcard);

/// Every quasi-function dom -> cod.
std::vector<QuasiFunction> all_qfuns(const QSet& dom, const QSet& cod);

}  // namespace qset
