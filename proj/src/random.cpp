#include "qset/random.hpp"

namespace qset {

namespace {

Element random_element(Rng& rng, const Alphabet& alphabet, const QSetShape& shape, std::size_t depth) {
  if (depth > 0 && coin(rng, shape.nested_percent)) {
    QSetShape inner = shape;
    inner.max_qcard = std::max<Count>(1, shape.max_qcard / 2);
    return Element(random_qset(rng, alphabet, inner));
  }
  if (depth > 0 && coin(rng, shape.pair_percent)) {
    auto a = random_element(rng, alphabet, shape, depth - 1);
    auto b = random_element(rng, alphabet, shape, depth - 1);
    return Element::pair(std::move(a), std::move(b));
  }
  std::size_t n = alphabet.kinds.size() + alphabet.catoms.size();
  std::size_t pick = uniform_index(rng, n);
  if (pick < alphabet.kinds.size()) return Element::matom(alphabet.kinds[pick]);
  return Element::catom(alphabet.catoms[pick - alphabet.kinds.size()]);
}

}  // namespace

QSet random_qset(Rng& rng, const Alphabet& alphabet, const QSetShape& shape) {
  Count occurrences = uniform_index(rng, shape.max_qcard + 1);
  QSetBuilder b;
  QSetShape inner = shape;
  inner.max_depth = shape.max_depth == 0 ? 0 : shape.max_depth - 1;
  for (Count i = 0; i < occurrences; ++i) {
    if (shape.max_depth > 0 && coin(rng, shape.nested_percent)) {
      inner.max_qcard = std::max<Count>(1, shape.max_qcard / 2);
      b.add(Element(random_qset(rng, alphabet, inner)));
    } else if (shape.max_depth > 0 && coin(rng, shape.pair_percent)) {
      b.add(Element::pair(random_element(rng, alphabet, inner, inner.max_depth),
                          random_element(rng, alphabet, inner, inner.max_depth)));
    } else {
      b.add(random_element(rng, alphabet, shape, 0));
    }
  }
  return b.build();
}

QuasiFunction random_qfun(Rng& rng, const QSet& dom, const QSet& cod) {
  std::vector<ClassPair> graph;
  for (const auto& a : dom.entries()) {
    const auto& b = cod.entries()[uniform_index(rng, cod.distinct())];
    graph.emplace_back(a.element, b.element);
  }
  return QuasiFunction(QuasiRelation(dom, cod, std::move(graph)));
}

std::vector<QSet> all_flat_qsets(const Alphabet& alphabet, Count max_qcard) {
  std::vector<QSet> out;
  // Counts per kind in [0, max], each catom in {0, 1}; keep total <= max.
  std::vector<Count> kind_counts(alphabet.kinds.size(), 0);
  std::vector<Count> catom_counts(alphabet.catoms.size(), 0);
  auto emit = [&] {
    Count total = 0;
    for (auto c : kind_counts) total += c;
    for (auto c : catom_counts) total += c;
    if (total > max_qcard) return;
    QSetBuilder b;
    for (std::size_t i = 0; i < kind_counts.size(); ++i) b.add(Element::matom(alphabet.kinds[i]), kind_counts[i]);
    for (std::size_t i = 0; i < catom_counts.size(); ++i) b.add(Element::catom(alphabet.catoms[i]), catom_counts[i]);
    out.push_back(b.build());
  };
  std::size_t digits = kind_counts.size() + catom_counts.size();
  auto limit = [&](std::size_t d) { return d < kind_counts.size() ? max_qcard : Count{1}; };
  auto slot = [&](std::size_t d) -> Count& {
    return d < kind_counts.size() ? kind_counts[d] : catom_counts[d - kind_counts.size()];
  };
  while (true) {
    emit();
    std::size_t d = 0;
    while (d < digits && slot(d) == limit(d)) {
      slot(d) = 0;
      ++d;
    }
    if (d == digits) break;
    ++slot(d);
  }
  return out;
}

std::vector<QuasiFunction> all_qfuns(const QSet& dom, const QSet& cod) {
  std::vector<QuasiFunction> out;
  auto classes = dom.entries();
  if (classes.empty()) {
    out.push_back(QuasiFunction(QuasiRelation(dom, cod, {})));
    return out;
  }
  if (cod.empty()) return out;
  std::vector<std::size_t> choice(classes.size(), 0);
  while (true) {
    std::vector<ClassPair> graph;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      graph.emplace_back(classes[i].element, cod.entries()[choice[i]].element);
    }
    out.push_back(QuasiFunction(QuasiRelation(dom, cod, std::move(graph))));
    std::size_t d = 0;
    while (d < choice.size() && choice[d] + 1 == cod.distinct()) {
      choice[d] = 0;
      ++d;
    }
    if (d == choice.size()) break;
    ++choice[d];
  }
  return out;
}

}  // namespace qset
