#include "qset/morphism.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "qset/random.hpp"

namespace qset {

QuasiRelation::QuasiRelation(QSet dom, QSet cod, std::vector<ClassPair> graph)
    : dom_(std::move(dom)), cod_(std::move(cod)), graph_(std::move(graph)) {
  std::sort(graph_.begin(), graph_.end());
  graph_.erase(std::unique(graph_.begin(), graph_.end()), graph_.end());
  for (const auto& [a, b] : graph_) {
    if (!dom_.contains(a) || !cod_.contains(b)) {
      throw Error(Errc::invalid_argument, "relation pair references a class outside dom/cod");
    }
  }
}

bool is_quasi_function(const QuasiRelation& q) {
  // graph is sorted by first component, so each dom class must appear in
  // exactly one consecutive run of length 1, in dom order.
  auto graph = q.graph();
  auto dom = q.dom().entries();
  if (graph.size() != dom.size()) return false;
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (!(graph[i].first == dom[i].element)) return false;
  }
  return true;
}

QuasiFunction::QuasiFunction(QuasiRelation q) : rel_(std::move(q)) {
  if (!is_quasi_function(rel_)) {
    throw Error(Errc::not_a_quasi_function, "relation is not total and class-functional on its domain");
  }
}

const Element& QuasiFunction::operator()(const Element& a) const {
  auto g = graph();
  auto it = std::lower_bound(g.begin(), g.end(), a, [](const ClassPair& p, const Element& key) { return p.first < key; });
  if (it == g.end() || !(it->first == a)) throw Error(Errc::invalid_argument, "argument is not a domain class");
  return it->second;
}

QuasiFunction identity(const QSet& a) {
  std::vector<ClassPair> graph;
  graph.reserve(a.distinct());
  for (const auto& e : a.entries()) graph.emplace_back(e.element, e.element);
  return QuasiFunction(QuasiRelation(a, a, std::move(graph)));
}

QuasiFunction compose(const QuasiFunction& g, const QuasiFunction& f) {
  if (!(f.cod() == g.dom())) throw Error(Errc::not_composable, "codomain of f differs from domain of g");
  std::vector<ClassPair> graph;
  graph.reserve(f.graph().size());
  for (const auto& [a, b] : f.graph()) graph.emplace_back(a, g(b));
  return QuasiFunction(QuasiRelation(f.dom(), g.cod(), std::move(graph)));
}

bool qfun_equiv(const QuasiFunction& f, const QuasiFunction& g) { return f.relation() == g.relation(); }

namespace {

QSet graph_qset(std::span<const ClassPair> graph) {
  QSetBuilder b;
  for (const auto& [a, c] : graph) b.raise(Element::pair(a, c), 1);
  return b.build();
}

}  // namespace

QSet encode_morphism(const QuasiFunction& f) {
  Element triple = Element::pair(Element::pair(f.dom(), f.cod()), graph_qset(f.graph()));
  return QSetBuilder().raise(triple, 1).build();
}

std::optional<QuasiFunction> decode_morphism(const Element& e) {
  if (!e.is_set() || e.set().distinct() != 1 || e.set().qcard() != 1) return std::nullopt;
  const Element& triple = e.set().entries()[0].element;
  if (!triple.is_pair() || !triple.first().is_pair() || !triple.second().is_set()) return std::nullopt;
  const Element& ends = triple.first();
  if (!ends.first().is_set() || !ends.second().is_set()) return std::nullopt;
  std::vector<ClassPair> graph;
  for (const auto& entry : triple.second().set().entries()) {
    if (!entry.element.is_pair() || entry.count != 1) return std::nullopt;
    graph.emplace_back(entry.element.first(), entry.element.second());
  }
  try {
    QuasiRelation rel(ends.first().set(), ends.second().set(), std::move(graph));
    if (!is_quasi_function(rel)) return std::nullopt;
    return QuasiFunction(std::move(rel));
  } catch (const Error&) {
    return std::nullopt;
  }
}

CategoryPresentation CategoryPresentation::make(QSet objects, QSet morphisms) {
  for (const auto& entry : morphisms.entries()) {
    auto f = decode_morphism(entry.element);
    if (!f) throw Error(Errc::invalid_argument, "morphism element does not encode a quasi-function");
    if (!objects.contains(Element(f->dom())) || !objects.contains(Element(f->cod()))) {
      throw Error(Errc::invalid_argument, "morphism domain or codomain is not an object");
    }
  }
  return CategoryPresentation{std::move(objects), std::move(morphisms)};
}

CategoryPresentation CategoryPresentation::make(QSet objects, std::span<const QuasiFunction> morphisms) {
  QSetBuilder b;
  for (const auto& f : morphisms) b.raise(Element(encode_morphism(f)), 1);
  return make(std::move(objects), b.build());
}

LawReport check_category_laws(std::span<const QuasiFunction> sample, std::uint64_t seed,
                              const LawOptions& options) {
  const ComposeFn& comp = options.compose_fn ? options.compose_fn : ComposeFn(compose);
  LawReport report;

  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& f = sample[i];
    ++report.identity_checks;
    if (!qfun_equiv(comp(identity(f.cod()), f), f)) report.violations.push_back({"left_identity", {i}});
    ++report.identity_checks;
    if (!qfun_equiv(comp(f, identity(f.dom())), f)) report.violations.push_back({"right_identity", {i}});
  }

  // Index morphisms by domain so composable successors are found directly.
  std::map<QSet, std::vector<std::size_t>> by_dom;
  for (std::size_t i = 0; i < sample.size(); ++i) by_dom[sample[i].dom()].push_back(i);
  auto successors = [&](std::size_t i) -> const std::vector<std::size_t>& {
    static const std::vector<std::size_t> none;
    auto it = by_dom.find(sample[i].cod());
    return it == by_dom.end() ? none : it->second;
  };

  auto check_triple = [&](std::size_t fi, std::size_t gi, std::size_t hi) {
    const auto& f = sample[fi];
    const auto& g = sample[gi];
    const auto& h = sample[hi];
    ++report.triples_checked;
    if (!qfun_equiv(comp(h, comp(g, f)), comp(comp(h, g), f))) {
      report.violations.push_back({"associativity", {fi, gi, hi}});
    }
  };

  Count total = 0;
  for (std::size_t fi = 0; fi < sample.size(); ++fi) {
    for (std::size_t gi : successors(fi)) total += successors(gi).size();
  }

  if (total <= options.max_triples) {
    for (std::size_t fi = 0; fi < sample.size(); ++fi) {
      for (std::size_t gi : successors(fi)) {
        for (std::size_t hi : successors(gi)) check_triple(fi, gi, hi);
      }
    }
    return report;
  }

  Rng rng(seed);
  std::vector<std::size_t> starts;
  for (std::size_t fi = 0; fi < sample.size(); ++fi) {
    for (std::size_t gi : successors(fi)) {
      if (!successors(gi).empty()) {
        starts.push_back(fi);
        break;
      }
    }
  }
  while (report.triples_checked < options.max_triples) {
    std::size_t fi = starts[uniform_index(rng, starts.size())];
    std::vector<std::size_t> middles;
    for (std::size_t gi : successors(fi)) {
      if (!successors(gi).empty()) middles.push_back(gi);
    }
    std::size_t gi = middles[uniform_index(rng, middles.size())];
    const auto& hs = successors(gi);
    check_triple(fi, gi, hs[uniform_index(rng, hs.size())]);
  }
  return report;
}

nlohmann::ordered_json to_json(const LawReport& report) {
  nlohmann::ordered_json out;
  out["triples_checked"] = report.triples_checked;
  out["identity_checks"] = report.identity_checks;
  auto violations = nlohmann::ordered_json::array();
  for (const auto& v : report.violations) {
    nlohmann::ordered_json item;
    item["law"] = v.law;
    item["morphisms"] = v.indices;
    violations.push_back(std::move(item));
  }
  out["violations"] = std::move(violations);
  return out;
}

std::string render(const QuasiFunction& f, const Vocabulary& vocab) {
  return "qfun(" + render(f.dom(), vocab) + ", " + render(f.cod(), vocab) + ", " +
         render(graph_qset(f.graph()), vocab) + ")";
}

}  // namespace qset
