#pragma once

// Quasi-relations and quasi-functions at the level of indistinguishability
// classes, plus the category-law checker for QSet.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qset/kernel.hpp"

namespace qset {

using ClassPair = std::pair<Element, Element>;

/// q subset of dom x cod, normalized: each class pair at most once, sorted.
class QuasiRelation {
 public:
  /// Throws Errc::invalid_argument when a pair names a class absent from dom/cod.
  QuasiRelation(QSet dom, QSet cod, std::vector<ClassPair> graph);

  const QSet& dom() const { return dom_; }
  const QSet& cod() const { return cod_; }
  std::span<const ClassPair> graph() const { return graph_; }

  friend bool operator==(const QuasiRelation&, const QuasiRelation&) = default;

 private:
  QSet dom_;
  QSet cod_;
  std::vector<ClassPair> graph_;
};

/// Total and class-functional: every dom class has exactly one image class.
bool is_quasi_function(const QuasiRelation& q);

class QuasiFunction {
 public:
  /// Throws Errc::not_a_quasi_function unless is_quasi_function(q).
  explicit QuasiFunction(QuasiRelation q);

  const QSet& dom() const { return rel_.dom(); }
  const QSet& cod() const { return rel_.cod(); }
  std::span<const ClassPair> graph() const { return rel_.graph(); }
  const QuasiRelation& relation() const { return rel_; }
  /// Image class of a dom class; throws Errc::invalid_argument if absent.
  const Element& operator()(const Element& a) const;

 private:
  QuasiRelation rel_;
};

QuasiFunction identity(const QSet& a);
/// g after f. Throws Errc::not_composable unless cod(f) == dom(g).
QuasiFunction compose(const QuasiFunction& g, const QuasiFunction& f);
bool qfun_equiv(const QuasiFunction& f, const QuasiFunction& g);

/// Morphism encoding used inside category presentations: the qset
/// {<<dom, cod>, graph>} where graph is the qset of class pairs <a, b>.
QSet encode_morphism(const QuasiFunction& f);
std::optional<QuasiFunction> decode_morphism(const Element& e);

struct CategoryPresentation {
  QSet objects;
  QSet morphisms;

  /// Validates that every morphism decodes and that its dom/cod are objects.
  static CategoryPresentation make(QSet objects, QSet morphisms);
  static CategoryPresentation make(QSet objects, std::span<const QuasiFunction> morphisms);
};

struct LawViolation {
  std::string law;                   // "associativity", "left_identity", "right_identity"
  std::vector<std::size_t> indices;  // positions in the checked sample
};

struct LawReport {
  Count triples_checked = 0;
  Count identity_checks = 0;
  std::vector<LawViolation> violations;
};

using ComposeFn = std::function<QuasiFunction(const QuasiFunction& g, const QuasiFunction& f)>;

struct LawOptions {
  /// Above this many composable triples, triples are sampled with the seed.
  Count max_triples = 250000;
  /// Composition under test; defaults to compose().
  ComposeFn compose_fn;
};

/// Checks associativity on every composable triple of the sample (or a
/// seeded sample of them) and both identity laws on every member.
LawReport check_category_laws(std::span<const QuasiFunction> sample, std::uint64_t seed,
                              const LawOptions& options = {});

nlohmann::ordered_json to_json(const LawReport& report);
std::string render(const QuasiFunction& f, const Vocabulary& vocab);

}  // namespace qset
