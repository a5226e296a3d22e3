#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qset/algebra.hpp"
#include "qset/kernel.hpp"
#include "qset/morphism.hpp"
#include "qset/parser.hpp"
#include "qset/universe.hpp"

namespace qset::lang {

/// Structured result of audit/classify.
struct Report {
  std::string kind;  // "audit" or "classification"
  nlohmann::ordered_json data;
  std::string summary;
};

/// Atoms and pairs are Element values; qsets are always held as QSet.
using Value = std::variant<QSet, Element, QuasiFunction, Fragment, bool, Count, Report>;

struct StatementResult {
  enum class Kind { decl, let, expr, check };
  Kind kind;
  Span span;
  std::string name;  // let target
  std::optional<Value> value;
  bool passed = true;  // checks only
};

struct SessionOptions {
  FragmentLimits limits;
  AuditOptions audit;
  std::size_t default_depth = 1;
};

/// One interpreter session: declarations, bindings and check tallies.
/// Not thread-safe; run independent sessions concurrently instead.
class Session {
 public:
  explicit Session(SessionOptions options = {});

  /// Parses the whole source first, then executes statement by statement.
  std::vector<StatementResult> run(std::string_view source);
  StatementResult execute(const Term& statement);
  Value evaluate(const Term& expr);
  /// Evaluates a single expression given as source text.
  Value evaluate_source(std::string_view expression);

  std::string render(const Value& value) const;
  const Vocabulary& vocabulary() const { return vocab_; }
  Vocabulary& vocabulary() { return vocab_; }
  const SessionOptions& options() const { return options_; }

  std::size_t checks_passed() const { return passed_; }
  std::size_t checks_failed() const { return failed_; }

 private:
  struct MAtomAlias {
    KindId kind;
    Count supply;
  };
  using Binding = std::variant<KindId, MAtomAlias, CAtomId, Value>;

  void declare(const std::string& name, Binding binding, Span span);
  const Binding& lookup(const Ident& ident, Span span) const;
  Value apply(const App& app, Span span);
  Element element_of(const Term& term, std::map<std::string, Count>* alias_uses);
  bool equivalent(const Term& lhs, const Term& rhs, Span span);

  SessionOptions options_;
  Vocabulary vocab_;
  std::map<std::string, Binding> env_;
  std::size_t passed_ = 0;
  std::size_t failed_ = 0;
};

std::string_view type_name(const Value& value);

}  // namespace qset::lang
