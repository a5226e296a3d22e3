#include "qset/evaluator.hpp"

namespace qset::lang {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

[[noreturn]] void type_error(Span span, const std::string& message) {
  throw SourceError(Phase::eval, span, message);
}

Value normalize(Element e) {
  if (e.is_set()) return e.set();
  return e;
}

}  // namespace

std::string_view type_name(const Value& value) {
  return std::visit(Overloaded{
                        [](const QSet&) { return "qset"; },
                        [](const Element& e) { return e.is_pair() ? "pair" : "atom"; },
                        [](const QuasiFunction&) { return "quasi-function"; },
                        [](const Fragment&) { return "fragment"; },
                        [](bool) { return "boolean"; },
                        [](Count) { return "natural"; },
                        [](const Report&) { return "report"; },
                    },
                    value);
}

Session::Session(SessionOptions options) : options_(std::move(options)) {}

void Session::declare(const std::string& name, Binding binding, Span span) {
  if (find_op(name) != nullptr) type_error(span, "'" + name + "' is an operator name");
  auto it = env_.find(name);
  if (it != env_.end()) {
    bool both_values = std::holds_alternative<Value>(it->second) && std::holds_alternative<Value>(binding);
    if (!both_values) type_error(span, "'" + name + "' is already declared");
  }
  env_.insert_or_assign(name, std::move(binding));
}

const Session::Binding& Session::lookup(const Ident& ident, Span span) const {
  auto it = env_.find(ident.name);
  if (it == env_.end()) type_error(span, "unbound name '" + ident.name + "'");
  return it->second;
}

std::vector<StatementResult> Session::run(std::string_view source) {
  Program program = parse(source);
  std::vector<StatementResult> out;
  out.reserve(program.statements.size());
  for (const auto& stmt : program.statements) out.push_back(execute(stmt));
  return out;
}

Value Session::evaluate_source(std::string_view expression) {
  Program program = parse(expression);
  if (program.statements.size() != 1) {
    throw SourceError(Phase::parse, {0, expression.size()}, "expected exactly one expression");
  }
  return evaluate(program.statements.front());
}

StatementResult Session::execute(const Term& stmt) {
  using K = StatementResult::Kind;
  return std::visit(
      Overloaded{
          [&](const KindDecl& d) -> StatementResult {
            if (env_.contains(d.name)) type_error(stmt.span, "'" + d.name + "' is already declared");
            declare(d.name, vocab_.declare_kind(d.name), stmt.span);
            return {K::decl, stmt.span, d.name, std::nullopt, true};
          },
          [&](const CAtomDecl& d) -> StatementResult {
            if (env_.contains(d.name)) type_error(stmt.span, "'" + d.name + "' is already declared");
            declare(d.name, vocab_.declare_catom(d.name), stmt.span);
            return {K::decl, stmt.span, d.name, std::nullopt, true};
          },
          [&](const MAtomDecl& d) -> StatementResult {
            auto it = env_.find(d.kind);
            if (it == env_.end() || !std::holds_alternative<KindId>(it->second)) {
              type_error(d.kind_span, "'" + d.kind + "' is not a declared kind");
            }
            if (env_.contains(d.name)) type_error(stmt.span, "'" + d.name + "' is already declared");
            declare(d.name, MAtomAlias{std::get<KindId>(it->second), d.count}, stmt.span);
            return {K::decl, stmt.span, d.name, std::nullopt, true};
          },
          [&](const Let& l) -> StatementResult {
            Value v = evaluate(*l.value);
            declare(l.name, v, stmt.span);
            return {K::let, stmt.span, l.name, std::move(v), true};
          },
          [&](const Check& c) -> StatementResult {
            bool ok = false;
            if (c.rhs) {
              ok = equivalent(*c.lhs, *c.rhs, stmt.span);
            } else {
              Value v = evaluate(*c.lhs);
              if (!std::holds_alternative<bool>(v)) {
                type_error(c.lhs->span, "check expects a boolean, got " + std::string(type_name(v)));
              }
              ok = std::get<bool>(v);
            }
            ok ? ++passed_ : ++failed_;
            return {K::check, stmt.span, {}, Value(ok), ok};
          },
          [&](const auto&) -> StatementResult { return {K::expr, stmt.span, {}, evaluate(stmt), true}; },
      },
      stmt.node);
}

bool Session::equivalent(const Term& lhs, const Term& rhs, Span span) {
  for (const Term* side : {&lhs, &rhs}) {
    if (const auto* id = std::get_if<Ident>(&side->node)) {
      const Binding& b = lookup(*id, side->span);
      if (std::holds_alternative<MAtomAlias>(b) || std::holds_alternative<KindId>(b)) {
        type_error(side->span, "m-atom names cannot appear in equality assertions");
      }
    }
  }
  Value a = evaluate(lhs);
  Value b = evaluate(rhs);
  if (std::holds_alternative<Count>(a) && std::holds_alternative<Count>(b)) return std::get<Count>(a) == std::get<Count>(b);
  if (std::holds_alternative<bool>(a) && std::holds_alternative<bool>(b)) return std::get<bool>(a) == std::get<bool>(b);
  if (std::holds_alternative<QuasiFunction>(a) && std::holds_alternative<QuasiFunction>(b)) {
    return qfun_equiv(std::get<QuasiFunction>(a), std::get<QuasiFunction>(b));
  }
  auto as_element = [&](const Value& v) -> std::optional<Element> {
    if (const auto* s = std::get_if<QSet>(&v)) return Element(*s);
    if (const auto* e = std::get_if<Element>(&v)) return *e;
    return std::nullopt;
  };
  auto ea = as_element(a);
  auto eb = as_element(b);
  if (!ea || !eb) {
    type_error(span, "cannot compare " + std::string(type_name(a)) + " with " + std::string(type_name(b)));
  }
  return *ea == *eb;
}

Element Session::element_of(const Term& term, std::map<std::string, Count>* alias_uses) {
  if (const auto* id = std::get_if<Ident>(&term.node)) {
    const Binding& b = lookup(*id, term.span);
    if (const auto* kind = std::get_if<KindId>(&b)) return Element::matom(*kind);
    if (const auto* alias = std::get_if<MAtomAlias>(&b)) {
      if (alias_uses != nullptr) ++(*alias_uses)[id->name];
      return Element::matom(alias->kind);
    }
    if (const auto* c = std::get_if<CAtomId>(&b)) return Element::catom(*c);
  }
  Value v = evaluate(term);
  return std::visit(Overloaded{
                        [](const QSet& s) { return Element(s); },
                        [](const Element& e) { return e; },
                        [](const QuasiFunction& f) { return Element(encode_morphism(f)); },
                        [](const Fragment& f) { return Element(f.elements()); },
                        [&](const auto&) -> Element {
                          type_error(term.span, "a " + std::string(type_name(v)) + " cannot be an element");
                        },
                    },
                    v);
}

Value Session::evaluate(const Term& expr) {
  return std::visit(
      Overloaded{
          [&](const Ident& id) -> Value {
            const Binding& b = lookup(id, expr.span);
            if (const auto* v = std::get_if<Value>(&b)) return *v;
            return normalize(element_of(expr, nullptr));
          },
          [&](const IntLit& n) -> Value { return n.value; },
          [&](const QSetLit& lit) -> Value {
            QSetBuilder b;
            std::map<std::string, Count> uses;
            for (const auto& elem : lit.elems) {
              std::map<std::string, Count> local;
              Element e = element_of(*elem.term, &local);
              for (const auto& [name, n] : local) uses[name] += n * elem.count;
              b.add(e, elem.count);
            }
            for (const auto& [name, n] : uses) {
              const auto& alias = std::get<MAtomAlias>(env_.at(name));
              if (n > alias.supply) {
                type_error(expr.span, "literal uses " + std::to_string(n) + " m-atoms of '" + name + "' but only " +
                                          std::to_string(alias.supply) + " are declared");
              }
            }
            return b.build();
          },
          [&](const PairLit& p) -> Value { return Element::pair(element_of(*p.first, nullptr), element_of(*p.second, nullptr)); },
          [&](const App& app) -> Value {
            try {
              return apply(app, expr.span);
            } catch (const Error& err) {
              throw SourceError(Phase::eval, expr.span, err.what(), {}, err.code());
            }
          },
          [&](const auto&) -> Value { type_error(expr.span, "statement used where an expression is expected"); },
      },
      expr.node);
}

Value Session::apply(const App& app, Span span) {
  const auto& args = app.args;
  auto qset_arg = [&](std::size_t i) -> QSet {
    Value v = evaluate(args[i]);
    if (auto* s = std::get_if<QSet>(&v)) return std::move(*s);
    if (auto* f = std::get_if<Fragment>(&v)) return f->elements();
    type_error(args[i].span, app.op + " expects a qset, got " + std::string(type_name(v)));
  };
  auto element_arg = [&](std::size_t i) { return element_of(args[i], nullptr); };
  auto qfun_arg = [&](std::size_t i) -> QuasiFunction {
    Value v = evaluate(args[i]);
    if (auto* f = std::get_if<QuasiFunction>(&v)) return std::move(*f);
    type_error(args[i].span, app.op + " expects a quasi-function, got " + std::string(type_name(v)));
  };
  auto pairs_of = [&](const QSet& s, Span where) {
    std::vector<std::pair<Element, Element>> out;
    for (const auto& e : s.entries()) {
      if (!e.element.is_pair()) type_error(where, app.op + " expects a qset of pairs <a, b>");
      out.emplace_back(e.element.first(), e.element.second());
    }
    return out;
  };
  const Limits& limits = options_.limits.algebra;
  const std::string& op = app.op;

  if (op == "indist") return element_arg(0) == element_arg(1);
  if (op == "qc") return qset_arg(0).qcard();
  if (op == "classical") return qset_arg(0).classical();
  if (op == "mem") {
    Element e = element_arg(0);
    return mem_count(e, qset_arg(1));
  }
  if (op == "pow") return power(qset_arg(0), limits);
  if (op == "sing") {
    Element x = element_arg(0);
    return singleton_in(x, qset_arg(1));
  }
  if (op == "pair" || op == "opair") {
    Element x = element_arg(0);
    Element y = element_arg(1);
    QSet u = qset_arg(2);
    return op == "pair" ? pair_in(x, y, u) : opair_in(x, y, u);
  }
  if (op == "prod") {
    QSet x = qset_arg(0);
    return product(x, qset_arg(1), limits);
  }
  if (op == "union") {
    QSet x = qset_arg(0);
    return union_of(x, qset_arg(1));
  }
  if (op == "bigunion") {
    QSet index = qset_arg(0);
    std::vector<std::pair<Element, QSet>> entries;
    for (auto& [key, member] : pairs_of(qset_arg(1), args[1].span)) {
      if (!member.is_set()) type_error(args[1].span, "bigunion family members must be qsets");
      entries.emplace_back(key, member.set());
    }
    return family_union(IndexedFamily(std::move(index), std::move(entries)));
  }
  if (op == "qfun") {
    QSet dom = qset_arg(0);
    QSet cod = qset_arg(1);
    return QuasiFunction(QuasiRelation(std::move(dom), std::move(cod), pairs_of(qset_arg(2), args[2].span)));
  }
  if (op == "idq") return identity(qset_arg(0));
  if (op == "comp") {
    QuasiFunction g = qfun_arg(0);
    return compose(g, qfun_arg(1));
  }
  if (op == "qequiv") return equivalent(args[0], args[1], span);
  if (op == "build") {
    QSet seeds = qset_arg(0);
    std::size_t depth = options_.default_depth;
    if (args.size() == 2) {
      Value d = evaluate(args[1]);
      if (!std::holds_alternative<Count>(d)) type_error(args[1].span, "build depth must be a natural number");
      depth = static_cast<std::size_t>(std::get<Count>(d));
    }
    return build_fragment(seeds, depth, options_.limits);
  }
  if (op == "audit") {
    Value v = evaluate(args[0]);
    nlohmann::ordered_json data;
    ClosureReport report;
    if (const auto* f = std::get_if<Fragment>(&v)) {
      data = to_json(*f, vocab_);
      report = check_qed(*f, options_.audit);
    } else if (const auto* s = std::get_if<QSet>(&v)) {
      report = check_qed(*s, options_.audit);
    } else {
      type_error(args[0].span, "audit expects a fragment or qset, got " + std::string(type_name(v)));
    }
    nlohmann::ordered_json body = to_json(report, vocab_);
    for (auto& [key, value] : body.items()) data[key] = value;
    std::string summary = "audit: " + std::to_string(report.cond1.size()) + "/" + std::to_string(report.cond2.size()) +
                          "/" + std::to_string(report.cond3.size()) + "/" + std::to_string(report.cond4.size()) +
                          " defects in conditions 1-4, " + std::to_string(report.theorem1.size()) +
                          " derived (" + std::to_string(report.unexplained_theorem1()) + " unexplained)";
    return Report{"audit", std::move(data), std::move(summary)};
  }
  if (op == "classify") {
    QSet x = qset_arg(0);
    Classification c = classify(x, qset_arg(1));
    nlohmann::ordered_json data;
    data["verdict"] = std::string(to_string(c.verdict));
    data["member"] = c.member;
    data["subclass"] = c.subclass;
    return Report{"classification", std::move(data), std::string(to_string(c.verdict))};
  }
  if (op == "small") {
    QSet objects = qset_arg(0);
    QSet morphisms = qset_arg(1);
    QSet u = qset_arg(2);
    return is_small_category(CategoryPresentation::make(std::move(objects), std::move(morphisms)), u);
  }
  type_error(app.op_span, "operator '" + op + "' is not implemented");
}

std::string Session::render(const Value& value) const {
  return std::visit(Overloaded{
                        [&](const QSet& s) { return qset::render(s, vocab_); },
                        [&](const Element& e) { return qset::render(e, vocab_); },
                        [&](const QuasiFunction& f) { return qset::render(f, vocab_); },
                        [&](const Fragment& f) {
                          return "fragment(depth " + std::to_string(f.depth()) + ", " +
                                 std::to_string(f.elements().distinct()) + " elements, " +
                                 std::to_string(f.cutoffs()) + " cutoffs): " + qset::render(f.elements(), vocab_);
                        },
                        [](bool b) { return std::string(b ? "true" : "false"); },
                        [](Count n) { return std::to_string(n); },
                        [](const Report& r) { return r.summary; },
                    },
                    value);
}

}  // namespace qset::lang
