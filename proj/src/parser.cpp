#include "qset/parser.hpp"

#include <array>
#include <charconv>

namespace qset::lang {

namespace {

constexpr std::array<OpSignature, 19> kOps = {{
    {"indist", 2, 2},  {"qc", 1, 1},    {"classical", 1, 1}, {"mem", 2, 2},   {"pow", 1, 1},
    {"sing", 2, 2},    {"pair", 3, 3},  {"opair", 3, 3},     {"prod", 2, 2},  {"union", 2, 2},
    {"bigunion", 2, 2}, {"qfun", 3, 3}, {"idq", 1, 1},       {"comp", 2, 2},  {"qequiv", 2, 2},
    {"build", 1, 2},   {"audit", 1, 1}, {"classify", 2, 2},  {"small", 3, 3},
}};

class Parser {
 public:
  Parser(std::span<const Token> tokens, std::size_t source_size) : tokens_(tokens), eof_(source_size) {}

  Program program() {
    Program out;
    while (!at_end()) {
      if (peek_punct(";")) {
        ++pos_;
        continue;
      }
      out.statements.push_back(statement());
    }
    return out;
  }

 private:
  bool at_end() const { return pos_ >= tokens_.size(); }
  const Token* peek() const { return at_end() ? nullptr : &tokens_[pos_]; }
  Span here() const {
    if (!at_end()) return tokens_[pos_].span;
    std::size_t end = tokens_.empty() ? eof_ : tokens_.back().span.end;
    return {end, end};
  }

  bool peek_punct(std::string_view p) const {
    return !at_end() && tokens_[pos_].kind == TokenKind::punct && tokens_[pos_].text == p;
  }

  [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected) const {
    std::string found = at_end() ? "end of input" : "'" + tokens_[pos_].text + "'";
    throw SourceError(Phase::parse, here(), message.empty() ? "unexpected " + found : message, std::move(expected));
  }

  const Token& expect_punct(std::string_view p) {
    if (!peek_punct(p)) fail("", {"'" + std::string(p) + "'"});
    return tokens_[pos_++];
  }

  const Token& expect_ident(const char* what = "identifier") {
    if (at_end() || tokens_[pos_].kind != TokenKind::ident) fail("", {what});
    return tokens_[pos_++];
  }

  Count expect_count() {
    if (at_end() || tokens_[pos_].kind != TokenKind::integer) fail("", {"integer"});
    const Token& t = tokens_[pos_];
    Count value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      throw SourceError(Phase::parse, t.span, "integer literal out of range");
    }
    ++pos_;
    return value;
  }

  Term statement() {
    const Token& t = *peek();
    if (t.kind == TokenKind::keyword) {
      std::size_t start = t.span.begin;
      ++pos_;
      if (t.text == "kind") {
        const Token& name = expect_ident();
        return Term{{start, name.span.end}, KindDecl{name.text}};
      }
      if (t.text == "catom") {
        const Token& name = expect_ident();
        return Term{{start, name.span.end}, CAtomDecl{name.text}};
      }
      if (t.text == "matoms") {
        const Token& name = expect_ident();
        expect_punct(":");
        const Token& kind = expect_ident("kind name");
        expect_punct("^");
        Span count_span = here();
        Count count = expect_count();
        if (count == 0) throw SourceError(Phase::parse, count_span, "m-atom supply must be positive");
        return Term{{start, count_span.end}, MAtomDecl{name.text, kind.text, count, kind.span}};
      }
      if (t.text == "let") {
        const Token& name = expect_ident();
        expect_punct("=");
        auto value = std::make_unique<Term>(expression());
        Span span{start, value->span.end};
        return Term{span, Let{name.text, std::move(value)}};
      }
      // check
      auto lhs = std::make_unique<Term>(expression());
      Span span{start, lhs->span.end};
      TermPtr rhs;
      if (peek_punct("=")) {
        ++pos_;
        rhs = std::make_unique<Term>(expression());
        span.end = rhs->span.end;
      }
      return Term{span, Check{std::move(lhs), std::move(rhs)}};
    }
    return expression();
  }

  Term expression() {
    static const std::vector<std::string> kExprStart = {"identifier", "integer", "'{'", "'<'"};
    if (at_end()) fail("", kExprStart);
    const Token& t = tokens_[pos_];
    switch (t.kind) {
      case TokenKind::ident: {
        ++pos_;
        if (!peek_punct("(")) return Term{t.span, Ident{t.text}};
        return application(t);
      }
      case TokenKind::integer: {
        Span span = t.span;
        Count value = expect_count();
        return Term{span, IntLit{value}};
      }
      case TokenKind::punct:
        if (t.text == "{") return qset_literal();
        if (t.text == "<") return pair_literal();
        break;
      default: break;
    }
    fail("", kExprStart);
  }

  Term application(const Token& name) {
    const OpSignature* sig = find_op(name.text);
    if (sig == nullptr) throw SourceError(Phase::parse, name.span, "unknown operator '" + name.text + "'");
    expect_punct("(");
    App app{name.text, name.span, {}};
    if (!peek_punct(")")) {
      app.args.push_back(expression());
      while (peek_punct(",")) {
        ++pos_;
        app.args.push_back(expression());
      }
    }
    if (!peek_punct(")")) fail("", {"','", "')'"});
    Span span{name.span.begin, tokens_[pos_++].span.end};
    if (app.args.size() < sig->min_args || app.args.size() > sig->max_args) {
      std::string want = std::to_string(sig->min_args);
      if (sig->max_args != sig->min_args) want += " or " + std::to_string(sig->max_args);
      throw SourceError(Phase::parse, span,
                        name.text + " expects " + want + " argument(s), got " + std::to_string(app.args.size()));
    }
    return Term{span, std::move(app)};
  }

  Term qset_literal() {
    std::size_t start = expect_punct("{").span.begin;
    QSetLit lit;
    if (!peek_punct("}")) {
      while (true) {
        if (at_end() || peek_punct("}") || peek_punct(",")) fail("", {"element", "'}'"});
        lit.elems.push_back(element());
        if (peek_punct(",")) {
          ++pos_;
          continue;
        }
        if (peek_punct("}")) break;
        fail("", {"','", "'}'"});
      }
    }
    std::size_t end = expect_punct("}").span.end;
    return Term{{start, end}, std::move(lit)};
  }

  QSetElem element() {
    auto term = std::make_unique<Term>(expression());
    Span span = term->span;
    Count count = 1;
    if (peek_punct("^")) {
      ++pos_;
      Span count_span = here();
      count = expect_count();
      if (count == 0) throw SourceError(Phase::parse, count_span, "element multiplicity must be positive");
      span.end = count_span.end;
    }
    return QSetElem{std::move(term), count, span};
  }

  Term pair_literal() {
    std::size_t start = expect_punct("<").span.begin;
    auto first = std::make_unique<Term>(expression());
    expect_punct(",");
    auto second = std::make_unique<Term>(expression());
    std::size_t end = expect_punct(">").span.end;
    return Term{{start, end}, PairLit{std::move(first), std::move(second)}};
  }

  std::span<const Token> tokens_;
  std::size_t eof_;
  std::size_t pos_ = 0;
};

}  // namespace

const OpSignature* find_op(std::string_view name) {
  for (const auto& op : kOps) {
    if (op.name == name) return &op;
  }
  return nullptr;
}

std::span<const OpSignature> operators() { return kOps; }

Program parse(std::span<const Token> tokens, std::size_t source_size) {
  return Parser(tokens, source_size).program();
}

Program parse(std::string_view source) {
  auto tokens = tokenize(source);
  return parse(tokens, source.size());
}

}  // namespace qset::lang
