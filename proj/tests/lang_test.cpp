#include <gtest/gtest.h>

#include "qset/evaluator.hpp"
#include "qset/lexer.hpp"
#include "qset/parser.hpp"

namespace qset::lang {
namespace {

SourceError error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const SourceError& e) {
    return e;
  }
  ADD_FAILURE() << "no SourceError thrown";
  return SourceError(Phase::eval, {}, "");
}

std::string rendered(Session& s, std::string_view expr) { return s.render(s.evaluate_source(expr)); }

TEST(Tokenize, Application) {
  auto t = tokenize("qc(x)");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].kind, TokenKind::ident);
  EXPECT_EQ(t[0].text, "qc");
  EXPECT_EQ(t[1].kind, TokenKind::punct);
  EXPECT_EQ(t[1].text, "(");
  EXPECT_EQ(t[2].text, "x");
  EXPECT_EQ(t[3].text, ")");
  EXPECT_EQ(t[2].span, (Span{3, 4}));
}

TEST(Tokenize, LiteralWithCount) {
  auto t = tokenize("{a, a, b^2}");
  ASSERT_EQ(t.size(), 9u);
  EXPECT_EQ(t[7].kind, TokenKind::integer);
  EXPECT_EQ(t[7].text, "2");
}

TEST(Tokenize, IllegalCharacterPointsAtTheByte) {
  SourceError e = error_of([] { tokenize("qc(\xce\xbb)"); });
  EXPECT_EQ(e.phase(), Phase::lex);
  EXPECT_EQ(e.span(), (Span{3, 5}));
}

TEST(Tokenize, CommentsAndKeywords) {
  auto t = tokenize("kind K # a kind\ncheck x");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].kind, TokenKind::keyword);
  EXPECT_EQ(t[2].kind, TokenKind::keyword);
  EXPECT_EQ(t[3].span, (Span{22, 23}));
}

TEST(Tokenize, Strings) {
  auto t = tokenize(R"("a \"b\"")");
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].kind, TokenKind::string);
  EXPECT_EQ(t[0].text, "a \"b\"");
  EXPECT_EQ(error_of([] { tokenize("\"open"); }).phase(), Phase::lex);
}

TEST(Parse, PowApplication) {
  Program p = parse("kind K; matoms m: K^2\npow({m^2})");
  ASSERT_EQ(p.statements.size(), 3u);
  const auto* decl = std::get_if<MAtomDecl>(&p.statements[1].node);
  ASSERT_NE(decl, nullptr);
  EXPECT_EQ(decl->count, 2u);
  const auto* app = std::get_if<App>(&p.statements[2].node);
  ASSERT_NE(app, nullptr);
  EXPECT_EQ(app->op, "pow");
  ASSERT_EQ(app->args.size(), 1u);
  const auto* lit = std::get_if<QSetLit>(&app->args[0].node);
  ASSERT_NE(lit, nullptr);
  ASSERT_EQ(lit->elems.size(), 1u);
  EXPECT_EQ(lit->elems[0].count, 2u);
  EXPECT_EQ(std::get<Ident>(lit->elems[0].term->node).name, "m");
}

TEST(Parse, CheckNode) {
  Program p = parse("check qequiv(comp(idq(B), f), f)");
  ASSERT_EQ(p.statements.size(), 1u);
  const auto* c = std::get_if<Check>(&p.statements[0].node);
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->rhs, nullptr);
  EXPECT_EQ(std::get<App>(c->lhs->node).op, "qequiv");
}

TEST(Parse, UnterminatedLiteral) {
  SourceError e = error_of([] { parse("pow({"); });
  EXPECT_EQ(e.phase(), Phase::parse);
  EXPECT_EQ(e.expected(), (std::vector<std::string>{"element", "'}'"}));
  EXPECT_EQ(e.span(), (Span{5, 5}));
}

TEST(Parse, ArityIsChecked) {
  SourceError e = error_of([] { parse("pow({}, {})"); });
  EXPECT_EQ(e.span(), (Span{0, 11}));
  EXPECT_NE(std::string(e.what()).find("pow expects 1"), std::string::npos);
  EXPECT_EQ(error_of([] { parse("frob(x)"); }).span(), (Span{0, 4}));
}

TEST(Parse, ErrorSpansStayInsideTheSource) {
  for (std::string src : {"{", "let = 3", "matoms m K^2", "check", "<a b>", "qc(x", "{a^}", "{a,,b}", "kind 3"}) {
    SourceError e = error_of([&] { parse(src); });
    EXPECT_LE(e.span().end, src.size()) << src;
    EXPECT_LE(e.span().begin, e.span().end) << src;
  }
}

TEST(Diagnostic, PointsAtTheToken) {
  std::string src = "kind K\nlet x = {K,, K}\n";
  SourceError e = error_of([&] { parse(src); });
  std::string d = format_diagnostic(e, src, "t.qst");
  EXPECT_EQ(d, "t.qst:2:12: parse error: unexpected ',' (expected element or '}')\n  let x = {K,, K}\n             ^\n");
}

TEST(Evaluate, QCardAndPower) {
  Session s;
  s.run("kind K; matoms m: K^2");
  EXPECT_EQ(std::get<Count>(s.evaluate_source("qc({m^2})")), 2u);
  EXPECT_EQ(std::get<Count>(s.evaluate_source("qc(pow({m^2}))")), 4u);
  EXPECT_EQ(rendered(s, "pow({m^2})"), "{{K^2}, {K}^2, {}}");
}

TEST(Evaluate, SingletonOutsideTheUniverse) {
  Session s;
  std::string src = "kind K; kind J; matoms m: K^1; matoms n: J^3\nsing(m, {n^3})";
  SourceError e = error_of([&] { s.run(src); });
  EXPECT_EQ(e.phase(), Phase::eval);
  ASSERT_TRUE(e.code().has_value());
  EXPECT_EQ(*e.code(), Errc::not_in_universe);
  EXPECT_EQ(src.substr(e.span().begin, e.span().end - e.span().begin), "sing(m, {n^3})");
}

TEST(Evaluate, TypeErrors) {
  Session s;
  s.run("kind K; catom A");
  EXPECT_EQ(error_of([&] { s.evaluate_source("sing(classical({}), {A})"); }).phase(), Phase::eval);
  EXPECT_EQ(error_of([&] { s.evaluate_source("qc(A)"); }).span(), (Span{3, 4}));
  EXPECT_EQ(error_of([&] { s.evaluate_source("qc(y)"); }).span(), (Span{3, 4}));
}

TEST(Evaluate, MAtomSupplyPerLiteral) {
  Session s;
  s.run("kind K; matoms m: K^2");
  EXPECT_NO_THROW(s.evaluate_source("{m, m}"));
  EXPECT_NO_THROW(s.evaluate_source("{{m^2}, m^2}"));
  SourceError e = error_of([&] { s.evaluate_source("{m^3}"); });
  EXPECT_NE(std::string(e.what()).find("only 2"), std::string::npos);
  EXPECT_THROW(s.evaluate_source("{m, m^2}"), SourceError);
}

TEST(Evaluate, MAtomNamesCannotBeCompared) {
  Session s;
  s.run("kind K; matoms m: K^2; matoms n: K^1");
  EXPECT_THROW(s.run("check m = n"), SourceError);
  EXPECT_THROW(s.run("check K = {}"), SourceError);
  EXPECT_NO_THROW(s.run("check indist(m, n)"));
  EXPECT_EQ(s.checks_passed(), 1u);
}

TEST(Evaluate, ChecksAreTallied) {
  Session s;
  auto results = s.run("kind K\ncheck qc({K^2}) = 2\ncheck classical({K})\ncheck {K, K} = {K^2}");
  ASSERT_EQ(results.size(), 4u);
  EXPECT_TRUE(results[1].passed);
  EXPECT_FALSE(results[2].passed);
  EXPECT_TRUE(results[3].passed);
  EXPECT_EQ(s.checks_passed(), 2u);
  EXPECT_EQ(s.checks_failed(), 1u);
  EXPECT_THROW(s.run("check qc({})"), SourceError);
}

TEST(Evaluate, AllOperators) {
  Session s;
  s.run(R"(
    kind K; kind J; catom A; catom B
    let U = {K^2, J, A, B}
    let f = qfun({K^2}, {J}, {<K, J>})
    let g = qfun({J}, {A}, {<J, A>})
  )");
  EXPECT_EQ(rendered(s, "indist(K, K)"), "true");
  EXPECT_EQ(rendered(s, "mem(K, U)"), "2");
  EXPECT_EQ(rendered(s, "sing(K, U)"), "{K^2}");
  EXPECT_EQ(rendered(s, "pair(K, A, U)"), "{K^2, A}");
  EXPECT_EQ(rendered(s, "opair(A, B, {A, B})"), "{{A, B}, {A}}");
  EXPECT_EQ(rendered(s, "prod({K^2}, {A})"), "{<K, A>^2}");
  EXPECT_EQ(rendered(s, "union({K^2}, {K, A})"), "{K^2, A}");
  EXPECT_EQ(rendered(s, "bigunion({A, B}, {<A, {K}>, <B, {J}>})"), "{K, J}");
  EXPECT_EQ(rendered(s, "comp(g, f)"), "qfun({K^2}, {A}, {<K, A>})");
  EXPECT_EQ(rendered(s, "qequiv(comp(idq({J}), f), f)"), "true");
  EXPECT_EQ(rendered(s, "classify({K}, U)"), "UProperQclass");
  EXPECT_EQ(rendered(s, "small({{K^2}}, {idq({K^2})}, {{K^2}, {{K^2}}, {idq({K^2})}})"), "true");
  EXPECT_EQ(rendered(s, "small({{K^2}}, {idq({K^2})}, {{K^2}, {{K^2}}})"), "false");
  Value frag = s.evaluate_source("build({A}, 1)");
  ASSERT_TRUE(std::holds_alternative<Fragment>(frag));
  Value report = s.evaluate_source("audit(build({A}, 1))");
  ASSERT_TRUE(std::holds_alternative<Report>(report));
  EXPECT_EQ(std::get<Report>(report).kind, "audit");
  EXPECT_TRUE(std::get<Report>(report).data.contains("defects"));
}

TEST(Evaluate, OpErrorsCarryCodes) {
  Session s;
  s.run("kind K; catom A");
  SourceError e = error_of([&] { s.evaluate_source("comp(idq({A}), idq({K}))"); });
  EXPECT_EQ(*e.code(), Errc::not_composable);
  EXPECT_EQ(*error_of([&] { s.evaluate_source("bigunion({K}, {<K, {}>})"); }).code(), Errc::non_classical_index);
  EXPECT_EQ(*error_of([&] { s.evaluate_source("qfun({K}, {A}, {})"); }).code(), Errc::not_a_quasi_function);
}

TEST(Evaluate, CapsComeFromTheSession) {
  SessionOptions options;
  options.limits.algebra.power_operand = 2;
  Session s(options);
  s.run("kind K");
  EXPECT_EQ(*error_of([&] { s.evaluate_source("pow({K^3})"); }).code(), Errc::cap_exceeded);
}

TEST(Evaluate, RedeclarationIsRejected) {
  Session s;
  s.run("kind K; let x = {}");
  EXPECT_THROW(s.run("kind K"), SourceError);
  EXPECT_THROW(s.run("catom x"), SourceError);
  EXPECT_THROW(s.run("let pow = {}"), SourceError);
  EXPECT_NO_THROW(s.run("let x = {K}"));
}

TEST(Render, ValuesWithDeclarations) {
  Session s;
  s.run("kind K; catom A1");
  EXPECT_EQ(rendered(s, "{K^2, A1}"), "{K^2, A1}");
  EXPECT_EQ(rendered(s, "{}"), "{}");
  EXPECT_EQ(rendered(s, "<K, {A1}>"), "<K, {A1}>");
}

TEST(Evaluate, IsDeterministic) {
  std::string src = "kind K; catom A\nlet U = build({K^2, A}, 1)\naudit(U)\npow({K^2, {A}})";
  auto run = [&] {
    Session s;
    std::string out;
    for (const auto& r : s.run(src)) {
      if (r.value) out += s.render(*r.value) + "\n";
    }
    return out;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace qset::lang
