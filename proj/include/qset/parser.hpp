#pragma once

// Script grammar (`#` comments, optional `;` between statements):
//
//   program := stmt*
//   stmt    := "kind" IDENT | "matoms" IDENT ":" IDENT "^" INT | "catom" IDENT
//            | "let" IDENT "=" expr | "check" expr ("=" expr)? | expr
//   expr    := IDENT | IDENT "(" args ")" | INT | qsetlit | "<" expr "," expr ">"
//   qsetlit := "{" (elem ("," elem)*)? "}"
//   elem    := expr ("^" INT)?

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qset/kernel.hpp"
#include "qset/lexer.hpp"

namespace qset::lang {

struct Term;
using TermPtr = std::unique_ptr<Term>;

struct KindDecl {
  std::string name;
};
struct MAtomDecl {
  std::string name;
  std::string kind;
  Count count;
  Span kind_span;
};
struct CAtomDecl {
  std::string name;
};
struct Ident {
  std::string name;
};
struct IntLit {
  Count value;
};
struct QSetElem {
  TermPtr term;
  Count count = 1;
  Span span;
};
struct QSetLit {
  std::vector<QSetElem> elems;
};
struct PairLit {
  TermPtr first;
  TermPtr second;
};
struct App {
  std::string op;
  Span op_span;
  std::vector<Term> args;
};
struct Let {
  std::string name;
  TermPtr value;
};
struct Check {
  TermPtr lhs;
  TermPtr rhs;  // null for a plain boolean check
};

struct Term {
  Span span;
  std::variant<KindDecl, MAtomDecl, CAtomDecl, Ident, IntLit, QSetLit, PairLit, App, Let, Check> node;
};

struct Program {
  std::vector<Term> statements;
};

struct OpSignature {
  std::string_view name;
  std::size_t min_args;
  std::size_t max_args;
};

/// Operator table; nullptr for an unknown name.
const OpSignature* find_op(std::string_view name);
std::span<const OpSignature> operators();

/// Throws SourceError(Phase::parse) with the offending span and the set of
/// acceptable continuations.
Program parse(std::span<const Token> tokens, std::size_t source_size);
Program parse(std::string_view source);

}  // namespace qset::lang
