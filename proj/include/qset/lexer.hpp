#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qset/error.hpp"

namespace qset::lang {

/// Half-open byte range [begin, end) into the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class TokenKind { ident, integer, keyword, punct, string };

struct Token {
  TokenKind kind;
  std::string text;  // for strings: the unescaped contents
  Span span;
};

enum class Phase { lex, parse, eval };

/// A diagnostic tied to a source location.
class SourceError : public std::runtime_error {
 public:
  SourceError(Phase phase, Span span, const std::string& message, std::vector<std::string> expected = {},
              std::optional<Errc> code = std::nullopt)
      : std::runtime_error(message), phase_(phase), span_(span), expected_(std::move(expected)), code_(code) {}

  Phase phase() const { return phase_; }
  Span span() const { return span_; }
  const std::vector<std::string>& expected() const { return expected_; }
  std::optional<Errc> code() const { return code_; }

 private:
  Phase phase_;
  Span span_;
  std::vector<std::string> expected_;
  std::optional<Errc> code_;
};

/// Splits source into tokens; whitespace and `#` comments are dropped.
/// Throws SourceError(Phase::lex) at the first illegal byte.
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

/// "path:line:col: parse error: message" followed by the source line and a
/// caret marker under the span.
std::string format_diagnostic(const SourceError& err, std::string_view source, std::string_view path);

}  // namespace qset::lang
