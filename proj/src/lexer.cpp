#include "qset/lexer.hpp"

#include <algorithm>
#include <array>

namespace qset::lang {

namespace {

constexpr std::array<std::string_view, 5> kKeywords = {"kind", "matoms", "catom", "let", "check"};
constexpr std::string_view kPunct = "{}(),^:;=<>";

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

}  // namespace

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = source.size();
  while (i < n) {
    char c = source[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
    } else if (c == '#') {
      while (i < n && source[i] != '\n') ++i;
    } else if (ident_start(c)) {
      std::size_t start = i;
      while (i < n && ident_char(source[i])) ++i;
      std::string word(source.substr(start, i - start));
      TokenKind kind = is_keyword(word) ? TokenKind::keyword : TokenKind::ident;
      out.push_back(Token{kind, std::move(word), {start, i}});
    } else if (digit(c)) {
      std::size_t start = i;
      while (i < n && digit(source[i])) ++i;
      if (i < n && ident_start(source[i])) {
        throw SourceError(Phase::lex, {i, i + 1}, "malformed integer literal");
      }
      out.push_back(Token{TokenKind::integer, std::string(source.substr(start, i - start)), {start, i}});
    } else if (c == '"') {
      std::size_t start = i++;
      std::string text;
      while (true) {
        if (i >= n || source[i] == '\n') throw SourceError(Phase::lex, {start, i}, "unterminated string literal");
        if (source[i] == '"') break;
        if (source[i] == '\\' && i + 1 < n && (source[i + 1] == '"' || source[i + 1] == '\\')) ++i;
        text += source[i++];
      }
      ++i;
      out.push_back(Token{TokenKind::string, std::move(text), {start, i}});
    } else if (kPunct.find(c) != std::string_view::npos) {
      out.push_back(Token{TokenKind::punct, std::string(1, c), {i, i + 1}});
      ++i;
    } else {
      std::size_t len = std::min(utf8_length(static_cast<unsigned char>(c)), n - i);
      throw SourceError(Phase::lex, {i, i + len}, "illegal character '" + std::string(source.substr(i, len)) + "'");
    }
  }
  return out;
}

std::string format_diagnostic(const SourceError& err, std::string_view source, std::string_view path) {
  std::size_t at = std::min(err.span().begin, source.size());
  std::size_t line_start = source.substr(0, at).rfind('\n');
  line_start = line_start == std::string_view::npos ? 0 : line_start + 1;
  std::size_t line_end = source.find('\n', at);
  if (line_end == std::string_view::npos) line_end = source.size();
  std::size_t line_no = 1 + static_cast<std::size_t>(std::count(source.begin(), source.begin() + line_start, '\n'));
  std::size_t col = at - line_start + 1;

  const char* phase = err.phase() == Phase::lex ? "lex" : err.phase() == Phase::parse ? "parse" : "runtime";
  std::string out = std::string(path) + ":" + std::to_string(line_no) + ":" + std::to_string(col) + ": " + phase +
                    " error: " + err.what();
  if (!err.expected().empty()) {
    out += " (expected ";
    for (std::size_t i = 0; i < err.expected().size(); ++i) {
      if (i > 0) out += i + 1 == err.expected().size() ? " or " : ", ";
      out += err.expected()[i];
    }
    out += ")";
  }
  out += "\n  ";
  out += source.substr(line_start, line_end - line_start);
  out += "\n  ";
  out += std::string(col - 1, ' ');
  std::size_t width = std::max<std::size_t>(1, std::min(err.span().end, line_end) - std::min(at, line_end));
  out += "^" + std::string(width - 1, '~');
  out += "\n";
  return out;
}

}  // namespace qset::lang
