#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "groupeq/error.hpp"

namespace groupeq {

/// One letter of a fully expanded word: a variable or a coefficient symbol, with sign +-1.
struct Letter {
  enum class Kind { Var, Coeff };
  Kind kind = Kind::Var;
  std::size_t id = 0;
  int sign = 1;

  static Letter var(std::size_t id, int sign = 1) { return {Kind::Var, id, sign}; }
  static Letter coeff(std::size_t id, int sign = 1) { return {Kind::Coeff, id, sign}; }
  Letter inverse() const { return {kind, id, -sign}; }
  bool is_var() const { return kind == Kind::Var; }

  friend bool operator==(const Letter&, const Letter&) = default;
};

using Word = std::vector<Letter>;

inline Word inverse(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
  return out;
}

inline Word concat(Word a, const Word& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// u^-1 t u.
inline Word conjugate(const Word& t, const Word& u) { return concat(concat(inverse(u), t), u); }

/// [u,v] = u^-1 v^-1 u v.
inline Word commutator(const Word& u, const Word& v) {
  return concat(concat(concat(inverse(u), inverse(v)), u), v);
}

inline Word power(const Word& w, long long k) {
  Word base = k < 0 ? inverse(w) : w;
  Word out;
  for (long long i = 0; i < (k < 0 ? -k : k); ++i) out.insert(out.end(), base.begin(), base.end());
  return out;
}

/// Symbol tables a word is parsed against.
struct Alphabet {
  std::vector<std::string> variables;
  std::vector<std::string> coefficients;
};

inline constexpr std::size_t kMaxWordLength = 1'000'000;

/// Recursive-descent parser for the word grammar:
///
///     word     := factor*
///     factor   := primary ('^' exponent)*
///     exponent := ['-'] integer          power
///               | '(' word ')' | ident   conjugation t^u = u^-1 t u
///     primary  := ident | '1' | '(' word ')' | '[' word ',' word ']'
///
/// Juxtaposition is the product; `[u,v]` is u^-1 v^-1 u v.
class WordParser {
 public:
  WordParser(std::string_view text, const Alphabet& alphabet, std::size_t line = 0, std::size_t column_offset = 0)
      : text_(text), alphabet_(alphabet), line_(line), offset_(column_offset) {}

  Word parse() {
    Word w = word();
    skip();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, offset_ + pos_ + 1); }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool at_primary() {
    skip();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == '(' || c == '[' || c == '1' || std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  Word word() {
    Word w;
    while (at_primary()) {
      Word f = factor();
      w.insert(w.end(), f.begin(), f.end());
      check_length(w);
    }
    return w;
  }

  void check_length(const Word& w) const {
    if (w.size() > kMaxWordLength) fail("expanded word exceeds " + std::to_string(kMaxWordLength) + " letters");
  }

  Word factor() {
    Word base = primary();
    while (peek('^')) {
      ++pos_;
      skip();
      if (pos_ < text_.size() && (text_[pos_] == '-' || std::isdigit(static_cast<unsigned char>(text_[pos_])))) {
        long long k = integer();
        if (static_cast<double>(base.size()) * static_cast<double>(k < 0 ? -k : k) > kMaxWordLength)
          fail("expanded word exceeds " + std::to_string(kMaxWordLength) + " letters");
        base = power(base, k);
      } else if (peek('(')) {
        ++pos_;
        Word u = word();
        expect(')');
        base = conjugate(base, u);
      } else if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        base = conjugate(base, identifier());
      } else {
        fail("expected an integer, identifier or '(' after '^'");
      }
      check_length(base);
    }
    return base;
  }

  long long integer() {
    bool neg = false;
    if (text_[pos_] == '-') {
      neg = true;
      ++pos_;
    }
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("expected digits");
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > static_cast<long long>(kMaxWordLength)) fail("exponent too large");
      ++pos_;
    }
    return neg ? -v : v;
  }

  Word identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    for (std::size_t i = 0; i < alphabet_.variables.size(); ++i)
      if (alphabet_.variables[i] == name) return {Letter::var(i)};
    for (std::size_t i = 0; i < alphabet_.coefficients.size(); ++i)
      if (alphabet_.coefficients[i] == name) return {Letter::coeff(i)};
    pos_ = start;
    fail("undeclared identifier '" + name + "'");
  }

  Word primary() {
    skip();
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Word w = word();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      Word u = word();
      expect(',');
      Word v = word();
      expect(']');
      return commutator(u, v);
    }
    if (c == '1') {
      ++pos_;
      if (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        fail("identifiers cannot start with a digit");
      return {};
    }
    return identifier();
  }

  std::string_view text_;
  const Alphabet& alphabet_;
  std::size_t line_;
  std::size_t offset_;
  std::size_t pos_ = 0;
};

inline Word parse_word(std::string_view text, const Alphabet& alphabet) { return WordParser(text, alphabet).parse(); }

/// Space-separated letters, e.g. "x^-1 g1 y"; the empty word prints as "1".
inline std::string format_word(const Word& w, const Alphabet& alphabet) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& l : w) {
    if (!out.empty()) out += ' ';
    out += l.is_var() ? alphabet.variables.at(l.id) : alphabet.coefficients.at(l.id);
    if (l.sign < 0) out += "^-1";
  }
  return out;
}

/// Net exponent of variable `var` in `w`.
inline long long exponent_sum(const Word& w, std::size_t var) {
  long long s = 0;
  for (const auto& l : w)
    if (l.is_var() && l.id == var) s += l.sign;
  return s;
}

}  // namespace groupeq
