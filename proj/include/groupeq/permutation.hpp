#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "groupeq/error.hpp"

namespace groupeq {

/// A permutation of {0, ..., degree-1}. Printed and parsed 1-based in cycle notation.
struct Permutation {
  std::vector<std::uint32_t> image;

  Permutation() = default;
  explicit Permutation(std::size_t degree) : image(degree) {
    for (std::size_t i = 0; i < degree; ++i) image[i] = static_cast<std::uint32_t>(i);
  }
  explicit Permutation(std::vector<std::uint32_t> img) : image(std::move(img)) {}

  std::size_t degree() const { return image.size(); }
  std::uint32_t operator()(std::uint32_t point) const { return image[point]; }

  bool is_identity() const {
    for (std::size_t i = 0; i < image.size(); ++i)
      if (image[i] != i) return false;
    return true;
  }

  /// Pads with fixed points.
  Permutation extended(std::size_t degree) const {
    Permutation out(degree);
    for (std::size_t i = 0; i < image.size(); ++i) out.image[i] = image[i];
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;
};

/// Left-to-right product: apply `a` first, then `b`.
inline Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation out(a.degree());
  for (std::size_t i = 0; i < a.degree(); ++i) out.image[i] = b.image[a.image[i]];
  return out;
}

inline Permutation inverse(const Permutation& a) {
  Permutation out(a.degree());
  for (std::size_t i = 0; i < a.degree(); ++i) out.image[a.image[i]] = static_cast<std::uint32_t>(i);
  return out;
}

/// Cycle notation with comma separators, e.g. "(1,2,3)(4,5)"; the identity prints as "()".
inline std::string to_cycle_string(const Permutation& p) {
  std::string out;
  std::vector<bool> seen(p.degree(), false);
  for (std::size_t start = 0; start < p.degree(); ++start) {
    if (seen[start] || p.image[start] == start) continue;
    out += '(';
    std::size_t cur = start;
    bool first = true;
    while (!seen[cur]) {
      seen[cur] = true;
      if (!first) out += ',';
      out += std::to_string(cur + 1);
      first = false;
      cur = p.image[cur];
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

/// Parses cycle notation; points are 1-based and separated by spaces and/or commas.
/// The result has degree max(point, min_degree).
inline Permutation parse_cycles(std::string_view text, std::size_t min_degree = 0) {
  std::vector<std::vector<std::uint32_t>> cycles;
  std::size_t i = 0;
  std::uint32_t max_point = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') throw ParseError("expected '(' in cycle notation: " + std::string(text));
    ++i;
    std::vector<std::uint32_t> cycle;
    while (true) {
      while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
        ++i;
      if (i >= text.size()) throw ParseError("unterminated cycle: " + std::string(text));
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw ParseError("bad character in cycle notation: " + std::string(text));
      std::uint64_t v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
        if (v > 1'000'000) throw ParseError("point out of range in " + std::string(text));
        ++i;
      }
      if (v == 0) throw ParseError("points are 1-based: " + std::string(text));
      cycle.push_back(static_cast<std::uint32_t>(v - 1));
      max_point = std::max<std::uint32_t>(max_point, static_cast<std::uint32_t>(v));
    }
    cycles.push_back(std::move(cycle));
    skip_ws();
  }
  Permutation p(std::max<std::size_t>(max_point, min_degree));
  std::vector<bool> used(p.degree(), false);
  for (const auto& c : cycles) {
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (used[c[k]]) throw ParseError("point repeated in cycle notation: " + std::string(text));
      used[c[k]] = true;
      p.image[c[k]] = c[(k + 1) % c.size()];
    }
  }
  return p;
}

}  // namespace groupeq
