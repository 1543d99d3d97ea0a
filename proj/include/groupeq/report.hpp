#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/integer.hpp"

namespace groupeq {

/// One block of structured output:
///
///     [kind]
///     key=value
///     ...
///
/// Blocks are separated by a blank line. Values are single-line: backslash, newline and
/// carriage return are escaped as \\, \n and \r.
struct Record {
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : fields)
      if (k == key) return &v;
    return nullptr;
  }
  void add(std::string key, std::string value) { fields.emplace_back(std::move(key), std::move(value)); }

  friend bool operator==(const Record&, const Record&) = default;
};

inline std::string escape_value(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '\\') out += "\\\\";
    else if (c == '\n') out += "\\n";
    else if (c == '\r') out += "\\r";
    else out += c;
  }
  return out;
}

inline std::string unescape_value(std::string_view s, std::size_t line = 0) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (++i == s.size()) throw ParseError("dangling escape", line);
    if (s[i] == '\\') out += '\\';
    else if (s[i] == 'n') out += '\n';
    else if (s[i] == 'r') out += '\r';
    else throw ParseError(std::string("unknown escape \\") + s[i], line);
  }
  return out;
}

inline std::string emit_records(const std::vector<Record>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += "\n";
    out += "[" + records[i].kind + "]\n";
    for (const auto& [k, v] : records[i].fields) out += k + "=" + escape_value(v) + "\n";
  }
  return out;
}

inline std::vector<Record> parse_records(std::string_view text) {
  std::vector<Record> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool open = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      open = false;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ParseError("bad record header", lineno);
      out.push_back({line.substr(1, line.size() - 2), {}});
      open = true;
      continue;
    }
    if (!open) throw ParseError("field outside a record", lineno);
    auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value", lineno);
    out.back().add(line.substr(0, eq), unescape_value(std::string_view(line).substr(eq + 1), lineno));
  }
  return out;
}

// ---- typed field codec ----
//
// A report type R declares `static constexpr const char* kind` and
//     template <class S, class V> static void fields(S& self, V&& v);
// calling v("key", self.member) for each member. Supported member types: std::string,
// bool, integers, Integer, vectors of integers / Integer (as "[a,b]"), vectors of strings
// (as key.count, key.0, ...) and std::optional of any of these (omitted when empty).

namespace detail {

template <class T>
struct is_optional : std::false_type {};
template <class T>
struct is_optional<std::optional<T>> : std::true_type {};

inline long long parse_ll(const std::string& s) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad integer '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("bad integer '" + s + "'");
  return v;
}

inline unsigned long long parse_ull(const std::string& s) {
  if (s.empty() || s[0] == '-') throw ParseError("bad unsigned integer '" + s + "'");
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad unsigned integer '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("bad unsigned integer '" + s + "'");
  return v;
}

template <class T>
std::string encode_scalar(const T& v) {
  if constexpr (std::is_same_v<T, std::string>) return v;
  else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
  else if constexpr (std::is_same_v<T, Integer>) return v.str();
  else return std::to_string(v);
}

template <class T>
T decode_scalar(const std::string& s) {
  if constexpr (std::is_same_v<T, std::string>) return s;
  else if constexpr (std::is_same_v<T, bool>) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ParseError("bad boolean '" + s + "'");
  } else if constexpr (std::is_same_v<T, Integer>) {
    if (s.empty()) throw ParseError("empty integer");
    try {
      return Integer(s);
    } catch (const std::exception&) {
      throw ParseError("bad integer '" + s + "'");
    }
  } else if constexpr (std::is_signed_v<T>) return static_cast<T>(parse_ll(s));
  else return static_cast<T>(parse_ull(s));
}

struct FieldWriter {
  Record& rec;

  template <class T>
  void operator()(const std::string& key, const T& v) {
    if constexpr (is_optional<T>::value) {
      if (v) (*this)(key, *v);
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      rec.add(key + ".count", std::to_string(v.size()));
      for (std::size_t i = 0; i < v.size(); ++i) rec.add(key + "." + std::to_string(i), v[i]);
    } else if constexpr (requires { typename T::value_type; } && !std::is_same_v<T, std::string> && !std::is_same_v<T, Integer>) {
      std::string s = "[";
      for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + encode_scalar(v[i]);
      rec.add(key, s + "]");
    } else {
      rec.add(key, encode_scalar(v));
    }
  }
};

struct FieldReader {
  const Record& rec;

  const std::string& need(const std::string& key) const {
    auto* v = rec.find(key);
    if (!v) throw ParseError("record [" + rec.kind + "] lacks field '" + key + "'");
    return *v;
  }

  template <class T>
  void operator()(const std::string& key, T& v) const {
    if constexpr (is_optional<T>::value) {
      const std::string probe = std::is_same_v<typename T::value_type, std::vector<std::string>> ? key + ".count" : key;
      if (!rec.find(probe)) {
        v.reset();
        return;
      }
      typename T::value_type inner{};
      (*this)(key, inner);
      v = std::move(inner);
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      const auto n = parse_ull(need(key + ".count"));
      v.clear();
      for (std::size_t i = 0; i < n; ++i) v.push_back(need(key + "." + std::to_string(i)));
    } else if constexpr (requires { typename T::value_type; } && !std::is_same_v<T, std::string> && !std::is_same_v<T, Integer>) {
      const auto& s = need(key);
      if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("expected [..] list for '" + key + "'");
      v.clear();
      const std::string body = s.substr(1, s.size() - 2);
      if (body.empty()) return;
      std::stringstream ss(body);
      for (std::string part; std::getline(ss, part, ',');) v.push_back(decode_scalar<typename T::value_type>(part));
    } else {
      v = decode_scalar<T>(need(key));
    }
  }
};

}  // namespace detail

template <class R>
Record to_record(const R& r) {
  Record rec{R::kind, {}};
  R::fields(r, detail::FieldWriter{rec});
  return rec;
}

template <class R>
R from_record(const Record& rec) {
  if (rec.kind != R::kind) throw ParseError("expected record [" + std::string(R::kind) + "], got [" + rec.kind + "]");
  R r{};
  R::fields(r, detail::FieldReader{rec});
  return r;
}

}  // namespace groupeq
