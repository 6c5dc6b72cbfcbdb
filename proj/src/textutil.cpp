#include "tabml/textutil.hpp"

#include <charconv>
#include <system_error>

namespace tabml {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

static bool bare_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '.' || c == '+' || c == '-';
}

bool needs_quoting(std::string_view token) {
  if (token.empty() || token == "?") return true;
  for (char c : token)
    if (!bare_char(c)) return true;
  return false;
}

std::string quoted(std::string_view token) {
  std::string out;
  out.reserve(token.size() + 2);
  out.push_back('\'');
  for (char c : token) {
    if (c == '\'' || c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string quote_token(std::string_view token) {
  return needs_quoting(token) ? quoted(token) : std::string(token);
}

}  // namespace tabml
