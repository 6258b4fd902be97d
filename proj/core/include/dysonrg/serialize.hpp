#pragma once

#include <charconv>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dysonrg/spin_polynomial.hpp"

// Line-oriented text format, one term per line:
//   X={0,1} Y={-2,-1} coef=1.25
// Interval coefficients carry both endpoints: coef=[1.2,1.3].
// Numbers are written with the shortest round-trip representation, so
// write-then-read reproduces coefficients bit for bit.

namespace dysonrg {

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text) {
  double out = 0.0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, out);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument("bad number: '" + std::string(text) + "'");
  return out;
}

inline std::string format_scalar(double x) { return format_double(x); }
inline std::string format_scalar(const Interval& x) {
  return "[" + format_double(x.lower()) + "," + format_double(x.upper()) + "]";
}

template <class T>
T parse_scalar(std::string_view text);

template <>
inline double parse_scalar<double>(std::string_view text) {
  if (!text.empty() && text.front() == '[')
    throw std::invalid_argument("interval coefficient in float-mode input");
  return parse_double(text);
}

template <>
inline Interval parse_scalar<Interval>(std::string_view text) {
  if (text.empty() || text.front() != '[') return Interval(parse_double(text));
  const auto comma = text.find(',');
  if (comma == std::string_view::npos || text.back() != ']')
    throw std::invalid_argument("bad interval: '" + std::string(text) + "'");
  return Interval(parse_double(text.substr(1, comma - 1)),
                  parse_double(text.substr(comma + 1, text.size() - comma - 2)));
}

namespace detail {

inline std::vector<int> parse_site_list(std::string_view body) {
  std::vector<int> sites;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t next = body.find(',', pos);
    if (next == std::string_view::npos) next = body.size();
    sites.push_back(static_cast<int>(parse_double(body.substr(pos, next - pos))));
    pos = next + 1;
  }
  return sites;
}

inline std::string_view field(std::string_view line, std::string_view prefix,
                              std::string_view suffix_stop) {
  const auto start = line.find(prefix);
  if (start == std::string_view::npos)
    throw std::invalid_argument("missing '" + std::string(prefix) + "' in: " +
                                std::string(line));
  const auto begin = start + prefix.size();
  auto end = suffix_stop.empty() ? line.size() : line.find(suffix_stop, begin);
  if (end == std::string_view::npos)
    throw std::invalid_argument("unterminated field in: " + std::string(line));
  return line.substr(begin, end - begin);
}

}  // namespace detail

template <class T>
std::string to_text(const SpinPolynomial<T>& p) {
  std::string out;
  for (const auto& term : p.terms()) {
    out += "X=" + to_string(term.X) + " Y=" + to_string(term.Y) +
           " coef=" + format_scalar(term.coef) + "\n";
  }
  return out;
}

template <class T>
SpinPolynomial<T> polynomial_from_text(const std::string& text) {
  std::vector<typename SpinPolynomial<T>::Term> terms;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const std::string_view lv(line);
    terms.push_back(typename SpinPolynomial<T>::Term{
        SiteSet(Lattice::original, detail::parse_site_list(detail::field(lv, "X={", "}"))),
        SiteSet(Lattice::block, detail::parse_site_list(detail::field(lv, "Y={", "}"))),
        parse_scalar<T>(detail::field(lv, "coef=", ""))});
  }
  return SpinPolynomial<T>::from_terms(terms);
}

}  // namespace dysonrg
