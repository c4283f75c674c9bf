#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cliquedec {

// All reported values are exact rationals; doubles exist only for the
// optional presolve filter and for display.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Parses "p/q", a plain integer, or a base-10 decimal ("12.86").
/// Decimals are converted exactly via powers of ten, never through a
/// binary float.
inline Rat parse_rational(std::string_view s) {
  auto fail = [&] { throw ParseError("bad rational literal: '" + std::string(s) + "'"); };
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) fail();

  bool neg = false;
  if (s.front() == '+' || s.front() == '-') {
    neg = s.front() == '-';
    s.remove_prefix(1);
    if (s.empty()) fail();
  }

  auto digits_ok = [&](std::string_view t) {
    if (t.empty()) return false;
    for (char ch : t)
      if (ch < '0' || ch > '9') return false;
    return true;
  };

  Int num, den = 1;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view p = s.substr(0, slash), q = s.substr(slash + 1);
    if (!digits_ok(p) || !digits_ok(q)) fail();
    num = Int(std::string(p));
    den = Int(std::string(q));
    if (den == 0) fail();
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) fail();
    if (!ip.empty() && !digits_ok(ip)) fail();
    if (!fp.empty() && !digits_ok(fp)) fail();
    num = ip.empty() ? Int(0) : Int(std::string(ip));
    for (char ch : fp) {
      num = num * 10 + (ch - '0');
      den *= 10;
    }
  } else {
    if (!digits_ok(s)) fail();
    num = Int(std::string(s));
  }
  Rat r = Rat(num) / Rat(den);  // division canonicalizes
  return neg ? Rat(-r) : r;
}

/// Lowest-terms "p/q" rendering; integral values keep the explicit "/1".
inline std::string to_pq(const Rat& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Display-only rounding to `digits` decimal places.
inline std::string to_decimal(const Rat& r, int digits = 6) {
  Int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rat scaled = r * scale;
  Int n = numerator(scaled), d = denominator(scaled);
  // round to nearest, half away from zero
  Int q = (n >= 0) ? Int((2 * n + d) / (2 * d)) : Int(-((-2 * n + d) / (2 * d)));
  bool neg = q < 0;
  if (neg) q = -q;
  std::string ds = q.str();
  if (static_cast<int>(ds.size()) <= digits) ds.insert(0, digits + 1 - ds.size(), '0');
  ds.insert(ds.size() - digits, ".");
  return (neg ? "-" : "") + ds;
}

}  // namespace cliquedec
