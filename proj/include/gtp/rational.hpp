#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gtp {

using Int = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<boost::multiprecision::gmp_rational, boost::multiprecision::et_off>;

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Int numerator(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int denominator(const Rat& q) { return boost::multiprecision::denominator(q); }

// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.25".
inline Rat parse_rat(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty rational");
  auto parse_int = [&](const std::string& part) {
    std::size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
    if (i == part.size()) throw ParseError("malformed rational \"" + s + "\"");
    for (std::size_t j = i; j < part.size(); ++j)
      if (part[j] < '0' || part[j] > '9') throw ParseError("malformed rational \"" + s + "\"");
    return Int(part);
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0) throw ParseError("zero denominator in \"" + s + "\"");
    return Rat(num, den);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    Int w = parse_int(whole);
    Int f = frac.empty() ? Int(0) : parse_int(frac);
    if (!frac.empty() && (frac[0] == '-' || frac[0] == '+')) throw ParseError("malformed rational \"" + s + "\"");
    Int scale = boost::multiprecision::pow(Int(10), static_cast<unsigned>(frac.size()));
    Rat mag = Rat(boost::multiprecision::abs(w)) + Rat(f, scale);
    return neg ? Rat(-mag) : mag;
  }
  return Rat(parse_int(s));
}

inline std::string to_string(const Rat& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

inline Rat pow2(long e) {
  if (e >= 0) return Rat(Int(1) << static_cast<unsigned>(e));
  return Rat(Int(1), Int(1) << static_cast<unsigned>(-e));
}

inline Rat rat_pow(const Rat& base, unsigned e) {
  Rat out = 1;
  Rat b = base;
  while (e) {
    if (e & 1u) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

// floor(log2(q)) for q > 0.
inline long floor_log2(const Rat& q) {
  if (q <= 0) throw std::domain_error("floor_log2 of non-positive rational");
  long guess = static_cast<long>(boost::multiprecision::msb(numerator(q))) -
               static_cast<long>(boost::multiprecision::msb(denominator(q)));
  while (pow2(guess) > q) --guess;
  while (pow2(guess + 1) <= q) ++guess;
  return guess;
}

inline Rat rmin(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rmax(const Rat& a, const Rat& b) { return a < b ? b : a; }

inline Int ceil_div(const Rat& q) {
  Int n = numerator(q), d = denominator(q);
  Int fl = n / d;
  if (fl * d > n) --fl;  // truncation toward zero for negatives
  return fl * d == n ? fl : fl + 1;
}

struct RatInterval {
  Rat lo;
  Rat hi;
  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
};

// Rational enclosure of e^n from partial sums of 1/k! with the remainder
// bounded by 1/(K! K).
inline RatInterval exp_bounds(unsigned n, unsigned terms) {
  Rat sum = 0, term = 1;
  for (unsigned k = 0; k <= terms; ++k) {
    if (k > 0) term /= k;
    sum += term;
  }
  Rat hi = sum + term / terms;
  return {rat_pow(sum, n), rat_pow(hi, n)};
}

// Three-way comparison of a positive rational against e^n, exact because
// e^n is irrational for n >= 1. Returns -1, 0 (only when n == 0 and x == 1), 1.
inline int compare_with_exp(const Rat& x, unsigned n) {
  if (n == 0) return x < 1 ? -1 : (x > 1 ? 1 : 0);
  for (unsigned terms = 8;; terms *= 2) {
    RatInterval b = exp_bounds(n, terms);
    if (x < b.lo) return -1;
    if (x > b.hi) return 1;
  }
}

}  // namespace gtp
