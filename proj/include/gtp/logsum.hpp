#pragma once

// Exact symbolic sums of logarithms: sum_i k_i log q_i with rational q_i > 0
// and integer k_i. Ordering is decided by comparing the products exactly.

#include <gtp/rational.hpp>

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gtp {

class LogSum {
 public:
  LogSum() = default;

  /// log q.
  static LogSum log(const Rat& q) {
    LogSum s;
    s.add(q, 1);
    return s;
  }

  void add(const Rat& q, long k = 1) {
    if (q <= 0) throw std::domain_error("log of non-positive rational");
    if (q == 1 || k == 0) return;
    Rat key = q > 1 ? q : Rat(1 / q);
    long e = q > 1 ? k : -k;
    auto& slot = terms_[key];
    slot += e;
    if (slot == 0) terms_.erase(key);
  }

  LogSum& operator+=(const LogSum& o) {
    for (const auto& [q, k] : o.terms_) add(q, k);
    return *this;
  }
  LogSum& operator-=(const LogSum& o) {
    for (const auto& [q, k] : o.terms_) add(q, -k);
    return *this;
  }
  friend LogSum operator+(LogSum a, const LogSum& b) { return a += b; }
  friend LogSum operator-(LogSum a, const LogSum& b) { return a -= b; }
  LogSum operator-() const { return LogSum() - *this; }

  /// exp of the sum.
  Rat product() const {
    Rat p = 1;
    for (const auto& [q, k] : terms_) {
      Rat f = rat_pow(q, static_cast<unsigned>(k > 0 ? k : -k));
      p = k > 0 ? Rat(p * f) : Rat(p / f);
    }
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  const std::map<Rat, long>& terms() const { return terms_; }

  friend bool operator==(const LogSum& a, const LogSum& b) { return a.product() == b.product(); }
  friend bool operator<(const LogSum& a, const LogSum& b) { return a.product() < b.product(); }
  friend bool operator>(const LogSum& a, const LogSum& b) { return b < a; }
  friend bool operator<=(const LogSum& a, const LogSum& b) { return !(b < a); }
  friend bool operator>=(const LogSum& a, const LogSum& b) { return !(a < b); }

  /// Sign of (sum - n) for an integer n, decided exactly against e^n.
  int compare_with(long n) const {
    if (n >= 0) return compare_with_exp(product(), static_cast<unsigned>(n));
    return -compare_with_exp(1 / product(), static_cast<unsigned>(-n));
  }

  double to_double() const { return std::log(gtp::to_double(product())); }

  std::vector<std::pair<std::string, long>> serialize() const {
    std::vector<std::pair<std::string, long>> out;
    for (const auto& [q, k] : terms_) out.emplace_back(gtp::to_string(q), k);
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [q, k] : terms_) {
      if (!s.empty()) s += k > 0 ? " + " : " - ";
      else if (k < 0) s += "-";
      long m = k > 0 ? k : -k;
      if (m != 1) s += std::to_string(m) + " ";
      s += "log(" + gtp::to_string(q) + ")";
    }
    return s;
  }

 private:
  std::map<Rat, long> terms_;
};

}  // namespace gtp
