#pragma once
// Exact coefficient rings: Z/p on machine words, Z and Q on GMP.

#include <cstdint>
#include <gmpxx.h>
#include <string>
#include <string_view>
#include <variant>

#include "cpa/error.hpp"

namespace cpa {

namespace detail {

inline std::string trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return std::string(s);
}

inline bool is_integer_literal(std::string_view s) {
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline mpz_class parse_integer(std::string_view s) {
  std::string t = trim(s);
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  if (!is_integer_literal(t)) throw Error(ErrorKind::BadInput, "not an integer: '" + t + "'");
  return mpz_class(t, 10);
}

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace detail

/// Z/p for a prime p < 2^31. Values are canonical residues in [0, p).
class PrimeField {
 public:
  using value_type = std::uint64_t;
  static constexpr bool is_field = true;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p >= (1ull << 31) || !detail::is_prime(p))
      throw Error(ErrorKind::BadInput, "F:p needs a prime p < 2^31, got " + std::to_string(p));
  }

  std::uint64_t characteristic() const noexcept { return p_; }
  std::string name() const { return "F:" + std::to_string(p_); }

  value_type zero() const noexcept { return 0; }
  value_type one() const noexcept { return 1 % p_; }
  bool is_zero(value_type a) const noexcept { return a == 0; }
  bool is_unit(value_type a) const noexcept { return a != 0; }
  value_type add(value_type a, value_type b) const noexcept { return (a + b) % p_; }
  value_type sub(value_type a, value_type b) const noexcept { return (a + p_ - b) % p_; }
  value_type neg(value_type a) const noexcept { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const noexcept { return (a * b) % p_; }

  value_type from_int(long long v) const noexcept {
    long long r = v % static_cast<long long>(p_);
    return static_cast<value_type>(r < 0 ? r + static_cast<long long>(p_) : r);
  }

  value_type inv(value_type a) const {
    if (a == 0) throw Error(ErrorKind::BadInput, "division by zero in " + name());
    return pow(a, p_ - 2);
  }

  value_type pow(value_type a, std::uint64_t e) const noexcept {
    value_type r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  /// Accepts "3", "-1" and "3 mod p".
  value_type parse(std::string_view text) const {
    std::string t = detail::trim(text);
    if (auto pos = t.find(" mod "); pos != std::string::npos) {
      mpz_class mod = detail::parse_integer(std::string_view(t).substr(pos + 5));
      if (mod != static_cast<unsigned long>(p_))
        throw Error(ErrorKind::BadInput, "value '" + t + "' is not in " + name());
      t = t.substr(0, pos);
    }
    if (t.find('/') != std::string::npos) throw Error(ErrorKind::BadInput, "fractions are only accepted over Q");
    mpz_class v = detail::parse_integer(t);
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), v.get_mpz_t(), p_);
    return r.get_ui();
  }

  std::string to_string(value_type a) const { return std::to_string(a) + " mod " + std::to_string(p_); }

  bool operator==(const PrimeField& o) const noexcept { return p_ == o.p_; }

 private:
  std::uint64_t p_;
};

class Integers {
 public:
  using value_type = mpz_class;
  static constexpr bool is_field = false;

  std::string name() const { return "Z"; }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_unit(const value_type& a) const { return a == 1 || a == -1; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type from_int(long long v) const { return mpz_class(std::to_string(v), 10); }
  value_type inv(const value_type& a) const {
    if (!is_unit(a)) throw Error(ErrorKind::BadInput, "non-unit inverted over Z");
    return a;
  }
  value_type pow(const value_type& a, std::uint64_t e) const {
    value_type r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
  }
  value_type parse(std::string_view text) const {
    std::string t = detail::trim(text);
    if (t.find('/') != std::string::npos) throw Error(ErrorKind::BadInput, "fractions are only accepted over Q");
    return detail::parse_integer(t);
  }
  std::string to_string(const value_type& a) const { return a.get_str(); }
  bool operator==(const Integers&) const noexcept { return true; }
};

class Rationals {
 public:
  using value_type = mpq_class;
  static constexpr bool is_field = true;

  std::string name() const { return "Q"; }
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_unit(const value_type& a) const { return sgn(a) != 0; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type from_int(long long v) const { return value_type(mpz_class(std::to_string(v), 10)); }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw Error(ErrorKind::BadInput, "division by zero in Q");
    return 1 / a;
  }
  value_type pow(const value_type& a, std::uint64_t e) const {
    value_type r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r *= a;
    return r;
  }
  /// Accepts "2", "-1", "2/3".
  value_type parse(std::string_view text) const {
    std::string t = detail::trim(text);
    auto slash = t.find('/');
    if (slash == std::string::npos) return value_type(detail::parse_integer(t));
    mpz_class num = detail::parse_integer(std::string_view(t).substr(0, slash));
    mpz_class den = detail::parse_integer(std::string_view(t).substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::BadInput, "zero denominator in '" + t + "'");
    value_type q(num, den);
    q.canonicalize();
    return q;
  }
  std::string to_string(const value_type& a) const { return a.get_str(); }
  bool operator==(const Rationals&) const noexcept { return true; }
};

/// A runtime choice of ring, parsed from "Q", "Z" or "F:p".
using AnyRing = std::variant<Rationals, Integers, PrimeField>;

inline AnyRing parse_ring_spec(std::string_view spec) {
  std::string t = detail::trim(spec);
  if (t == "Q") return Rationals{};
  if (t == "Z") return Integers{};
  if (t.rfind("F:", 0) == 0) {
    mpz_class p = detail::parse_integer(std::string_view(t).substr(2));
    if (p <= 1 || p >= (1l << 31)) throw Error(ErrorKind::BadInput, "F:p needs a prime p < 2^31");
    return PrimeField(p.get_ui());
  }
  throw Error(ErrorKind::BadInput, "unknown coefficient ring '" + t + "' (expected Q, Z or F:p)");
}

inline std::string ring_name(const AnyRing& r) {
  return std::visit([](const auto& ring) { return ring.name(); }, r);
}

}  // namespace cpa
