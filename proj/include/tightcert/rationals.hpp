#pragma once

// Exact surgery coefficients (Q extended by a single unsigned infinity),
// negative continued fractions and the slope transforms used to move
// between the trefoil slope r, the contact coefficient r' of the pushoff
// and the coefficient r'' left behind after k (+1)-pushoffs are split off.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tightcert/errors.hpp"

namespace tightcert {

using Integer = boost::multiprecision::cpp_int;

namespace detail {

inline Integer abs(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(Integer a, Integer b) {
  a = abs(a);
  b = abs(b);
  while (b != 0) {
    Integer t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

// Floor division for b > 0 (cpp_int truncates toward zero).
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (a % b != 0 && a < 0) q -= 1;
  return q;
}

}  // namespace detail

/// An element of Q ∪ {∞}. Finite values are stored reduced with a positive
/// denominator; ∞ is stored canonically as 1/0.
class Coefficient {
 public:
  Coefficient() : num_(0), den_(1) {}
  Coefficient(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Coefficient(Integer n) : num_(std::move(n)), den_(1) {}  // NOLINT(google-explicit-constructor)

  Coefficient(Integer n, Integer d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) {
      if (num_ == 0) throw DomainError("0/0 is not a coefficient");
      num_ = 1;
      return;
    }
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Integer g = detail::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  static Coefficient infinity() { return Coefficient(Integer(1), Integer(0)); }

  const Integer& numerator() const noexcept { return num_; }
  const Integer& denominator() const noexcept { return den_; }

  bool is_infinite() const noexcept { return den_ == 0; }
  bool is_finite() const noexcept { return den_ != 0; }
  bool is_integer() const noexcept { return den_ == 1; }
  bool is_zero() const noexcept { return den_ != 0 && num_ == 0; }

  // Sign of a finite value.
  int sign() const {
    require_finite("sign");
    return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
  }

  // True when the value is 1/k for some integer k >= 1.
  bool is_unit_fraction() const noexcept { return den_ != 0 && num_ == 1; }

  friend bool operator==(const Coefficient& a, const Coefficient& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  // Ordering is defined on finite values only; ∞ has no sign.
  friend std::strong_ordering operator<=>(const Coefficient& a, const Coefficient& b) {
    a.require_finite("comparison");
    b.require_finite("comparison");
    Integer lhs = a.num_ * b.den_;
    Integer rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Coefficient operator+(const Coefficient& a, const Coefficient& b) {
    a.require_finite("+");
    b.require_finite("+");
    return Coefficient(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Coefficient operator-(const Coefficient& a, const Coefficient& b) {
    a.require_finite("-");
    b.require_finite("-");
    return Coefficient(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b) {
    a.require_finite("*");
    b.require_finite("*");
    return Coefficient(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Coefficient operator/(const Coefficient& a, const Coefficient& b) {
    a.require_finite("/");
    b.require_finite("/");
    if (b.num_ == 0) throw DomainError("division by zero coefficient");
    return Coefficient(a.num_ * b.den_, a.den_ * b.num_);
  }
  Coefficient operator-() const {
    require_finite("negation");
    return Coefficient(Integer(-num_), den_);
  }

  // "p/q", "n" or "inf".
  std::string to_string() const {
    if (is_infinite()) return "inf";
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
  }

  static Coefficient parse(std::string_view text) {
    auto fail = [&] { return ArgumentError("malformed coefficient '" + std::string(text) + "'"); };
    if (text == "inf" || text == "infinity") return infinity();
    auto parse_int = [&](std::string_view s) {
      if (s.empty()) throw fail();
      std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
      if (i == s.size()) throw fail();
      for (std::size_t j = i; j < s.size(); ++j)
        if (s[j] < '0' || s[j] > '9') throw fail();
      return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Coefficient(parse_int(text));
    Integer d = parse_int(text.substr(slash + 1));
    if (d == 0) throw fail();
    return Coefficient(parse_int(text.substr(0, slash)), d);
  }

  friend std::ostream& operator<<(std::ostream& os, const Coefficient& c) { return os << c.to_string(); }

 private:
  void require_finite(const char* op) const {
    if (den_ == 0) throw DomainError(std::string("operation '") + op + "' is undefined at infinity");
  }

  Integer num_;
  Integer den_;
};

/// a_1 - 1/(a_2 - 1/(... - 1/a_m)). The leading term satisfies a_1 <= -1 and
/// every later term a_i <= -2, so the expansion of a negative rational is
/// unique.
struct NegContinuedFraction {
  std::vector<Integer> coefficients;

  friend bool operator==(const NegContinuedFraction&, const NegContinuedFraction&) = default;
};

inline Coefficient eval_cf(const NegContinuedFraction& cf) {
  if (cf.coefficients.empty()) throw ArgumentError("empty continued fraction");
  Coefficient value(cf.coefficients.back());
  for (auto it = cf.coefficients.rbegin() + 1; it != cf.coefficients.rend(); ++it) {
    if (value.is_zero()) throw DomainError("continued fraction has a vanishing tail");
    value = Coefficient(*it) - Coefficient(1) / value;
  }
  return value;
}

/// Floor expansion of a finite negative rational: a_1 = floor(r), then the
/// tail -1/(r - a_1) < -1 is expanded the same way until it is an integer.
inline NegContinuedFraction neg_cf(const Coefficient& r) {
  if (r.is_infinite() || r.sign() >= 0)
    throw DomainError("negative continued fraction needs a finite r < 0, got " + r.to_string());
  NegContinuedFraction cf;
  Integer p = r.numerator();
  Integer q = r.denominator();
  while (true) {
    Integer a = detail::floor_div(p, q);
    cf.coefficients.push_back(a);
    Integer rem = p - a * q;  // r - a = rem / q with 0 <= rem < q
    if (rem == 0) break;
    // next tail = -q / rem
    p = -q;
    q = rem;
  }
  return cf;
}

/// Trefoil slope from the contact coefficient of its pushoff: r = 1/(1 - r').
inline Coefficient r_from_rprime(const Coefficient& rp) {
  if (rp.is_infinite()) return Coefficient(0);
  Coefficient denom = Coefficient(1) - rp;
  if (denom.is_zero()) return Coefficient::infinity();
  return Coefficient(1) / denom;
}

/// Inverse of r_from_rprime: r' = (r - 1)/r. r = 1 would need r' = 0, which
/// has no tight extension.
inline Coefficient rprime_from_r(const Coefficient& r) {
  if (r.is_infinite()) return Coefficient(1);
  if (r == Coefficient(1)) throw ExcludedSlopeError("slope r = 1 is excluded (r' would be 0)");
  if (r.is_zero()) return Coefficient::infinity();
  return (r - Coefficient(1)) / r;
}

/// r'' = r'/(1 - k r'); ∞ exactly when r' = 1/k.
inline Coefficient prop7_transform(const Coefficient& rp, long long k) {
  if (rp.is_infinite() || rp.sign() <= 0)
    throw DomainError("pushoff splitting needs a finite r' > 0, got " + rp.to_string());
  if (k < 1) throw DomainError("pushoff splitting needs k >= 1");
  Coefficient denom = Coefficient(1) - Coefficient(k) * rp;
  if (denom.is_zero()) return Coefficient::infinity();
  return rp / denom;
}

/// Smallest k >= 1 with prop7_transform(r', k) < 0, i.e. floor(q'/p') + 1.
inline long long min_k_negative(const Coefficient& rp) {
  if (rp.is_infinite() || rp.sign() <= 0)
    throw DomainError("min_k_negative needs a finite r' > 0, got " + rp.to_string());
  Integer k = rp.denominator() / rp.numerator() + 1;
  if (k > Integer(std::numeric_limits<long long>::max()))
    throw DomainError("pushoff count does not fit a machine integer");
  return static_cast<long long>(k);
}

}  // namespace tightcert
