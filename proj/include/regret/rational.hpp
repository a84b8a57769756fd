#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <compare>
#include <ostream>
#include <string>

namespace regret {

// Exact fraction, always canonical (gmp normalizes after every operation).
class Rational {
 public:
  Rational() = default;
  Rational(long v) : q_(v) {}
  Rational(int v) : q_(v) {}
  Rational(long num, long den);
  explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
  explicit Rational(const mpz_class& z) : q_(z) {}

  // Accepts "p", "-p", "p/q". Throws std::invalid_argument otherwise.
  static Rational parse(const std::string& s);
  static bool try_parse(const std::string& s, Rational& out);

  std::string str() const;  // "p/q" or bare integer
  std::string decimal(int digits = 10) const;
  double to_double() const { return q_.get_d(); }

  mpz_class num() const { return q_.get_num(); }
  mpz_class den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  int sign() const { return sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  Rational abs() const { return Rational(::abs(q_)); }
  Rational pow(long e) const;

  Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
  Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
  Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const;

 private:
  mpq_class q_;
};

inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r);

struct RationalHash {
  std::size_t operator()(const Rational& r) const { return r.hash(); }
};

}  // namespace regret
