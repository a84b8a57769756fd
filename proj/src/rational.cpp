#include "regret/rational.hpp"

#include <stdexcept>

namespace regret {

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  q_ = mpq_class(num, den);
  q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  q_ /= o.q_;
  return *this;
}

static bool digits_only(const std::string& s, std::size_t from) {
  if (from >= s.size()) return false;
  for (std::size_t i = from; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

bool Rational::try_parse(const std::string& s, Rational& out) {
  auto slash = s.find('/');
  std::string a = s.substr(0, slash);
  std::size_t start = (!a.empty() && (a[0] == '-' || a[0] == '+')) ? 1 : 0;
  if (!digits_only(a, start)) return false;
  mpz_class num(a[0] == '+' ? a.substr(1) : a, 10);
  mpz_class den = 1;
  if (slash != std::string::npos) {
    std::string b = s.substr(slash + 1);
    if (!digits_only(b, 0)) return false;
    den = mpz_class(b, 10);
    if (den == 0) return false;
  }
  mpq_class q(num, den);
  q.canonicalize();
  out = Rational(q);
  return true;
}

Rational Rational::parse(const std::string& s) {
  Rational r;
  if (!try_parse(s, r)) throw std::invalid_argument("not a rational: '" + s + "'");
  return r;
}

std::string Rational::str() const {
  if (is_integer()) return q_.get_num().get_str();
  return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::string Rational::decimal(int digits) const {
  // truncated toward zero, enough for display
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
  mpz_class n = ::abs(q_.get_num()) * scale / q_.get_den();
  std::string s = n.get_str();
  if ((int)s.size() <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
  std::string ip = s.substr(0, s.size() - digits), fp = s.substr(s.size() - digits);
  while (!fp.empty() && fp.back() == '0') fp.pop_back();
  std::string out = (sign() < 0 ? "-" : "") + ip;
  if (!fp.empty()) out += "." + fp;
  return out;
}

Rational Rational::pow(long e) const {
  if (e < 0) return Rational(1) / pow(-e);
  mpz_class n, d;
  mpz_pow_ui(n.get_mpz_t(), q_.get_num_mpz_t(), (unsigned long)e);
  mpz_pow_ui(d.get_mpz_t(), q_.get_den_mpz_t(), (unsigned long)e);
  return Rational(mpq_class(n, d));
}

static std::size_t mix_mpz(std::size_t h, mpz_srcptr z) {
  std::size_t n = mpz_size(z);
  h ^= (std::size_t)mpz_sgn(z) * 0x100000001b3ULL + n;
  for (std::size_t i = 0; i < n; ++i)
    h ^= (std::size_t)mpz_getlimbn(z, i) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

std::size_t Rational::hash() const {
  return mix_mpz(mix_mpz(1469598103934665603ULL, q_.get_num_mpz_t()), q_.get_den_mpz_t());
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace regret
