#include "gradalg/field.hpp"

#include <charconv>
#include <limits>
#include <ostream>

namespace gradalg {

namespace {

std::int64_t checked(__int128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    throw std::overflow_error("unbound ModP overflow");
  return static_cast<std::int64_t>(v);
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t p) {
  std::int64_t r0 = p, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  return s0 < 0 ? s0 + p : s0;
}

bool is_decimal_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

}  // namespace

std::int64_t ModP::bind(const ModP& o) {
  if (p_ == 0 && o.p_ != 0) {
    p_ = o.p_;
    v_ = reduce(v_, p_);
  } else if (p_ != 0 && o.p_ != 0 && p_ != o.p_) {
    throw FieldMismatch("ModP operands with different moduli");
  }
  return p_ == 0 ? o.v_ : reduce(o.v_, p_);
}

ModP& ModP::operator+=(const ModP& o) {
  std::int64_t b = bind(o);
  if (p_ == 0) {
    v_ = checked(static_cast<__int128>(v_) + b);
  } else {
    v_ += b;
    if (v_ >= p_) v_ -= p_;
  }
  return *this;
}

ModP& ModP::operator-=(const ModP& o) {
  std::int64_t b = bind(o);
  if (p_ == 0) {
    v_ = checked(static_cast<__int128>(v_) - b);
  } else {
    v_ -= b;
    if (v_ < 0) v_ += p_;
  }
  return *this;
}

ModP& ModP::operator*=(const ModP& o) {
  std::int64_t b = bind(o);
  if (p_ == 0)
    v_ = checked(static_cast<__int128>(v_) * b);
  else
    v_ = (v_ * b) % p_;
  return *this;
}

ModP ModP::operator-() const {
  ModP r = *this;
  if (p_ == 0)
    r.v_ = -v_;
  else if (v_ != 0)
    r.v_ = p_ - v_;
  return r;
}

ModP ModP::inverse() const {
  if (v_ == 0) throw std::domain_error("ModP: division by zero");
  if (p_ == 0) {
    if (v_ == 1 || v_ == -1) return *this;
    throw FieldMismatch("ModP: inverse of an unbound value other than +-1");
  }
  return ModP(inverse_mod(v_, p_), p_);
}

bool operator==(const ModP& a, const ModP& b) {
  if (a.p_ == b.p_) return a.v_ == b.v_;
  if (a.p_ != 0 && b.p_ != 0) return false;
  std::uint32_t p = a.p_ != 0 ? a.p_ : b.p_;
  return ModP::reduce(a.v_, p) == ModP::reduce(b.v_, p);
}

std::ostream& operator<<(std::ostream& os, const ModP& x) { return os << x.v_; }

void sub_mul(Rational& a, const Rational& b, const Rational& c) {
  thread_local Rational tmp;
  mpq_mul(tmp.backend().data(), b.backend().data(), c.backend().data());
  mpq_sub(a.backend().data(), a.backend().data(), tmp.backend().data());
}

void add_mul(Rational& a, const Rational& b, const Rational& c) {
  thread_local Rational tmp;
  mpq_mul(tmp.backend().data(), b.backend().data(), c.backend().data());
  mpq_add(a.backend().data(), a.backend().data(), tmp.backend().data());
}

std::string FieldSpec::describe() const {
  return kind == Kind::rational ? std::string("Q") : "F_" + std::to_string(p);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Rational Field<Rational>::parse(std::string_view s) const {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    if (!is_decimal_integer(s)) throw ParseError("malformed rational scalar '" + std::string(s) + "'");
    return Rational(Integer(std::string(s[0] == '+' ? s.substr(1) : s)));
  }
  auto num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!is_decimal_integer(num) || !is_decimal_integer(den) || den[0] == '-' || den[0] == '+')
    throw ParseError("malformed rational scalar '" + std::string(s) + "'");
  Integer n(std::string(num[0] == '+' ? num.substr(1) : num)), d{std::string(den)};
  if (d <= 0) throw ParseError("rational scalar '" + std::string(s) + "' needs a positive denominator");
  if (gcd(n, d) != 1) throw ParseError("rational scalar '" + std::string(s) + "' is not in lowest terms");
  return Rational(n, d);
}

bool Field<Rational>::is_integer(const Rational& x) const { return denominator(x) == 1; }

Field<ModP>::Field(std::uint32_t p) : p_(p) {
  if (p > (1u << 31) || !is_prime(p)) throw std::invalid_argument("modulus " + std::to_string(p) + " is not a prime below 2^31");
}

ModP Field<ModP>::from_rational(const Rational& x) const {
  Integer n = numerator(x) % p_, d = denominator(x) % p_;
  return ModP(n.convert_to<std::int64_t>(), p_) / ModP(d.convert_to<std::int64_t>(), p_);
}

ModP Field<ModP>::parse(std::string_view s) const {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("malformed prime-field scalar '" + std::string(s) + "'");
  if (v < 0 || v >= static_cast<std::int64_t>(p_))
    throw ParseError("prime-field scalar '" + std::string(s) + "' outside [0, " + std::to_string(p_ - 1) + "]");
  return ModP(v, p_);
}

std::string Field<ModP>::format(const ModP& x) const {
  return std::to_string(x.modulus() == 0 ? ModP(x.value(), p_).value() : x.value());
}

}  // namespace gradalg
