#pragma once

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gradalg {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;

class FieldMismatch : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Element of F_p. A value with modulus 0 is an unbound small integer, which
// is what Eigen produces for Scalar(0) and Scalar(1); it binds to the
// modulus of the first bound operand it meets.
class ModP {
 public:
  ModP() = default;
  ModP(int v) : v_(v) {}
  ModP(long v) : v_(v) {}
  ModP(long long v) : v_(v) {}
  ModP(std::int64_t v, std::uint32_t p) : v_(reduce(v, p)), p_(p) {}

  std::uint32_t modulus() const { return p_; }
  std::int64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  ModP& operator+=(const ModP& o);
  ModP& operator-=(const ModP& o);
  ModP& operator*=(const ModP& o);
  ModP& operator/=(const ModP& o) { return *this *= o.inverse(); }
  ModP operator-() const;
  ModP inverse() const;

  friend ModP operator+(ModP a, const ModP& b) { return a += b; }
  friend ModP operator-(ModP a, const ModP& b) { return a -= b; }
  friend ModP operator*(ModP a, const ModP& b) { return a *= b; }
  friend ModP operator/(ModP a, const ModP& b) { return a /= b; }
  friend bool operator==(const ModP& a, const ModP& b);
  friend bool operator!=(const ModP& a, const ModP& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const ModP& x);

 private:
  static std::int64_t reduce(std::int64_t v, std::uint32_t p) {
    if (p == 0) return v;
    std::int64_t r = v % static_cast<std::int64_t>(p);
    return r < 0 ? r + p : r;
  }
  // Binds *this and returns o's representative under the common modulus.
  std::int64_t bind(const ModP& o);

  std::int64_t v_ = 0;
  std::uint32_t p_ = 0;
};

inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const ModP& x) { return x.is_zero(); }

// a -= b * c without temporaries.
void sub_mul(Rational& a, const Rational& b, const Rational& c);
inline void sub_mul(ModP& a, const ModP& b, const ModP& c) { a -= b * c; }
void add_mul(Rational& a, const Rational& b, const Rational& c);
inline void add_mul(ModP& a, const ModP& b, const ModP& c) { a += b * c; }

struct FieldSpec {
  enum class Kind { rational, prime };
  Kind kind = Kind::rational;
  std::uint32_t p = 0;

  static FieldSpec rational() { return {}; }
  static FieldSpec prime(std::uint32_t p) { return {Kind::prime, p}; }
  bool is_rational() const { return kind == Kind::rational; }
  std::string describe() const;
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_prime(std::uint64_t n);

template <class S>
class Field;

template <>
class Field<Rational> {
 public:
  Field() = default;
  FieldSpec spec() const { return FieldSpec::rational(); }
  std::uint32_t characteristic() const { return 0; }
  Rational zero() const { return Rational(0); }
  Rational one() const { return Rational(1); }
  Rational from_int(long long n) const { return Rational(n); }
  // Integers or "num/den" with den > 0 and gcd(num, den) = 1.
  Rational parse(std::string_view s) const;
  std::string format(const Rational& x) const { return x.str(); }
  Rational random(std::mt19937_64& rng, int bound = 3) const {
    std::uniform_int_distribution<int> d(-bound, bound);
    return Rational(d(rng));
  }
  bool is_integer(const Rational& x) const;
  friend bool operator==(const Field&, const Field&) { return true; }
};

template <>
class Field<ModP> {
 public:
  explicit Field(std::uint32_t p);
  FieldSpec spec() const { return FieldSpec::prime(p_); }
  std::uint32_t characteristic() const { return p_; }
  ModP zero() const { return ModP(0, p_); }
  ModP one() const { return ModP(1, p_); }
  ModP from_int(long long n) const { return ModP(n, p_); }
  ModP from_rational(const Rational& x) const;
  // Integers in [0, p-1].
  ModP parse(std::string_view s) const;
  std::string format(const ModP& x) const;
  ModP random(std::mt19937_64& rng, int = 0) const {
    std::uniform_int_distribution<std::uint32_t> d(0, p_ - 1);
    return ModP(d(rng), p_);
  }
  bool is_integer(const ModP&) const { return true; }
  friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }

 private:
  std::uint32_t p_;
};

using QField = Field<Rational>;
using PField = Field<ModP>;

}  // namespace gradalg

namespace Eigen {
template <>
struct NumTraits<gradalg::ModP> : GenericNumTraits<gradalg::ModP> {
  using Real = gradalg::ModP;
  using NonInteger = gradalg::ModP;
  using Literal = gradalg::ModP;
  using Nested = gradalg::ModP;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen
