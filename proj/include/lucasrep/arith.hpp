#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace lucasrep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An operand outside a function's domain (log of a non-positive enclosure,
// zero denominator, radius too large for an unambiguous answer, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Escalation hit the configured precision ceiling without a decision.
class PrecisionCeilingError : public Error {
 public:
  using Error::Error;
};

// A certificate could not be established (sign undecidable, expansion
// uncertifiable, reduction exhausted its advancement budget, ...).
class CertificationError : public Error {
 public:
  using Error::Error;
};

// Working precision of ball midpoints. Escalation doubles the bit count; a
// hard ceiling turns runaway escalation into an error instead of a hang.
struct PrecisionSpec {
  static constexpr unsigned kMinBits = 64;
  static constexpr unsigned kDefaultStart = 256;
  static constexpr unsigned kCeiling = 1u << 20;

  unsigned bits = kDefaultStart;

  PrecisionSpec() = default;
  explicit PrecisionSpec(unsigned b) : bits(b) {
    if (bits < kMinBits) throw DomainError("PrecisionSpec: bits below minimum");
  }

  PrecisionSpec doubled(unsigned cap = kCeiling) const {
    if (bits >= cap)
      throw PrecisionCeilingError("precision ceiling reached at " +
                                  std::to_string(bits) + " bits");
    return PrecisionSpec(bits * 2 <= cap ? bits * 2 : cap);
  }
};

enum class Order { Less, Greater, Undecidable };

// A certified real: midpoint m and radius r at explicit precision, with the
// guarantee that the represented exact value x satisfies |x - m| <= r.
// Midpoint arithmetic rounds to nearest and the rounding error is folded
// into the radius; radius arithmetic always rounds up, so every operation
// returns an enclosure of the exact result.
class Ball {
 public:
  Ball();
  explicit Ball(PrecisionSpec prec);
  Ball(const Ball& other);
  Ball(Ball&& other) noexcept;
  Ball& operator=(const Ball& other);
  Ball& operator=(Ball&& other) noexcept;
  ~Ball();

  static Ball exact(long v, PrecisionSpec prec = PrecisionSpec());
  // Exact embedding: precision is widened to the bit length of z if needed.
  static Ball from_integer(const mpz_class& z,
                           PrecisionSpec prec = PrecisionSpec());
  static Ball from_rational(const mpz_class& num, const mpz_class& den,
                            PrecisionSpec prec);
  static Ball from_rational(const mpq_class& q, PrecisionSpec prec);
  // Enclosure [lo, hi] given as exact dyadic endpoints.
  static Ball from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi,
                             PrecisionSpec prec);
  static Ball from_rational_interval(const mpq_class& lo, const mpq_class& hi,
                                     PrecisionSpec prec);

  PrecisionSpec precision() const { return PrecisionSpec(bits_); }
  bool is_exact() const { return mpfr_zero_p(rad_); }

  mpfr_srcptr midpoint() const { return mid_; }
  mpfr_srcptr radius() const { return rad_; }
  double midpoint_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  double radius_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }

  // Exact dyadic endpoint bounds (lower rounds down, upper rounds up).
  mpq_class lower_rational() const;
  mpq_class upper_rational() const;

  bool contains(const mpq_class& v) const;
  bool contains_zero() const;
  bool is_positive() const;  // certified: lower endpoint > 0
  bool is_negative() const;

  std::string str(std::size_t digits = 20) const;

 private:
  friend Ball operator+(const Ball&, const Ball&);
  friend Ball operator-(const Ball&, const Ball&);
  friend Ball operator*(const Ball&, const Ball&);
  friend Ball operator/(const Ball&, const Ball&);
  friend Ball operator-(const Ball&);
  friend Ball abs(const Ball&);
  friend Ball inverse(const Ball&);
  friend Ball log(const Ball&);
  friend Ball exp(const Ball&);
  friend Ball sqrt(const Ball&);
  friend Ball pow_ui(const Ball&, unsigned long);
  friend Ball nearest_int_distance(const Ball&);
  friend Order compare(const Ball&, const Ball&);
  friend bool certified_less(const Ball&, const Ball&);
  friend bool certified_le(const Ball&, const Ball&);
  friend std::optional<mpz_class> floor_if_certain(const Ball&);
  friend mpz_class ceil_of_upper(const Ball&);
  friend mpz_class floor_of_lower(const Ball&);
  friend mpz_class nearest_int_of_midpoint(const Ball&);
  friend Ball max(const Ball&, const Ball&);

  void add_rounding_error(int ternary);

  mpfr_t mid_;
  mpfr_t rad_;
  unsigned bits_;
};

Ball operator+(const Ball& x, const Ball& y);
Ball operator-(const Ball& x, const Ball& y);
Ball operator*(const Ball& x, const Ball& y);
Ball operator/(const Ball& x, const Ball& y);
Ball operator-(const Ball& x);
Ball abs(const Ball& x);
Ball inverse(const Ball& y);
Ball log(const Ball& x);
Ball exp(const Ball& x);
Ball sqrt(const Ball& x);
Ball pow_ui(const Ball& x, unsigned long e);

// ||x|| = min_{n in Z} |x - n|. Requires radius < 1/4.
Ball nearest_int_distance(const Ball& x);

// Less iff x lies entirely below y, Greater symmetric, otherwise the
// intervals overlap and the caller must escalate precision.
Order compare(const Ball& x, const Ball& y);
bool certified_less(const Ball& x, const Ball& y);
bool certified_le(const Ball& x, const Ball& y);

std::optional<mpz_class> floor_if_certain(const Ball& x);
mpz_class ceil_of_upper(const Ball& x);
mpz_class floor_of_lower(const Ball& x);
mpz_class nearest_int_of_midpoint(const Ball& x);
Ball max(const Ball& x, const Ball& y);

// Parses a decimal string ("2.30258", "-0.5e3") into an exact rational.
mpq_class rational_from_decimal(const std::string& s);

// Parses integers given either as plain decimals or mantissa-exponent form
// ("1.8e291" -> 18 * 10^290). Rejects inputs that are not exact integers.
mpz_class integer_from_decimal(const std::string& s);

// A real number that can be (re-)evaluated as an enclosure at any requested
// precision. The id doubles as the on-disk cache key for expansions.
struct RealValue {
  std::string id;
  std::function<Ball(PrecisionSpec)> eval;
  std::optional<mpq_class> exact;

  static RealValue from_rational(const mpq_class& v, std::string id = "");
  static RealValue log2_over_log10();
  static RealValue golden_ratio();
  static RealValue sqrt_of(unsigned long n);
  static RealValue e_minus_2();
  // log(v) / log(10) for a positive rational v (negated when negate is set).
  static RealValue log10_ratio(const mpq_class& v, bool negate = false,
                               std::string id = "");
  // v / log(10) for a positive rational v.
  static RealValue rational_over_log10(const mpq_class& v);
  // m - r * gamma, handy for constructing degenerate reduction instances.
  static RealValue integer_combination(long m, long r, const RealValue& gamma);
};

// Doubles precision until `step` produces a value; throws
// PrecisionCeilingError once the cap is exceeded.
template <typename Step>
auto escalate(PrecisionSpec start, unsigned cap, Step&& step) {
  PrecisionSpec p = start;
  while (true) {
    if (auto r = step(p)) return *r;
    p = p.doubled(cap);
  }
}

}  // namespace lucasrep
