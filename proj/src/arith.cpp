#include "lucasrep/arith.hpp"

#include <cctype>
#include <utility>

namespace lucasrep {

namespace {

constexpr mpfr_prec_t kRadiusPrec = 64;

// Scratch mpfr value with RAII cleanup.
struct Scratch {
  mpfr_t v;
  explicit Scratch(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Scratch() { mpfr_clear(v); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
  operator mpfr_ptr() { return v; }
  operator mpfr_srcptr() const { return v; }
};

unsigned max_bits(const Ball& x, const Ball& y) {
  return std::max(mpfr_get_prec(x.midpoint()), mpfr_get_prec(y.midpoint()));
}

// 2^(exp(m) - prec) bounds one ulp of m, so it covers a round-to-nearest
// error with a factor-2 margin.
void add_ulp_bound(mpfr_ptr rad, mpfr_srcptr m, unsigned bits) {
  if (mpfr_zero_p(m)) return;  // RNDN result 0 only from an exact 0
  Scratch ulp(kRadiusPrec);
  mpfr_set_ui_2exp(ulp, 1, mpfr_get_exp(m) - static_cast<mpfr_exp_t>(bits),
                   MPFR_RNDU);
  mpfr_add(rad, rad, ulp, MPFR_RNDU);
}

// Exact dyadic value of an mpfr number as a rational.
mpq_class mpfr_to_rational(mpfr_srcptr v) {
  if (mpfr_zero_p(v)) return mpq_class(0);
  mpz_class mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v);
  mpq_class q(mant);
  if (e >= 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(e));
    q *= scale;
  } else {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    q /= scale;
  }
  q.canonicalize();
  return q;
}

}  // namespace

Ball::Ball() : Ball(PrecisionSpec()) {}

Ball::Ball(PrecisionSpec prec) : bits_(prec.bits) {
  mpfr_init2(mid_, bits_);
  mpfr_init2(rad_, kRadiusPrec);
  mpfr_set_zero(mid_, 1);
  mpfr_set_zero(rad_, 1);
}

Ball::Ball(const Ball& other) : bits_(other.bits_) {
  mpfr_init2(mid_, mpfr_get_prec(other.mid_));
  mpfr_init2(rad_, kRadiusPrec);
  mpfr_set(mid_, other.mid_, MPFR_RNDN);
  mpfr_set(rad_, other.rad_, MPFR_RNDU);
}

Ball::Ball(Ball&& other) noexcept : bits_(other.bits_) {
  mpfr_init2(mid_, mpfr_get_prec(other.mid_));
  mpfr_init2(rad_, kRadiusPrec);
  mpfr_swap(mid_, other.mid_);
  mpfr_swap(rad_, other.rad_);
}

Ball& Ball::operator=(const Ball& other) {
  if (this != &other) {
    mpfr_set_prec(mid_, mpfr_get_prec(other.mid_));
    mpfr_set(mid_, other.mid_, MPFR_RNDN);
    mpfr_set(rad_, other.rad_, MPFR_RNDU);
    bits_ = other.bits_;
  }
  return *this;
}

Ball& Ball::operator=(Ball&& other) noexcept {
  if (this != &other) {
    mpfr_swap(mid_, other.mid_);
    mpfr_swap(rad_, other.rad_);
    bits_ = other.bits_;
  }
  return *this;
}

Ball::~Ball() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

void Ball::add_rounding_error(int ternary) {
  if (ternary != 0) add_ulp_bound(rad_, mid_, bits_);
}

Ball Ball::exact(long v, PrecisionSpec prec) {
  Ball b(prec);
  int t = mpfr_set_si(b.mid_, v, MPFR_RNDN);
  b.add_rounding_error(t);
  return b;
}

Ball Ball::from_integer(const mpz_class& z, PrecisionSpec prec) {
  std::size_t need = mpz_sizeinbase(z.get_mpz_t(), 2);
  unsigned bits = std::max<unsigned>(prec.bits, static_cast<unsigned>(need));
  Ball b((PrecisionSpec(bits)));
  int t = mpfr_set_z(b.mid_, z.get_mpz_t(), MPFR_RNDN);
  b.add_rounding_error(t);
  return b;
}

Ball Ball::from_rational(const mpz_class& num, const mpz_class& den,
                         PrecisionSpec prec) {
  if (den == 0) throw DomainError("from_rational: zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return from_rational(q, prec);
}

Ball Ball::from_rational(const mpq_class& q, PrecisionSpec prec) {
  if (q.get_den() == 0) throw DomainError("from_rational: zero denominator");
  Ball b(prec);
  int t = mpfr_set_q(b.mid_, q.get_mpq_t(), MPFR_RNDN);
  b.add_rounding_error(t);
  return b;
}

Ball Ball::from_endpoints(mpfr_srcptr lo, mpfr_srcptr hi, PrecisionSpec prec) {
  Ball b(prec);
  int t = mpfr_add(b.mid_, lo, hi, MPFR_RNDN);
  t |= mpfr_div_2ui(b.mid_, b.mid_, 1, MPFR_RNDN);
  Scratch half(std::max<mpfr_prec_t>(mpfr_get_prec(lo), mpfr_get_prec(hi)) +
               8);
  mpfr_sub(half, hi, lo, MPFR_RNDU);
  mpfr_div_2ui(half, half, 1, MPFR_RNDU);
  mpfr_set(b.rad_, half, MPFR_RNDU);
  b.add_rounding_error(t);
  // one extra ulp so the rounded midpoint stays covered
  add_ulp_bound(b.rad_, b.mid_, b.bits_);
  return b;
}

Ball Ball::from_rational_interval(const mpq_class& lo, const mpq_class& hi,
                                  PrecisionSpec prec) {
  if (lo > hi) throw DomainError("from_rational_interval: empty interval");
  Scratch l(prec.bits + 8), h(prec.bits + 8);
  mpfr_set_q(l, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(h, hi.get_mpq_t(), MPFR_RNDU);
  return from_endpoints(l, h, prec);
}

mpq_class Ball::lower_rational() const {
  Scratch lo(bits_ + kRadiusPrec);
  mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
  return mpfr_to_rational(lo);
}

mpq_class Ball::upper_rational() const {
  Scratch hi(bits_ + kRadiusPrec);
  mpfr_add(hi, mid_, rad_, MPFR_RNDU);
  return mpfr_to_rational(hi);
}

bool Ball::contains(const mpq_class& v) const {
  return lower_rational() <= v && v <= upper_rational();
}

bool Ball::contains_zero() const {
  Scratch lo(bits_ + kRadiusPrec), hi(bits_ + kRadiusPrec);
  mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
  mpfr_add(hi, mid_, rad_, MPFR_RNDU);
  return mpfr_sgn(lo) <= 0 && mpfr_sgn(hi) >= 0;
}

bool Ball::is_positive() const {
  Scratch lo(bits_ + kRadiusPrec);
  mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
  return mpfr_sgn(lo) > 0;
}

bool Ball::is_negative() const {
  Scratch hi(bits_ + kRadiusPrec);
  mpfr_add(hi, mid_, rad_, MPFR_RNDU);
  return mpfr_sgn(hi) < 0;
}

std::string Ball::str(std::size_t digits) const {
  char* s = nullptr;
  int rc = mpfr_asprintf(&s, "%.*Rg", static_cast<int>(digits), mid_);
  std::string out = rc >= 0 && s ? s : "?";
  if (s) mpfr_free_str(s);
  if (!mpfr_zero_p(rad_)) {
    char* r = nullptr;
    rc = mpfr_asprintf(&r, "%.2Rg", rad_);
    out += " +/- ";
    out += (rc >= 0 && r) ? r : "?";
    if (r) mpfr_free_str(r);
  }
  return out;
}

Ball operator+(const Ball& x, const Ball& y) {
  Ball r((PrecisionSpec(max_bits(x, y))));
  int t = mpfr_add(r.mid_, x.mid_, y.mid_, MPFR_RNDN);
  mpfr_add(r.rad_, x.rad_, y.rad_, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball operator-(const Ball& x, const Ball& y) {
  Ball r((PrecisionSpec(max_bits(x, y))));
  int t = mpfr_sub(r.mid_, x.mid_, y.mid_, MPFR_RNDN);
  mpfr_add(r.rad_, x.rad_, y.rad_, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball operator-(const Ball& x) {
  Ball r(x);
  mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
  return r;
}

Ball abs(const Ball& x) {
  Ball r(x);
  mpfr_abs(r.mid_, r.mid_, MPFR_RNDN);
  return r;
}

Ball operator*(const Ball& x, const Ball& y) {
  Ball r((PrecisionSpec(max_bits(x, y))));
  int t = mpfr_mul(r.mid_, x.mid_, y.mid_, MPFR_RNDN);
  // |x*y - xm*ym| <= |xm|*yr + |ym|*xr + xr*yr
  Scratch a(kRadiusPrec), term(kRadiusPrec);
  mpfr_abs(a, x.mid_, MPFR_RNDU);
  mpfr_mul(term, a, y.rad_, MPFR_RNDU);
  mpfr_add(r.rad_, r.rad_, term, MPFR_RNDU);
  mpfr_abs(a, y.mid_, MPFR_RNDU);
  mpfr_mul(term, a, x.rad_, MPFR_RNDU);
  mpfr_add(r.rad_, r.rad_, term, MPFR_RNDU);
  mpfr_mul(term, x.rad_, y.rad_, MPFR_RNDU);
  mpfr_add(r.rad_, r.rad_, term, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball inverse(const Ball& y) {
  // lower bound of |y| must be positive
  Scratch a_lo(kRadiusPrec), y_lo(kRadiusPrec);
  mpfr_abs(a_lo, y.mid_, MPFR_RNDD);
  mpfr_sub(y_lo, a_lo, y.rad_, MPFR_RNDD);
  if (mpfr_sgn(y_lo) <= 0)
    throw DomainError("inverse: ball contains zero, escalate precision");
  Ball r((PrecisionSpec(y.bits_)));
  int t = mpfr_ui_div(r.mid_, 1, y.mid_, MPFR_RNDN);
  // |1/y - 1/ym| = |y-ym| / (|y| |ym|) <= yr / (y_lo * a_lo)
  Scratch den(kRadiusPrec);
  mpfr_mul(den, y_lo, a_lo, MPFR_RNDD);
  mpfr_div(r.rad_, y.rad_, den, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball operator/(const Ball& x, const Ball& y) { return x * inverse(y); }

Ball pow_ui(const Ball& x, unsigned long e) {
  Ball acc = Ball::exact(1, x.precision());
  Ball base(x);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

Ball log(const Ball& x) {
  Scratch lo(mpfr_get_prec(x.mid_) + kRadiusPrec);
  mpfr_sub(lo, x.mid_, x.rad_, MPFR_RNDD);
  if (mpfr_sgn(lo) <= 0)
    throw DomainError("log: enclosure not certified positive");
  Ball r((PrecisionSpec(x.bits_)));
  int t = mpfr_log(r.mid_, x.mid_, MPFR_RNDN);
  // |log x - log xm| <= xr / lo
  Scratch lo64(kRadiusPrec);
  mpfr_set(lo64, lo, MPFR_RNDD);
  mpfr_div(r.rad_, x.rad_, lo64, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball exp(const Ball& x) {
  Ball r((PrecisionSpec(x.bits_)));
  int t = mpfr_exp(r.mid_, x.mid_, MPFR_RNDN);
  // |e^x - e^xm| <= xr * e^(xm + xr)
  Scratch hi(kRadiusPrec), f(kRadiusPrec);
  mpfr_add(hi, x.mid_, x.rad_, MPFR_RNDU);
  mpfr_exp(f, hi, MPFR_RNDU);
  mpfr_mul(r.rad_, x.rad_, f, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball sqrt(const Ball& x) {
  Scratch lo(mpfr_get_prec(x.mid_) + kRadiusPrec);
  mpfr_sub(lo, x.mid_, x.rad_, MPFR_RNDD);
  if (mpfr_sgn(lo) <= 0)
    throw DomainError("sqrt: enclosure not certified positive");
  Ball r((PrecisionSpec(x.bits_)));
  int t = mpfr_sqrt(r.mid_, x.mid_, MPFR_RNDN);
  // |sqrt x - sqrt xm| <= xr / (2 sqrt(lo))
  Scratch s(kRadiusPrec);
  mpfr_set(s, lo, MPFR_RNDD);
  mpfr_sqrt(s, s, MPFR_RNDD);
  mpfr_mul_2ui(s, s, 1, MPFR_RNDD);
  mpfr_div(r.rad_, x.rad_, s, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball nearest_int_distance(const Ball& x) {
  Scratch quarter(kRadiusPrec);
  mpfr_set_ui_2exp(quarter, 1, -2, MPFR_RNDN);
  if (mpfr_cmp(x.rad_, quarter) >= 0)
    throw DomainError("nearest_int_distance: radius >= 1/4, ambiguous");
  mpfr_prec_t p = mpfr_get_prec(x.mid_);
  Scratch n(p), d(p + 8);
  mpfr_rint(n, x.mid_, MPFR_RNDN);
  int t = mpfr_sub(d, x.mid_, n, MPFR_RNDN);
  mpfr_abs(d, d, MPFR_RNDN);
  // the distance function is 1-Lipschitz, then clamp into [0, 1/2]
  Scratch lo(p + 8), hi(p + 8), half(kRadiusPrec);
  mpfr_sub(lo, d, x.rad_, MPFR_RNDD);
  if (mpfr_sgn(lo) < 0) mpfr_set_zero(lo, 1);
  mpfr_add(hi, d, x.rad_, MPFR_RNDU);
  mpfr_set_ui_2exp(half, 1, -1, MPFR_RNDN);
  if (mpfr_cmp(hi, half) > 0) mpfr_set(hi, half, MPFR_RNDU);
  if (t != 0) {
    // cover the rounding of d itself
    add_ulp_bound(hi, d, static_cast<unsigned>(p));
  }
  return Ball::from_endpoints(lo, hi, x.precision());
}

Order compare(const Ball& x, const Ball& y) {
  mpfr_prec_t p = std::max(mpfr_get_prec(x.mid_), mpfr_get_prec(y.mid_)) + 8;
  Scratch xu(p), yl(p), xl(p), yu(p);
  mpfr_add(xu, x.mid_, x.rad_, MPFR_RNDU);
  mpfr_sub(yl, y.mid_, y.rad_, MPFR_RNDD);
  if (mpfr_cmp(xu, yl) < 0) return Order::Less;
  mpfr_sub(xl, x.mid_, x.rad_, MPFR_RNDD);
  mpfr_add(yu, y.mid_, y.rad_, MPFR_RNDU);
  if (mpfr_cmp(xl, yu) > 0) return Order::Greater;
  return Order::Undecidable;
}

bool certified_less(const Ball& x, const Ball& y) {
  return compare(x, y) == Order::Less;
}

bool certified_le(const Ball& x, const Ball& y) {
  mpfr_prec_t p = std::max(mpfr_get_prec(x.mid_), mpfr_get_prec(y.mid_)) + 8;
  Scratch xu(p), yl(p);
  mpfr_add(xu, x.mid_, x.rad_, MPFR_RNDU);
  mpfr_sub(yl, y.mid_, y.rad_, MPFR_RNDD);
  return mpfr_cmp(xu, yl) <= 0;
}

std::optional<mpz_class> floor_if_certain(const Ball& x) {
  mpfr_prec_t p = mpfr_get_prec(x.mid_) + 8;
  Scratch lo(p), hi(p);
  mpfr_sub(lo, x.mid_, x.rad_, MPFR_RNDD);
  mpfr_add(hi, x.mid_, x.rad_, MPFR_RNDU);
  mpfr_floor(lo, lo);
  mpfr_floor(hi, hi);
  if (mpfr_cmp(lo, hi) != 0) return std::nullopt;
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), lo, MPFR_RNDZ);
  return z;
}

mpz_class ceil_of_upper(const Ball& x) {
  mpfr_prec_t p = mpfr_get_prec(x.mid_) + 8;
  Scratch hi(p);
  mpfr_add(hi, x.mid_, x.rad_, MPFR_RNDU);
  mpfr_ceil(hi, hi);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), hi, MPFR_RNDZ);
  return z;
}

mpz_class floor_of_lower(const Ball& x) {
  mpfr_prec_t p = mpfr_get_prec(x.mid_) + 8;
  Scratch lo(p);
  mpfr_sub(lo, x.mid_, x.rad_, MPFR_RNDD);
  mpfr_floor(lo, lo);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), lo, MPFR_RNDZ);
  return z;
}

mpz_class nearest_int_of_midpoint(const Ball& x) {
  Scratch n(mpfr_get_prec(x.mid_));
  mpfr_rint(n, x.midpoint(), MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), n, MPFR_RNDZ);
  return z;
}

Ball max(const Ball& x, const Ball& y) {
  // envelope of the pointwise max: [max(lox, loy), max(hix, hiy)]
  mpfr_prec_t p = std::max(mpfr_get_prec(x.mid_), mpfr_get_prec(y.mid_)) + 8;
  Scratch lox(p), hix(p), loy(p), hiy(p);
  mpfr_sub(lox, x.mid_, x.rad_, MPFR_RNDD);
  mpfr_add(hix, x.mid_, x.rad_, MPFR_RNDU);
  mpfr_sub(loy, y.mid_, y.rad_, MPFR_RNDD);
  mpfr_add(hiy, y.mid_, y.rad_, MPFR_RNDU);
  if (mpfr_cmp(loy, lox) > 0) mpfr_set(lox, loy, MPFR_RNDD);
  if (mpfr_cmp(hiy, hix) > 0) mpfr_set(hix, hiy, MPFR_RNDU);
  return Ball::from_endpoints(lox, hix,
                              PrecisionSpec(std::max(x.bits_, y.bits_)));
}

mpq_class rational_from_decimal(const std::string& s) {
  std::string t;
  t.reserve(s.size());
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw DomainError("rational_from_decimal: empty string");
  bool neg = false;
  std::size_t i = 0;
  if (t[i] == '+' || t[i] == '-') {
    neg = t[i] == '-';
    ++i;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false, seen_digit = false;
  for (; i < t.size() && (std::isdigit(static_cast<unsigned char>(t[i])) ||
                          t[i] == '.');
       ++i) {
    if (t[i] == '.') {
      if (seen_dot) throw DomainError("rational_from_decimal: two dots");
      seen_dot = true;
    } else {
      digits += t[i];
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    }
  }
  if (!seen_digit) throw DomainError("rational_from_decimal: no digits");
  long exp10 = 0;
  if (i < t.size()) {
    if (t[i] != 'e' && t[i] != 'E')
      throw DomainError("rational_from_decimal: bad character");
    exp10 = std::stol(t.substr(i + 1));
  }
  mpz_class num(digits, 10);
  if (neg) num = -num;
  long net = exp10 - frac_digits;
  mpq_class q(num);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10,
                static_cast<unsigned long>(net < 0 ? -net : net));
  if (net >= 0)
    q *= scale;
  else
    q /= scale;
  q.canonicalize();
  return q;
}

mpz_class integer_from_decimal(const std::string& s) {
  mpq_class q = rational_from_decimal(s);
  if (q.get_den() != 1)
    throw DomainError("integer_from_decimal: not an integer: " + s);
  return q.get_num();
}

RealValue RealValue::from_rational(const mpq_class& v, std::string id) {
  RealValue r;
  r.id = id.empty() ? "rat:" + v.get_str() : std::move(id);
  r.exact = v;
  r.eval = [v](PrecisionSpec p) { return Ball::from_rational(v, p); };
  return r;
}

RealValue RealValue::log2_over_log10() {
  RealValue r;
  r.id = "log2/log10";
  r.eval = [](PrecisionSpec p) {
    PrecisionSpec w(p.bits + 32);
    return log(Ball::exact(2, w)) / log(Ball::exact(10, w));
  };
  return r;
}

RealValue RealValue::golden_ratio() {
  RealValue r;
  r.id = "phi";
  r.eval = [](PrecisionSpec p) {
    PrecisionSpec w(p.bits + 32);
    Ball s = sqrt(Ball::exact(5, w));
    return (s + Ball::exact(1, w)) / Ball::exact(2, w);
  };
  return r;
}

RealValue RealValue::sqrt_of(unsigned long n) {
  RealValue r;
  r.id = "sqrt:" + std::to_string(n);
  r.eval = [n](PrecisionSpec p) {
    return sqrt(Ball::exact(static_cast<long>(n), PrecisionSpec(p.bits + 32)));
  };
  return r;
}

RealValue RealValue::e_minus_2() {
  RealValue r;
  r.id = "e-2";
  r.eval = [](PrecisionSpec p) {
    PrecisionSpec w(p.bits + 32);
    return exp(Ball::exact(1, w)) - Ball::exact(2, w);
  };
  return r;
}

RealValue RealValue::log10_ratio(const mpq_class& v, bool negate,
                                 std::string id) {
  if (v <= 0) throw DomainError("log10_ratio: non-positive argument");
  RealValue r;
  r.id = id.empty() ? std::string(negate ? "-" : "") + "log10:" + v.get_str()
                    : std::move(id);
  r.eval = [v, negate](PrecisionSpec p) {
    PrecisionSpec w(p.bits + 32);
    Ball num = log(Ball::from_rational(v, w));
    Ball den = log(Ball::exact(10, w));
    Ball out = num / den;
    return negate ? -out : out;
  };
  return r;
}

RealValue RealValue::integer_combination(long m, long r,
                                         const RealValue& gamma) {
  RealValue out;
  out.id = std::to_string(m) + (r >= 0 ? "-" : "+") +
           std::to_string(r >= 0 ? r : -r) + "*" + gamma.id;
  auto geval = gamma.eval;
  out.eval = [m, r, geval](PrecisionSpec p) {
    PrecisionSpec w(p.bits + 32);
    Ball g = geval(w);
    return Ball::exact(m, w) - Ball::exact(r, w) * g;
  };
  if (gamma.exact) out.exact = mpq_class(m) - mpq_class(r) * *gamma.exact;
  return out;
}

}  // namespace lucasrep
