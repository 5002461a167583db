#include "lucasrep/algebraic.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <utility>

namespace lucasrep {

namespace {

void check_order(int k) {
  if (k < 2) throw DomainError("order k must be >= 2");
}

// G(x) = 1 - x^k (2 - x); for x > 1 it has the sign of Psi_k(x) since
// (x - 1) Psi_k(x) = 1 - x^k (2 - x). Much cheaper to evaluate than Psi_k.
Ball g_eval(int k, const Ball& x) {
  Ball two = Ball::exact(2, x.precision());
  return Ball::exact(1, x.precision()) -
         pow_ui(x, static_cast<unsigned long>(k)) * (two - x);
}

// G'(x) = x^(k-1) ((k+1) x - 2k)
Ball g_deriv(int k, const Ball& x) {
  Ball lin = Ball::exact(k + 1, x.precision()) * x -
             Ball::exact(2 * k, x.precision());
  return pow_ui(x, static_cast<unsigned long>(k - 1)) * lin;
}

int certified_sign_at(int k, const mpq_class& point, unsigned start_bits) {
  return escalate(PrecisionSpec(std::max(start_bits, PrecisionSpec::kMinBits)),
                  PrecisionSpec::kCeiling,
                  [&](PrecisionSpec p) -> std::optional<int> {
                    Ball g = g_eval(k, Ball::from_rational(point, p));
                    if (g.is_positive()) return 1;
                    if (g.is_negative()) return -1;
                    return std::nullopt;
                  });
}

struct RootCache {
  std::shared_mutex mutex;
  std::map<std::pair<int, unsigned>, Ball> entries;
};

RootCache& root_cache() {
  static RootCache cache;
  return cache;
}

}  // namespace

Ball psi_eval(int k, const Ball& x) {
  check_order(k);
  Ball one = Ball::exact(1, x.precision());
  Ball xm1 = x - one;
  if (!xm1.contains_zero()) {
    Ball xk = pow_ui(x, static_cast<unsigned long>(k));
    return xk - (xk - one) / xm1;
  }
  Ball acc = one;
  for (int i = 0; i < k; ++i) acc = acc * x - one;
  return acc;
}

DominantRoot dominant_root(int k, PrecisionSpec prec) {
  check_order(k);
  {
    std::shared_lock lock(root_cache().mutex);
    auto it = root_cache().entries.find({k, prec.bits});
    if (it != root_cache().entries.end()) return {k, it->second};
  }

  // exact bracket (2 (1 - 2^-k), 2); G < 0 at the left end, G(2) = 1
  mpq_class lo = 2 - mpq_class(mpz_class(2), mpz_class(1) << k);
  mpq_class hi = 2;
  unsigned work = prec.bits + 64;
  if (certified_sign_at(k, lo, work) >= 0)
    throw CertificationError("dominant_root: left bracket sign failed");

  // bisection with exact rational endpoints down to ~2^-80
  for (int it = 0; it < 82; ++it) {
    mpq_class mid = (lo + hi) / 2;
    if (certified_sign_at(k, mid, work) < 0)
      lo = mid;
    else
      hi = mid;
  }

  // interval Newton: X <- (m - G(m)/G'(X)) ∩ X, quadratic until target
  mpq_class target(mpz_class(1) << 8, mpz_class(1) << prec.bits);
  unsigned eval_bits = 192;
  while (hi - lo > target) {
    eval_bits = std::min<unsigned>(eval_bits * 2 + 64, prec.bits + 64);
    PrecisionSpec ep(eval_bits);
    mpq_class m = (lo + hi) / 2;
    Ball X = Ball::from_rational_interval(lo, hi, ep);
    Ball gm = g_eval(k, Ball::from_rational(m, ep));
    Ball gp = g_deriv(k, X);
    Ball N = Ball::from_rational(m, ep) - gm / gp;
    mpq_class nlo = N.lower_rational(), nhi = N.upper_rational();
    mpq_class new_lo = std::max(lo, nlo), new_hi = std::min(hi, nhi);
    if (new_lo > new_hi)
      throw CertificationError("dominant_root: empty Newton intersection");
    if (new_hi - new_lo >= hi - lo) {
      // not contracting at this evaluation precision; fall back to bisection
      mpq_class mid = (lo + hi) / 2;
      if (certified_sign_at(k, mid, eval_bits) < 0)
        lo = mid;
      else
        hi = mid;
      continue;
    }
    lo = new_lo;
    hi = new_hi;
  }

  // endpoint sign certificates for the returned enclosure
  if (certified_sign_at(k, lo, prec.bits) >= 0 ||
      certified_sign_at(k, hi, prec.bits) <= 0)
    throw CertificationError("dominant_root: endpoint signs not certified");

  Ball alpha = Ball::from_rational_interval(lo, hi, prec);
  {
    std::unique_lock lock(root_cache().mutex);
    root_cache().entries.emplace(std::make_pair(k, prec.bits), alpha);
  }
  return {k, alpha};
}

Ball fk_at_alpha(int k, const DominantRoot& root) {
  check_order(k);
  if (root.k != k) throw DomainError("fk_at_alpha: root order mismatch");
  PrecisionSpec p = root.alpha.precision();
  Ball num = root.alpha - Ball::exact(1, p);
  Ball den = Ball::exact(2, p) +
             Ball::exact(k + 1, p) * (root.alpha - Ball::exact(2, p));
  if (den.contains_zero())
    throw DomainError("fk_at_alpha: denominator contains zero");
  return num / den;
}

Ball dominant_weight(int k, PrecisionSpec prec) {
  return escalate(prec, PrecisionSpec::kCeiling,
                  [&](PrecisionSpec p) -> std::optional<Ball> {
                    DominantRoot r = dominant_root(k, p);
                    try {
                      Ball f = fk_at_alpha(k, r);
                      Ball w = f * (Ball::exact(2, p) * r.alpha -
                                    Ball::exact(1, p));
                      return w;
                    } catch (const DomainError&) {
                      return std::nullopt;
                    }
                  });
}

RealValue tau_of(int k) {
  check_order(k);
  RealValue r;
  r.id = "tau:k=" + std::to_string(k);
  r.eval = [k](PrecisionSpec p) {
    PrecisionSpec w(p.bits + 32);
    DominantRoot root = dominant_root(k, w);
    return log(root.alpha) / log(Ball::exact(10, w));
  };
  return r;
}

RealValue log10_weight_times(int k, const mpq_class& scale) {
  check_order(k);
  if (scale <= 0) throw DomainError("log10_weight_times: scale must be > 0");
  RealValue r;
  r.id = "log10(w[k=" + std::to_string(k) + "]*" + scale.get_str() + ")";
  r.eval = [k, scale](PrecisionSpec p) {
    PrecisionSpec w(p.bits + 32);
    Ball v = dominant_weight(k, w) * Ball::from_rational(scale, w);
    return log(v) / log(Ball::exact(10, w));
  };
  return r;
}

bool exact_weight_relation(int k, const mpq_class& s, long r,
                           const mpz_class& m) {
  check_order(k);
  if (s <= 0) return false;
  // alpha^r (2a-1)(a-1) s = 10^m (2 + (k+1)(a-2)), cleared of negative powers:
  //   s (2x-1)(x-1) x^max(r,0)  -  10^m ((k+1)x - 2k) x^max(-r,0)  = 0 mod Psi_k
  unsigned long rl = r > 0 ? static_cast<unsigned long>(r) : 0;
  unsigned long rr = r < 0 ? static_cast<unsigned long>(-r) : 0;
  mpq_class tens;
  {
    mpz_class mm = m >= 0 ? m : -m;
    if (!mm.fits_ulong_p()) return false;
    mpz_class p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, mm.get_ui());
    tens = m >= 0 ? mpq_class(p10) : mpq_class(1, p10);
  }
  std::size_t deg = std::max<std::size_t>(rl + 2, rr + 1);
  std::vector<mpq_class> poly(deg + 1, mpq_class(0));
  // s (2x-1)(x-1) x^rl = s (2x^2 - 3x + 1) x^rl
  poly[rl + 2] += 2 * s;
  poly[rl + 1] += -3 * s;
  poly[rl] += s;
  // - 10^m ((k+1) x - 2k) x^rr
  poly[rr + 1] -= tens * (k + 1);
  poly[rr] += tens * (2 * k);
  // reduce modulo Psi_k: x^k = x^(k-1) + ... + x + 1
  for (std::size_t d = poly.size(); d-- > static_cast<std::size_t>(k);) {
    if (poly[d] == 0) continue;
    mpq_class c = poly[d];
    poly[d] = 0;
    for (int i = 1; i <= k; ++i) poly[d - static_cast<std::size_t>(i)] += c;
  }
  for (std::size_t d = 0; d < std::min<std::size_t>(poly.size(),
                                                    static_cast<std::size_t>(k));
       ++d)
    if (poly[d] != 0) return false;
  return true;
}

Ball height_rational(const mpz_class& num, const mpz_class& den,
                     PrecisionSpec prec) {
  if (den <= 0) throw DomainError("height_rational: denominator must be > 0");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (g != 1) throw DomainError("height_rational: arguments not coprime");
  mpz_class a = ::abs(num);
  mpz_class mx = a > den ? a : den;
  if (mx == 1) return Ball::exact(0, prec);
  return log(Ball::from_integer(mx, prec));
}

Ball matveev_height(unsigned field_degree, const Ball& height,
                    const Ball& log_abs) {
  PrecisionSpec p = height.precision();
  Ball dh = Ball::exact(static_cast<long>(field_degree), p) * height;
  Ball floor016 = Ball::from_rational(mpq_class(16, 100), p);
  return max(max(dh, abs(log_abs)), floor016);
}

void MatveevInput::validate() const {
  if (t < 1 || heights.size() != t)
    throw DomainError("MatveevInput: t and heights mismatch");
  if (field_degree < 1) throw DomainError("MatveevInput: field degree < 1");
  if (coeff_bound < 1) throw DomainError("MatveevInput: B < 1");
  for (const Ball& a : heights)
    if (a.upper_rational() < mpq_class(16, 100))
      throw DomainError("MatveevInput: height measure below 0.16");
}

Ball matveev_bound(const MatveevInput& in) {
  in.validate();
  PrecisionSpec p = in.heights.front().precision();
  Ball t = Ball::exact(static_cast<long>(in.t), p);
  mpz_class pow30;
  mpz_ui_pow_ui(pow30.get_mpz_t(), 30, in.t + 3);
  Ball kt = -Ball::from_rational(mpq_class(14, 10), p) *
            Ball::from_integer(pow30, p) * pow_ui(t, 4) * sqrt(t);
  Ball d = Ball::exact(static_cast<long>(in.field_degree), p);
  Ball one = Ball::exact(1, p);
  Ball out = kt * d * d * (one + log(d)) *
             (one + log(Ball::from_integer(in.coeff_bound, p)));
  for (const Ball& a : in.heights) out = out * a;
  return out;
}

Ball guzman_bound(unsigned m, const Ball& T) {
  if (m < 1) throw DomainError("guzman_bound: m must be >= 1");
  PrecisionSpec p = T.precision();
  mpz_class hyp;  // (4 m^2)^m
  mpz_ui_pow_ui(hyp.get_mpz_t(), 4ul * m * m, m);
  if (!certified_less(Ball::from_integer(hyp, p), T))
    throw DomainError("guzman_bound: hypothesis T > (4m^2)^m not certified");
  mpz_class two_m;
  mpz_ui_pow_ui(two_m.get_mpz_t(), 2, m);
  return Ball::from_integer(two_m, p) * T * pow_ui(log(T), m);
}

namespace {

Ball log_of_int(long v, PrecisionSpec p) {
  return log(Ball::exact(v, p));
}

}  // namespace

mpz_class bound_dgap_initial(int k, const mpz_class& n) {
  check_order(k);
  if (n < 3) throw DomainError("bound_dgap_initial: n must be >= 3");
  PrecisionSpec p;
  Ball c = Ball::from_integer(mpz_class("4800000000000"), p);  // 4.8e12
  Ball lk = log_of_int(k, p);
  Ball v = c * pow_ui(Ball::exact(k, p), 4) * lk * lk *
           log(Ball::from_integer(n - 1, p));
  return ceil_of_upper(v);
}

mpz_class bound_n_initial(int k) {
  check_order(k);
  PrecisionSpec p;
  mpz_class c13("1300000000000000000000000000000");  // 1.3e30
  Ball v = Ball::from_integer(c13, p) * pow_ui(Ball::exact(k, p), 8) *
           pow_ui(log_of_int(k, p), 5);
  return ceil_of_upper(v);
}

mpz_class bound_n_a0(int k) {
  check_order(k);
  PrecisionSpec p;
  mpz_class c21("210000000000000000");  // 2.1e17
  Ball v = Ball::from_integer(c21, p) * pow_ui(Ball::exact(k, p), 4) *
           pow_ui(log_of_int(k, p), 4);
  return ceil_of_upper(v);
}

bool certify_linear_dominates(const Ball& c, const std::vector<Ball>& poly,
                              const mpz_class& x0, PrecisionSpec prec) {
  if (poly.empty() || poly.size() > 4)
    throw DomainError("certify_linear_dominates: degree must be <= 3");
  if (x0 < 8) throw DomainError("certify_linear_dominates: x0 too small");
  for (const Ball& pj : poly)
    if (pj.lower_rational() < 0)
      throw DomainError("certify_linear_dominates: negative coefficient");
  Ball L = log(Ball::from_integer(x0, prec));
  Ball value = Ball::exact(0, prec);
  Ball deriv = Ball::exact(0, prec);
  for (std::size_t j = 0; j < poly.size(); ++j) {
    value = value + poly[j] * pow_ui(L, j);
    if (j >= 1)
      deriv = deriv + Ball::exact(static_cast<long>(j), prec) * poly[j] *
                          pow_ui(L, j - 1);
  }
  Ball cx = c * Ball::from_integer(x0, prec);
  // c*x0 > P(log x0) and c*x0 > P'(log x0): the second makes the gap grow
  // with x (each log^j/x term is decreasing for x >= e^j).
  return certified_less(value, cx) && certified_less(deriv, cx);
}

}  // namespace lucasrep
