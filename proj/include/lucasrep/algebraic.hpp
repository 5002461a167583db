#pragma once

#include <gmpxx.h>

#include <vector>

#include "lucasrep/arith.hpp"

namespace lucasrep {

// The unique real root of Psi_k(x) = x^k - x^(k-1) - ... - x - 1 outside the
// unit circle, certified to lie in (2(1 - 2^-k), 2) with a sign change of
// Psi_k across the ball.
struct DominantRoot {
  int k = 0;
  Ball alpha;
};

// Enclosure of Psi_k(x). Uses the closed form x^k - (x^k - 1)/(x - 1) when
// the ball is certified away from 1, plain Horner otherwise.
Ball psi_eval(int k, const Ball& x);

// Certified root isolation: bisection on the exact bracket, then interval
// Newton. Radius of the result is at most 2^(8 - prec.bits). Roots are
// memoized per (k, bits); the cache is safe for concurrent use.
DominantRoot dominant_root(int k, PrecisionSpec prec = PrecisionSpec());

// f_k(x) = (x - 1)/(2 + (k+1)(x - 2)) evaluated at the dominant root.
// Throws DomainError when the denominator ball straddles zero.
Ball fk_at_alpha(int k, const DominantRoot& root);

// f_k(alpha) * (2 alpha - 1), the weight of the dominant term of L(n).
// Escalates internally until the denominator is certified nonzero.
Ball dominant_weight(int k, PrecisionSpec prec = PrecisionSpec());

// tau_k = log(alpha(k)) / log(10) as a re-evaluable value.
RealValue tau_of(int k);

// log(dominant_weight(k) * scale) / log(10); the shifts mu of the per-k
// reduction instances. scale must be a positive rational.
RealValue log10_weight_times(int k, const mpq_class& scale);

// Exact test of the relation alpha^r * f_k(alpha)(2 alpha - 1) * s = 10^m,
// decided by polynomial reduction modulo Psi_k. This is what certifies the
// degenerate reduction instances (e.g. k = 2, where the weight equals alpha).
bool exact_weight_relation(int k, const mpq_class& s, long r,
                           const mpz_class& m);

// h(p/q) = log max(|p|, q) for a rational in lowest terms, q > 0.
Ball height_rational(const mpz_class& num, const mpz_class& den,
                     PrecisionSpec prec = PrecisionSpec());

// max(d_K * h, |log|, 0.16) — the height measure fed to the lower bound.
Ball matveev_height(unsigned field_degree, const Ball& height,
                    const Ball& log_abs);

struct MatveevInput {
  unsigned t = 1;             // number of logarithms
  unsigned field_degree = 1;  // d_K
  mpz_class coeff_bound = 1;  // B >= max |b_i|
  std::vector<Ball> heights;  // A_1 ... A_t, each >= 0.16

  void validate() const;
};

// K(t) d_K^2 (1 + log d_K)(1 + log B) A_1...A_t with
// K(t) = -1.4 * 30^(t+3) * t^4.5; log|Lambda| exceeds this when Lambda != 0.
Ball matveev_bound(const MatveevInput& in);

// x/(log x)^m < T implies x < 2^m T (log T)^m, valid for T > (4 m^2)^m.
Ball guzman_bound(unsigned m, const Ball& T);

// Ceiling of 4.8e12 * k^4 * (log k)^2 * log(n - 1).
mpz_class bound_dgap_initial(int k, const mpz_class& n);

// Ceiling of 1.3e30 * k^8 * (log k)^5 — the per-k search bound M_k.
mpz_class bound_n_initial(int k);

// Ceiling of 2.1e17 * k^4 * (log k)^4 — the a = 0 analogue.
mpz_class bound_n_a0(int k);

// Certifies c * x > p0 + p1 L + p2 L^2 + p3 L^3 (L = log x) for every
// x >= x0, given nonnegative coefficients. Checks the inequality and the
// derivative condition at x0; both sides evaluated as balls.
bool certify_linear_dominates(const Ball& c, const std::vector<Ball>& poly,
                              const mpz_class& x0,
                              PrecisionSpec prec = PrecisionSpec());

}  // namespace lucasrep
