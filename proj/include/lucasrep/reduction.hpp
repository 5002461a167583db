#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>

#include "lucasrep/arith.hpp"
#include "lucasrep/contfrac.hpp"

namespace lucasrep {

// Instance of the inequality 0 < |u gamma - v + mu| < A B^-w with
// u <= M, asked to produce an upper bound on w.
struct ReductionInstance {
  RealValue gamma;
  RealValue mu;
  RealValue A;  // positive real
  RealValue B;  // real > 1
  mpz_class M;  // bound on u
};

// r * gamma + mu = m. When exact, |u gamma - v + mu| = |(u - r) gamma - (v - m)|,
// which is what the Legendre-criterion fallback consumes.
struct IntegerRelation {
  long r = 0;
  mpz_class m;
};

struct ReductionResult {
  enum class Kind { Reduced, Degenerate };
  Kind kind = Kind::Reduced;
  std::size_t convergent_index = 0;
  mpz_class q_used;
  Ball epsilon;       // Reduced: certified > 0
  mpz_class w_bound;  // Reduced: no solution has w >= w_bound
  std::optional<IntegerRelation> relation;  // Degenerate
  std::string note;
};

struct ReduceOptions {
  int max_advance = 10;
  // Start from the first convergent with q > q_factor * M. The positivity
  // of epsilon is what the conclusion rests on, so a smaller factor is
  // admissible; 6 makes epsilon > 0 likely on the first try.
  unsigned q_factor = 6;
  PrecisionSpec start = PrecisionSpec();
  unsigned cap = PrecisionSpec::kCeiling;
  ExpansionCache* cache = nullptr;
  bool scan_relations = true;
};

// Shared per-gamma state: the expansion, its convergents and the certified
// ||gamma q_i|| values. Reuse one context for a batch of instances with the
// same gamma. Not safe for concurrent use; give each worker its own.
class GammaContext {
 public:
  explicit GammaContext(RealValue gamma, const ExpandOptions& opt = {});

  const RealValue& gamma() const { return gamma_; }
  const Convergent& at(std::size_t index);
  std::size_t first_index_exceeding(const mpz_class& bound);
  // enclosure of ||gamma * q_index||; nullopt if the precision is too low
  std::optional<Ball> gamma_q_distance(std::size_t index, PrecisionSpec p);

 private:
  void ensure(std::size_t count);

  RealValue gamma_;
  ExpandOptions opt_;
  CFExpansion expansion_;
  std::vector<Convergent> convergents_;
  std::map<std::pair<std::size_t, unsigned>, Ball> distances_;
};

// Certified search for an integer relation r*gamma + mu = m with |r| <= max_r.
// A relation is reported when the residual is below 2^-(bits/2) at >= 1024
// bits; a certified nonzero residual rules the candidate out.
std::optional<IntegerRelation> scan_integer_relation(const RealValue& gamma,
                                                     const RealValue& mu,
                                                     long max_r = 16,
                                                     unsigned cap = 1u << 13);

// The reduction: pick the first convergent with q > q_factor*M, certify
// epsilon = ||mu q|| - M ||gamma q|| > 0 (advancing on failure up to
// max_advance times), and return w_bound = ceil(log(A q / eps)/log B)
// computed outward, so that no solution has w >= w_bound.
ReductionResult dp_reduce(const ReductionInstance& inst,
                          const ReduceOptions& opt = {},
                          GammaContext* ctx = nullptr);

// Fallback for degenerate mu: from 0 < |u' gamma - v'| < A B^-w, u' <= M,
// either B^w < 2 A u' or v'/u' reduces to a convergent p/q and
// B^w < A (a_max + 2) M with a_max over denominators <= M. Returns W such
// that no solution has w >= W.
mpz_class legendre_bound(const RealValue& gamma, const mpz_class& M,
                         const RealValue& A, const RealValue& B,
                         const ReduceOptions& opt = {});

}  // namespace lucasrep
