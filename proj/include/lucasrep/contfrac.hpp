#pragma once

#include <gmpxx.h>

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lucasrep/arith.hpp"

namespace lucasrep {

// Certified continued-fraction expansion: every quotient in the certified
// prefix is the true floor of the corresponding remainder for every value
// enclosed by the input. Re-expansion at higher precision extends, never
// contradicts, the prefix.
struct CFExpansion {
  std::string value_id;
  unsigned precision_bits = 0;  // 0 for exact rational input
  std::vector<mpz_class> quotients;
  std::size_t certified_count = 0;
};

struct Convergent {
  std::size_t index = 0;
  mpz_class p;
  mpz_class q;
};

// One file per expansion: a `value_id, precision_bits, certified_count`
// header followed by the quotients, one per line. Writes are atomic
// (write to a temporary, then rename) so concurrent workers can share a
// directory. Loaded expansions are re-certified by the caller.
class ExpansionCache {
 public:
  ExpansionCache() = default;  // disabled
  explicit ExpansionCache(std::filesystem::path dir);

  bool enabled() const { return !dir_.empty(); }
  std::optional<CFExpansion> load(const std::string& value_id) const;
  void store(const CFExpansion& e) const;
  std::filesystem::path path_for(const std::string& value_id) const;

 private:
  std::filesystem::path dir_;
  mutable std::mutex mutex_;
};

struct ExpandOptions {
  PrecisionSpec start = PrecisionSpec();
  unsigned cap = PrecisionSpec::kCeiling;
  ExpansionCache* cache = nullptr;
};

// At least `want` certified quotients, escalating precision internally.
CFExpansion expand(const RealValue& x, std::size_t want,
                   const ExpandOptions& opt = {});

// (p_i, q_i) by the standard three-term recurrence. i < certified_count.
Convergent convergent(const CFExpansion& e, std::size_t i);

// All convergents with index < count (count capped at certified_count).
std::vector<Convergent> convergents(const CFExpansion& e, std::size_t count);

// The least-index convergent with q > bound.
Convergent first_q_exceeding(const RealValue& x, const mpz_class& bound,
                             const ExpandOptions& opt = {});

// max of a_1 ... a_(index_limit - 1).
mpz_class max_partial_quotient(const RealValue& x, std::size_t index_limit,
                               const ExpandOptions& opt = {});

// max quotient relevant to convergents with denominator <= bound, i.e.
// max of a_1 ... a_j where j is the least index with q_j > bound.
// Returns {a_max, j}.
std::pair<mpz_class, std::size_t> max_quotient_for_denominators_below(
    const RealValue& x, const mpz_class& bound, const ExpandOptions& opt = {});

}  // namespace lucasrep
