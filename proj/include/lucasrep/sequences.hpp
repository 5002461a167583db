#pragma once

#include <gmpxx.h>

#include <deque>
#include <utility>
#include <vector>

#include "lucasrep/arith.hpp"

namespace lucasrep {

// Order-k recurrence L(n) = L(n-1) + ... + L(n-k) with initial values
// L(2-k) = ... = L(-1) = 0, L(0) = 2, L(1) = 1.

// Exact term for any n >= 2-k (indices in [2-k, -1] return 0).
mpz_class lucas_term(int k, long n);

// All (n, L(n)) for n in [1, n_max].
std::vector<std::pair<long, mpz_class>> lucas_stream(int k, long n_max);

// 3 * 2^(n-2), the closed form of L(n) for 2 <= n <= k. Requires n >= 2.
mpz_class power_form_term(long n);

// Sliding window over the sequence: O(1) big-integer work per step via a
// running sum (subtract the evicted term, add the new one).
class LucasStream {
 public:
  explicit LucasStream(int k);

  // advances to the next index and returns (n, L(n)); starts at n = 2
  std::pair<long, const mpz_class&> next();

  long next_index() const { return n_; }

 private:
  int k_;
  long n_;
  std::deque<mpz_class> window_;  // L(n-k) ... L(n-1)
  mpz_class sum_;                 // sum of the window
  mpz_class current_;
};

}  // namespace lucasrep
