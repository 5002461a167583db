#include "lucasrep/sequences.hpp"

namespace lucasrep {

namespace {

void check_order(int k) {
  if (k < 2) throw DomainError("sequence order k must be >= 2");
}

}  // namespace

LucasStream::LucasStream(int k) : k_(k), n_(2) {
  check_order(k);
  // window holds L(2-k) ... L(1) = 0, ..., 0, 2, 1
  for (int i = 0; i < k - 2; ++i) window_.emplace_back(0);
  window_.emplace_back(2);
  window_.emplace_back(1);
  sum_ = 3;  // 2 + 1
}

std::pair<long, const mpz_class&> LucasStream::next() {
  current_ = sum_;
  sum_ += current_;
  sum_ -= window_.front();
  window_.pop_front();
  window_.push_back(current_);
  return {n_++, current_};
}

mpz_class lucas_term(int k, long n) {
  check_order(k);
  if (n < 2 - static_cast<long>(k))
    throw DomainError("lucas_term: index below 2-k");
  if (n < 0) return 0;
  if (n == 0) return 2;
  if (n == 1) return 1;
  LucasStream s(k);
  mpz_class v;
  for (long i = 2; i <= n; ++i) v = s.next().second;
  return v;
}

std::vector<std::pair<long, mpz_class>> lucas_stream(int k, long n_max) {
  check_order(k);
  if (n_max < 1) throw DomainError("lucas_stream: n_max must be >= 1");
  std::vector<std::pair<long, mpz_class>> out;
  out.reserve(static_cast<std::size_t>(n_max));
  out.emplace_back(1, mpz_class(1));
  LucasStream s(k);
  for (long n = 2; n <= n_max; ++n) {
    auto [idx, v] = s.next();
    out.emplace_back(idx, v);
  }
  return out;
}

mpz_class power_form_term(long n) {
  if (n < 2) throw DomainError("power_form_term: n must be >= 2");
  mpz_class v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, static_cast<unsigned long>(n - 2));
  return 3 * v;
}

}  // namespace lucasrep
