#include "lucasrep/digits.hpp"

#include <algorithm>
#include <array>

#include "lucasrep/arith.hpp"

namespace lucasrep {

mpz_class eval_form(const AlmostRepdigitForm& f) {
  mpz_class p1, p2;
  mpz_ui_pow_ui(p1.get_mpz_t(), 10, static_cast<unsigned long>(f.d1));
  mpz_ui_pow_ui(p2.get_mpz_t(), 10, static_cast<unsigned long>(f.d2));
  return f.a * (p1 - 1) / 9 + (f.b - f.a) * p2;
}

long decimal_digits(const mpz_class& n) {
  if (n == 0) return 1;
  mpz_class a = ::abs(n);
  return static_cast<long>(a.get_str().size());
}

bool is_almost_repdigit(const mpz_class& n) {
  if (n < 1) throw DomainError("is_almost_repdigit: N must be positive");
  std::string s = n.get_str();
  std::array<int, 10> count{};
  for (char c : s) ++count[c - '0'];
  int distinct = 0, min_nonzero = static_cast<int>(s.size());
  for (int c : count) {
    if (c > 0) {
      ++distinct;
      min_nonzero = std::min(min_nonzero, c);
    }
  }
  if (distinct <= 1) return true;
  return distinct == 2 && min_nonzero == 1;
}

std::vector<AlmostRepdigitForm> decompose(const mpz_class& n) {
  if (n < 1) throw DomainError("decompose: N must be positive");
  std::string s = n.get_str();  // most significant digit first
  long d1 = static_cast<long>(s.size());

  bool uniform = std::all_of(s.begin(), s.end(),
                             [&](char c) { return c == s[0]; });
  if (uniform) {
    // canonical single form for pure repdigits
    return {{s[0] - '0', s[0] - '0', d1, 0}};
  }

  std::vector<AlmostRepdigitForm> out;
  for (long pos = 0; pos < d1; ++pos) {
    // hypothesis: the digit at position pos (units = 0) is the exception
    std::size_t si = static_cast<std::size_t>(d1 - 1 - pos);
    int a = -1;
    bool ok = true;
    for (std::size_t j = 0; j < s.size() && ok; ++j) {
      if (j == si) continue;
      int d = s[j] - '0';
      if (a < 0)
        a = d;
      else if (d != a)
        ok = false;
    }
    if (!ok) continue;
    int b = s[si] - '0';
    out.push_back({a, b, d1, pos});
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return std::tie(x.a, x.b, x.d2) < std::tie(y.a, y.b, y.d2);
  });
  return out;
}

std::string to_string(const AlmostRepdigitForm& f) {
  return "(a=" + std::to_string(f.a) + ", b=" + std::to_string(f.b) +
         ", d1=" + std::to_string(f.d1) + ", d2=" + std::to_string(f.d2) + ")";
}

}  // namespace lucasrep
