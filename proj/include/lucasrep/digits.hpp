#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace lucasrep {

// Decimal shape a*(10^d1 - 1)/9 + (b - a)*10^d2: d1 digits all equal to the
// repeated digit a except the one at position d2 (units = 0), which is b.
struct AlmostRepdigitForm {
  int a = 0;   // repeated digit, 0..9
  int b = 0;   // exceptional digit, 0..9
  long d1 = 1;  // total digit count, >= 1
  long d2 = 0;  // position of the exceptional digit, 0 <= d2 < d1

  bool operator==(const AlmostRepdigitForm&) const = default;
};

// Exact integer value of the form (no validity checks beyond field ranges).
mpz_class eval_form(const AlmostRepdigitForm& f);

// True iff the decimal digits of N are all equal except for at most one
// position. Numbers with at most two digits qualify trivially.
bool is_almost_repdigit(const mpz_class& n);

// Every valid form encoding N, sorted by (a, b, d2). Pure repdigits are
// canonicalized to the single form b = a, d2 = 0. Empty iff N is not an
// almost repdigit.
std::vector<AlmostRepdigitForm> decompose(const mpz_class& n);

// Digit count of N in base 10.
long decimal_digits(const mpz_class& n);

std::string to_string(const AlmostRepdigitForm& f);

}  // namespace lucasrep
