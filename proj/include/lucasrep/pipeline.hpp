#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "lucasrep/algebraic.hpp"
#include "lucasrep/digits.hpp"
#include "lucasrep/reduction.hpp"
#include "lucasrep/sequences.hpp"

namespace lucasrep {

struct SolutionRecord {
  int k = 0;
  long n = 0;
  mpz_class value;
  std::vector<AlmostRepdigitForm> forms;

  bool operator==(const SolutionRecord& o) const {
    return k == o.k && n == o.n && value == o.value;
  }
};

// One entry of the per-k audit trail: a case id with its inputs and the
// certified outputs, all as printable strings.
struct CaseStep {
  std::string id;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, std::string>> outputs;
};

enum class RunStatus { Complete, BoundOnly, Failed };

struct PipelineReport {
  int k = 0;
  std::vector<CaseStep> case_trace;
  long window_lo = 0;
  long window_hi = 0;
  mpz_class m_k;         // initial bound on n
  long dgap_bound = 0;   // certified bound on d1 - d2
  long n_bound = 0;      // certified bound on n (n_L)
  std::vector<SolutionRecord> solutions;
  RunStatus status = RunStatus::Failed;
  std::string failure;
  double elapsed_ms = 0.0;
};

struct RunConfig {
  int k_min = 2;
  int k_max = 100;
  long search_budget = 1000;
  unsigned precision_start = PrecisionSpec::kDefaultStart;
  unsigned precision_cap = PrecisionSpec::kCeiling;
  std::filesystem::path cache_dir;  // empty disables the disk cache
  int jobs = 1;
  int max_advance = 10;
};

struct VerificationReport {
  int k_min = 2;
  int k_max = 2;
  long search_budget = 0;
  std::vector<PipelineReport> per_k;
  std::vector<SolutionRecord> solutions;
  bool all_complete = false;
  bool matches_expected = false;
  double elapsed_ms = 0.0;
};

// Options shared by the per-k reduction stages.
struct PerKOptions {
  PrecisionSpec start = PrecisionSpec();
  unsigned cap = PrecisionSpec::kCeiling;
  ExpansionCache* cache = nullptr;
  int max_advance = 10;
  unsigned q_factor = 6;
};

// The six admissible records of the verified classification, restricted to
// [k_min, k_max] and sorted by (k, n).
std::vector<SolutionRecord> expected_solutions(int k_min, int k_max);

// Terms with n <= k are 3*2^(n-2); searches 2 <= n <= min(k, 69) for
// almost-repdigit values with at least three digits. Emptiness is verified,
// not assumed.
std::vector<SolutionRecord> case_small_n(int k);

// Certified bound G on d1 - d2 for the digit pair (k, a), via the reduction
// of the first linear form (A = 174/log 10, B = 10) or, for degenerate
// shifts, the Legendre-criterion fallback.
long reduce_gamma1(int k, int a, const mpz_class& M, const PerKOptions& opt,
                   GammaContext* ctx = nullptr, CaseStep* trace = nullptr);

// Certified bound n_L(k) on n: maximum over the (d1-d2, a, b) grid of the
// per-instance bound from the second linear form (A = 5/log 10, B = alpha).
long reduce_gamma2(int k, long dgap_max, const mpz_class& M,
                   const PerKOptions& opt, GammaContext* ctx = nullptr,
                   CaseStep* trace = nullptr);

// Exhaustive scan of 6 <= n <= n_max for terms with >= 3 digits that are
// almost repdigits.
std::vector<SolutionRecord> brute_search(int k, long n_max);

// Exhaustive scan for terms equal to b * 10^d2 (>= 3 digits).
std::vector<SolutionRecord> case_a0(int k, long n_max);

// Full per-k run: case split, bound chain, searches, validation.
PipelineReport run_single_k(int k, const RunConfig& cfg,
                            ExpansionCache* cache = nullptr);

// Per-k analyses over [k_min, k_max], parallelized over cfg.jobs workers,
// merged deterministically by k, compared against the expected solutions.
VerificationReport verify_theorem(const RunConfig& cfg);

// ---- the k > 470 constant chain ----

struct ChainStep {
  std::string name;
  std::string formula;
  std::string value;
  bool certified = false;
};

struct BoundChain {
  std::vector<ChainStep> steps;
  mpz_class final_k_bound;  // certified: any solution would need k below this
  bool certified = false;   // every link certified
};

struct LargeKOptions {
  // record failures instead of throwing
  bool report_only = false;
  std::filesystem::path cache_dir;
  int max_advance = 10;
};

// Reproduces the constant chain that closes the k > 470 case: the Matveev
// instances, two reduction rounds (with the Legendre fallback for the three
// degenerate digit triples), the power-form case and the a = 0 chain,
// ending in a certified k bound below 470.
BoundChain large_k_analysis(const LargeKOptions& opt = {});

}  // namespace lucasrep
