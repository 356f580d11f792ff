#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qric/channels.h"

namespace qric {

/// tr(S^{mn} rho) for all (m, n), row-major.
struct StabilizerTable {
  int d = 0;
  std::vector<cplx> values;

  /// max |value - 1|
  double max_deviation() const;
};

StabilizerTable stabilizer_suite(const PureState& state, int N);
StabilizerTable stabilizer_suite(const DensityOperator& rho, int N);

/// General channel with k_even = 0, P = 1/d^{N-1}, u = 0 against ghz_channel.
double ghz_reduction_deviation(int d, int N);

struct EquivalenceResult {
  double overlap = 0.0;  // |<telecloning renamed | beta-weighted>|
  bool pass = false;     // overlap = 1 for d = 2, < 1 - 1e-6 otherwise
};

EquivalenceResult telecloning_beta_equivalence(int d, int N, double tol = 1e-9);

struct UnlockEntry {
  std::vector<std::pair<int, int>> outcomes;  // GBMs on (A'_s, s'), s = 2..N
  double probability = 0.0;
  double purity = 0.0;
  double entropy_bits = 0.0;  // of A'_1 in the conditional pair state
  int bell_m = 0;
  int bell_n = 0;
  double bell_fidelity = 0.0;  // <B^{mn}| rho |B^{mn}> for the best (m, n)
};

struct UnlockReport {
  int d = 0;
  int N = 0;
  std::vector<UnlockEntry> entries;
};

/// Every outcome of the joint GBMs on the smolin-like state (density form).
UnlockReport unlock_ubes(int d, int N);
/// One Born-rule draw of the outcomes.
UnlockReport unlock_ubes(int d, int N, Rng& rng);

/// Partial transpose over `cut.group_b`.
Matrix partial_transpose(const DensityOperator& rho, const std::vector<std::string>& group_b);
double ppt_min_eigenvalue(const DensityOperator& rho, const Cut& cut);

/// Cuts that keep each pair (A'_s, s') together: every split of the pairs into
/// two non-empty groups, first pair always in group A.
std::vector<Cut> pair_grouping_cuts(int N);

struct SwapDistance {
  std::string a;
  std::string b;
  double distance = 0.0;
};

struct SymmetryReport {
  std::vector<SwapDistance> within_g1;  // A'_i <-> A'_j
  std::vector<SwapDistance> within_g2;  // i' <-> j'
  SwapDistance cross;                   // A'_1 <-> 1'

  double max_within() const;
};

SymmetryReport symmetry_report(const DensityOperator& rho, int N);

struct SpectrumSummary {
  std::size_t rank = 0;
  double flat_deviation = 0.0;  // max |lambda - 1/rank| over the nonzero eigenvalues
  double min_eigenvalue = 0.0;
};

SpectrumSummary spectrum_summary(const DensityOperator& rho, double tol = kTolerance);

struct FingerprintReport {
  std::vector<double> entropies_one;  // every 1-vs-rest cut, sorted
  std::vector<double> entropies_two;  // every 2-vs-rest cut, sorted
  std::vector<double> spectra_one;    // concatenated sorted marginal spectra, sorted
  std::vector<double> spectra_two;
};

FingerprintReport fingerprint(const PureState& state);
/// True when any invariant list differs by more than `tol`.
bool distinguishable(const FingerprintReport& a, const FingerprintReport& b, double tol = 1e-6);

/// (2N + d - 1) / (N (d + 1))
double clone_fidelity_formula(int d, int N);

}  // namespace qric
