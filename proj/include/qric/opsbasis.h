#pragma once

#include <string>
#include <vector>

#include "qric/statealg.h"

namespace qric {

/// omega^k with omega = exp(2 pi i / d), evaluated directly for each power.
cplx omega_pow(int d, long long k);

enum class WeylKind { U, R };

/// Phase-and-shift operator on one qudit.
///   U^{m,n} = sum_k w^{km} |k+n><k|
///   R^{m,n} = sum_j w^{jm} |j><j+n|  = (U^{-m,n})^dagger
struct WeylOp {
  int d;
  int m;
  int n;
  WeylKind kind = WeylKind::U;

  static WeylOp u(int d, long long m, long long n) { return {d, mod(m, d), mod(n, d), WeylKind::U}; }
  static WeylOp r(int d, long long m, long long n) { return {d, mod(m, d), mod(n, d), WeylKind::R}; }
};

Matrix weyl_matrix(const WeylOp& op);

/// |B^{m,n}> = (I (x) U^{m,n}) (1/sqrt d) sum_j |jj> on the ordered pair.
PureState bell_state(int d, int m, int n, const std::string& first, const std::string& second);

/// (I (x) U^{m,n} (x) U^{0,n} ...) (1/sqrt d) sum_j |j...j>. Needs >= 2 labels.
PureState ghz_state(int d, const std::vector<std::string>& labels, int m, int n);

/// Occupation numbers n_0..n_{d-1} of a symmetric multiset.
struct OccupationVector {
  std::vector<int> counts;

  int total() const;
};

/// All occupation vectors of length d summing to `total`, lexicographic.
std::vector<OccupationVector> occupation_vectors(int d, int total);

/// Equal-weight superposition of every distinct ordering of the multiset.
PureState symmetric_state(int d, const OccupationVector& occupation, const std::vector<std::string>& labels);

/// sqrt(n_j d! (N-1)! / (N+d-1)!)
double alpha_coeff(int d, int N, int n_j);

/// Which labels carry U^{-m,n} and which carry U^{m,n} in S^{mn}.
struct StabilizerGroups {
  std::vector<std::string> inverse_phase;  // A'_1..A'_N
  std::vector<std::string> forward_phase;  // 1'..N'

  void validate(const Register& reg) const;
};

/// tr(S^{mn} |psi><psi|) with S^{mn} = (x)_s U^{-m,n}_{A'_s} (x) U^{m,n}_{s'}.
cplx stabilizer_expectation(const PureState& state, int m, int n, const StabilizerGroups& groups);
cplx stabilizer_expectation(const DensityOperator& rho, int m, int n, const StabilizerGroups& groups);

}  // namespace qric
