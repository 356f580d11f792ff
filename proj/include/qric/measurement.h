#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qric/opsbasis.h"

namespace qric {

/// Ordered pair measured in the Bell basis; `first` carries the phase index.
struct LabelPair {
  std::string first;
  std::string second;
};

struct GbmOutcome {
  int m = 0;
  int n = 0;
  double probability = 0.0;
  LabelPair pair;
};

enum class PairHandling { Retain, Remove };

/// Outcome plus the renormalized post-measurement state. Branches below
/// kNullBranchProbability carry no state.
struct Branch {
  GbmOutcome outcome;
  std::optional<PureState> post_state;

  bool is_null() const { return !post_state.has_value(); }
};

/// All d^2 outcomes in row-major (m, n) order.
std::vector<Branch> gbm_branches(const PureState& state, const LabelPair& pair,
                                 PairHandling handling = PairHandling::Retain);

/// The single outcome (m, n).
Branch gbm_project(const PureState& state, const LabelPair& pair, int m, int n,
                   PairHandling handling = PairHandling::Retain);

/// Born-rule draw using the caller's generator.
Branch gbm_sample(const PureState& state, const LabelPair& pair, Rng& rng,
                  PairHandling handling = PairHandling::Retain);

/// Outcome probabilities |<B^{mn}|psi>|^2 marginals, row-major.
std::vector<double> gbm_probabilities(const PureState& state, const LabelPair& pair);

struct DensityBranch {
  GbmOutcome outcome;
  std::optional<DensityOperator> post_state;  // pair removed

  bool is_null() const { return !post_state.has_value(); }
};

/// K rho K^dagger / p with K = <B^{mn}|_{pair}; the pair is removed.
DensityBranch gbm_project(const DensityOperator& rho, const LabelPair& pair, int m, int n);

/// max |LHS - RHS| of
///   |B^{m,n}>_{XY}|B^{m',n'}>_{X'Y'}
///     = (1/d) sum_{a,b} w^{ab} |B^{m+a, n'+b}>_{XY'} |B^{m'-a, n-b}>_{X'Y}
double swap_identity_check(int d, int m, int n, int m2, int n2);

}  // namespace qric
