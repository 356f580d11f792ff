#pragma once

#include <span>
#include <vector>

#include "qric/opsbasis.h"

namespace qric {

/// Non-negative weights with unit Euclidean norm.
class BetaVector {
 public:
  explicit BetaVector(std::vector<double> values, double tol = kTolerance);

  int d() const { return static_cast<int>(values_.size()); }
  double operator[](int n) const { return values_[static_cast<std::size_t>(n)]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// |phi_j> on 1..N, A_1..A_{N-1}: the symmetric clone branch for basis input j.
PureState clone_branch(int d, int N, int j);

/// sum_j x_j |phi_j>; `x` must be normalized.
PureState clone_state(std::span<const cplx> x, int d, int N);

/// The 1->N cloning output split along the last clone qudit:
///   |phi_j> = sum_n beta_n |lambda_{j,n}> |j+n>_N
///   |Bbar_{mn}> = d^{-1/2} sum_j w^{jm} |lambda_{j,n}>
/// The lambda_{j,0} overlap each other, so the Bbar_{m0} are orthogonal but
/// not unit vectors; they are kept unnormalized so the sums stay exact.
struct CloneFamily {
  int d = 0;
  int N = 0;
  std::vector<PureState> branches;  // |phi_j>, j = 0..d-1
  BetaVector beta{{1.0}};
  std::vector<PureState> lambdas;   // index j*d + n, on labels::bbar_register(N)
  std::vector<Vector> bbar;         // index m*d + n, over labels::bbar_register(N)

  Register bbar_reg() const;
  const Vector& bbar_state(int m, int n) const { return bbar[static_cast<std::size_t>(mod(m, d) * d + mod(n, d))]; }
  const PureState& lambda(int j, int n) const { return lambdas[static_cast<std::size_t>(mod(j, d) * d + mod(n, d))]; }
};

/// Extracts lambda, beta and Bbar from the clone branches and checks that
/// they rebuild clone_state to 1e-9; throws VerificationError otherwise.
CloneFamily extract_clone_decomposition(int d, int N);

/// d^{-1/2} sum_{m,n} beta_n |Bbar_{mn}> (x) U^{-m,n}|x>_N, on labels::clone_register(N).
PureState reconstruct_clone_state(const CloneFamily& family, std::span<const cplx> x);

/// Applies R^{k,l} to clones 1..N-1 and R^{-k,l} to ancillas of a vector over
/// labels::bbar_register(N).
Vector apply_bbar_covariance(const Vector& amps, int d, int N, int k, int l);

/// max over (m,n,k,l) of |R..R^{-k,l}.. Bbar_{mn} - w^{lm-nk} Bbar_{mn}|.
double bbar_covariance_deviation(std::span<const Vector> bbar, int d, int N);

}  // namespace qric
