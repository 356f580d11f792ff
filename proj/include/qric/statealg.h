#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qric/common.h"

namespace qric {

using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Ordered, uniquely-labeled set of qudits sharing one dimension d.
///
/// Basis indices are big-endian in label order: the dit at position 0 is the
/// most significant, so index = sum_k j_k d^(n-1-k).
class Register {
 public:
  Register(int d, std::vector<std::string> labels);

  int d() const { return d_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t pos) const { return labels_[pos]; }

  bool contains(std::string_view label) const;
  /// Position of `label`; throws InvalidArgument when absent.
  std::size_t position(std::string_view label) const;

  /// d^n without any size guard applied.
  std::uint64_t total_dim() const { return total_dim_; }
  /// Index distance between consecutive values of the dit at `pos`.
  std::uint64_t stride(std::size_t pos) const { return strides_[pos]; }

  std::vector<int> dits(std::uint64_t index) const;
  std::uint64_t index(std::span<const int> dits) const;

  /// Register holding only `keep`, in this register's order.
  Register subset(std::span<const std::string> keep) const;
  /// Labels not in `keep`, in register order.
  std::vector<std::string> complement(std::span<const std::string> keep) const;

  bool operator==(const Register& other) const = default;

 private:
  int d_;
  std::vector<std::string> labels_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t total_dim_;
};

class PureState {
 public:
  /// Takes ownership of `amps`; requires unit norm within kTolerance.
  PureState(Register reg, Vector amps);

  /// Rescales `amps` to unit norm; throws if the norm is ~0.
  static PureState normalized(Register reg, Vector amps);
  /// Computational basis state with the given dits.
  static PureState basis(Register reg, std::span<const int> dits);

  const Register& reg() const { return reg_; }
  const Vector& amps() const { return amps_; }
  int d() const { return reg_.d(); }
  const std::vector<std::string>& labels() const { return reg_.labels(); }

  cplx amp(std::span<const int> dits) const { return amps_[reg_.index(dits)]; }
  double norm() const { return amps_.norm(); }

 private:
  Register reg_;
  Vector amps_;
};

/// Dense Hermitian, unit-trace operator on a register.
///
/// Construction checks Hermiticity and trace; positivity is available through
/// min_eigenvalue() since it costs a full diagonalization.
class DensityOperator {
 public:
  DensityOperator(Register reg, Matrix mat);

  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator maximally_mixed(Register reg);

  const Register& reg() const { return reg_; }
  const Matrix& mat() const { return mat_; }
  int d() const { return reg_.d(); }
  const std::vector<std::string>& labels() const { return reg_.labels(); }

  double trace() const { return mat_.trace().real(); }
  double purity() const;
  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;
  double min_eigenvalue() const;

 private:
  Register reg_;
  Matrix mat_;
};

/// Bipartition of a register's labels.
struct Cut {
  std::vector<std::string> group_a;
  std::vector<std::string> group_b;

  /// Throws InvalidArgument unless the groups partition `reg`'s labels.
  void validate(const Register& reg) const;
};

/// Kronecker product; labels concatenate (a first).
PureState tensor(const PureState& a, const PureState& b);

/// Applies the d x d `op` to the dit `target` by stride arithmetic.
PureState apply_local(const PureState& state, const Matrix& op, std::string_view target,
                      bool check_unitary = false, double tol = kTolerance);

/// In-place single-qudit application on a raw amplitude block. `amps` holds
/// d^n entries in big-endian order; `pos` is the target position.
void apply_local_inplace(std::span<cplx> amps, int d, std::size_t n, std::size_t pos,
                         const Matrix& op);

/// Left multiplication op_target * rho (result is generally not a state).
Matrix apply_local_left(const Matrix& rho, const Register& reg, const Matrix& op,
                        std::string_view target);

DensityOperator partial_trace(const PureState& psi, std::span<const std::string> keep);
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::string> keep);

/// Moves each subsystem to the label `relabeling` assigns it; the register's
/// label order is unchanged. Labels missing from the map stay put.
PureState permute(const PureState& state, const std::map<std::string, std::string>& relabeling);
DensityOperator permute(const DensityOperator& rho,
                        const std::map<std::string, std::string>& relabeling);

/// Same labels, reordered into `order` (a permutation of the current labels).
PureState reorder(const PureState& state, std::span<const std::string> order);
DensityOperator reorder(const DensityOperator& rho, std::span<const std::string> order);

/// Renames labels in place; amplitudes are untouched.
PureState rename(const PureState& state, const std::map<std::string, std::string>& names);

/// Copies the value of dit `source` onto new qudits `targets` (|i> -> |i..i>),
/// replacing `source` at its position by the targets.
PureState fan_out(const PureState& state, std::string_view source,
                  std::span<const std::string> targets);

/// Unnormalized amplitudes of (<values|_labels (x) I) |state>, indexed over the
/// remaining labels in register order.
Vector slice(const PureState& state, std::span<const std::string> labels, std::span<const int> values);

/// <a|b>. Registers must match exactly.
cplx overlap(const PureState& a, const PureState& b);
/// |<a|b>|^2
double fidelity(const PureState& a, const PureState& b);
bool equal_up_to_phase(const PureState& a, const PureState& b, double tol = kTolerance);
/// max_i |a_i - b_i|
double max_amplitude_deviation(const PureState& a, const PureState& b);

/// Gaussian-distributed unit vector of length `dim` (Box-Muller on uniform01).
std::vector<cplx> random_unit_vector(std::size_t dim, Rng& rng);

/// Von Neumann entropy in bits; eigenvalues below `tol` are dropped.
double von_neumann_entropy(const DensityOperator& rho, double tol = kTolerance);
/// Entropy of the reduced operator on `cut.group_b`.
double entropy_across_cut(const PureState& state, const Cut& cut);

}  // namespace qric
