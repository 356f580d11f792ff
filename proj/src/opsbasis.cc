#include "qric/opsbasis.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace qric {

cplx omega_pow(int d, long long k) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(mod(k, d)) / static_cast<double>(d);
  return {std::cos(angle), std::sin(angle)};
}

namespace {
void check_index(int d, long long v, const char* what) {
  if (v < 0 || v >= d) {
    throw InvalidArgument(std::string(what) + " index " + std::to_string(v) + " out of range for d=" +
                          std::to_string(d));
  }
}
}  // namespace

Matrix weyl_matrix(const WeylOp& op) {
  if (op.d < 2) throw InvalidArgument("Weyl operator needs d >= 2");
  check_index(op.d, op.m, "phase");
  check_index(op.d, op.n, "shift");
  Matrix mat = Matrix::Zero(op.d, op.d);
  for (int k = 0; k < op.d; ++k) {
    if (op.kind == WeylKind::U) {
      mat(mod(k + op.n, op.d), k) = omega_pow(op.d, static_cast<long long>(k) * op.m);
    } else {
      mat(k, mod(k + op.n, op.d)) = omega_pow(op.d, static_cast<long long>(k) * op.m);
    }
  }
  return mat;
}

PureState bell_state(int d, int m, int n, const std::string& first, const std::string& second) {
  return ghz_state(d, {first, second}, m, n);
}

PureState ghz_state(int d, const std::vector<std::string>& labels, int m, int n) {
  if (labels.size() < 2) throw InvalidArgument("GHZ state needs at least two labels");
  check_index(d, m, "phase");
  check_index(d, n, "shift");
  Register reg(d, labels);
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<int> dits(labels.size());
  for (int j = 0; j < d; ++j) {
    dits[0] = j;
    std::fill(dits.begin() + 1, dits.end(), mod(j + n, d));
    amps[static_cast<Eigen::Index>(reg.index(dits))] = scale * omega_pow(d, static_cast<long long>(j) * m);
  }
  return PureState(std::move(reg), std::move(amps));
}

int OccupationVector::total() const {
  int s = 0;
  for (int c : counts) s += c;
  return s;
}

std::vector<OccupationVector> occupation_vectors(int d, int total) {
  std::vector<OccupationVector> out;
  std::vector<int> counts(static_cast<std::size_t>(d), 0);
  // Recursive fill of counts[pos..] with the remaining total.
  auto fill = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == d - 1) {
      counts[static_cast<std::size_t>(pos)] = remaining;
      out.push_back({counts});
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[static_cast<std::size_t>(pos)] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  fill(fill, 0, total);
  return out;
}

PureState symmetric_state(int d, const OccupationVector& occupation, const std::vector<std::string>& labels) {
  if (static_cast<int>(occupation.counts.size()) != d) {
    throw InvalidArgument("occupation vector must have d entries");
  }
  for (int c : occupation.counts) {
    if (c < 0) throw InvalidArgument("occupation counts must be non-negative");
  }
  if (occupation.total() != static_cast<int>(labels.size())) {
    throw InvalidArgument("occupation sums to " + std::to_string(occupation.total()) + " but there are " +
                          std::to_string(labels.size()) + " labels");
  }
  Register reg(d, labels);
  std::vector<int> word;
  for (int j = 0; j < d; ++j) word.insert(word.end(), static_cast<std::size_t>(occupation.counts[static_cast<std::size_t>(j)]), j);
  std::vector<std::uint64_t> indices;
  do {
    indices.push_back(reg.index(word));
  } while (std::next_permutation(word.begin(), word.end()));
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
  const double a = 1.0 / std::sqrt(static_cast<double>(indices.size()));
  for (auto idx : indices) amps[static_cast<Eigen::Index>(idx)] = a;
  return PureState(std::move(reg), std::move(amps));
}

double alpha_coeff(int d, int N, int n_j) {
  if (d < 2 || N < 1) throw InvalidArgument("alpha_coeff needs d >= 2 and N >= 1");
  if (n_j < 1 || n_j > N) throw InvalidArgument("alpha_coeff: n_j must lie in 1..N");
  // d!(N-1)!/(N+d-1)! = 1 / prod_{k=N}^{N+d-1} k * d!, accumulated in logs
  const double log_ratio = std::lgamma(d + 1.0) + std::lgamma(static_cast<double>(N)) - std::lgamma(N + d + 0.0);
  return std::sqrt(n_j * std::exp(log_ratio));
}

void StabilizerGroups::validate(const Register& reg) const {
  if (inverse_phase.empty() || inverse_phase.size() != forward_phase.size()) {
    throw InvalidArgument("stabilizer groups must be non-empty and of equal size");
  }
  std::set<std::string> seen;
  for (const auto* group : {&inverse_phase, &forward_phase}) {
    for (const auto& label : *group) {
      reg.position(label);
      if (!seen.insert(label).second) throw InvalidArgument("label '" + label + "' in both stabilizer groups");
    }
  }
  if (seen.size() != reg.size()) throw InvalidArgument("stabilizer groups do not cover the register");
}

namespace {
template <typename Apply>
void for_each_factor(int d, int m, int n, const StabilizerGroups& groups, Apply&& apply) {
  const Matrix inv = weyl_matrix(WeylOp::u(d, -m, n));
  const Matrix fwd = weyl_matrix(WeylOp::u(d, m, n));
  for (const auto& label : groups.inverse_phase) apply(inv, label);
  for (const auto& label : groups.forward_phase) apply(fwd, label);
}
}  // namespace

cplx stabilizer_expectation(const PureState& state, int m, int n, const StabilizerGroups& groups) {
  groups.validate(state.reg());
  Vector amps = state.amps();
  for_each_factor(state.d(), m, n, groups, [&](const Matrix& op, const std::string& label) {
    apply_local_inplace({amps.data(), static_cast<std::size_t>(amps.size())}, state.d(), state.reg().size(),
                        state.reg().position(label), op);
  });
  return state.amps().dot(amps);
}

cplx stabilizer_expectation(const DensityOperator& rho, int m, int n, const StabilizerGroups& groups) {
  groups.validate(rho.reg());
  Matrix acc = rho.mat();
  for_each_factor(rho.d(), m, n, groups, [&](const Matrix& op, const std::string& label) {
    acc = apply_local_left(acc, rho.reg(), op, label);
  });
  return acc.trace();
}

}  // namespace qric
