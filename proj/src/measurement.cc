#include "qric/measurement.h"

#include <cmath>

#include "index_util.h"

namespace qric {

namespace {

// Index bookkeeping for one measured pair.
struct PairLayout {
  int d;
  detail::IndexSplit split;
  bool first_is_earlier;
  std::vector<std::string> rest_labels;

  // Dits (i, j) of (first, second) at full index f.
  std::pair<int, int> dits(std::uint64_t f) const {
    const auto k = split.kept[f];
    const int a = static_cast<int>(k / static_cast<std::uint64_t>(d));
    const int b = static_cast<int>(k % static_cast<std::uint64_t>(d));
    return first_is_earlier ? std::pair{a, b} : std::pair{b, a};
  }
};

PairLayout layout(const Register& reg, const LabelPair& pair) {
  if (pair.first == pair.second) throw InvalidArgument("GBM pair labels must differ");
  const std::size_t p1 = reg.position(pair.first);
  const std::size_t p2 = reg.position(pair.second);
  std::vector<bool> in_keep(reg.size(), false);
  in_keep[p1] = in_keep[p2] = true;
  const std::vector<std::string> both{pair.first, pair.second};
  return PairLayout{reg.d(), detail::split_indices(reg, in_keep), p1 < p2, reg.complement(both)};
}

// (<B^{mn}|_{pair} (x) I) applied to `amps`.
Vector contract(const PairLayout& lay, const cplx* amps, std::uint64_t total, int m, int n) {
  const int d = lay.d;
  std::vector<cplx> bra(static_cast<std::size_t>(d));
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) bra[static_cast<std::size_t>(i)] = s * std::conj(omega_pow(d, static_cast<long long>(i) * m));
  Vector out = Vector::Zero(static_cast<Eigen::Index>(lay.split.rest_dim));
  for (std::uint64_t f = 0; f < total; ++f) {
    const auto [i, j] = lay.dits(f);
    if (j != mod(i + n, d)) continue;
    out[static_cast<Eigen::Index>(lay.split.rest[f])] += bra[static_cast<std::size_t>(i)] * amps[f];
  }
  return out;
}

void check_outcome(int d, int m, int n) {
  if (m < 0 || m >= d || n < 0 || n >= d) throw InvalidArgument("GBM outcome index out of range");
}

Branch make_branch(const PureState& state, const PairLayout& lay, const LabelPair& pair, int m, int n,
                   const Vector& rest, PairHandling handling) {
  Branch b;
  const double p = rest.squaredNorm();
  b.outcome = GbmOutcome{m, n, p, pair};
  if (p < kNullBranchProbability) return b;
  const Vector cond = rest / std::sqrt(p);
  if (handling == PairHandling::Remove) {
    if (lay.rest_labels.empty()) throw InvalidArgument("removing the pair would leave an empty register");
    b.post_state = PureState(Register(state.d(), lay.rest_labels), cond);
    return b;
  }
  const int d = state.d();
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  const std::uint64_t total = state.reg().total_dim();
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(total));
  for (std::uint64_t f = 0; f < total; ++f) {
    const auto [i, j] = lay.dits(f);
    if (j != mod(i + n, d)) continue;
    amps[static_cast<Eigen::Index>(f)] =
        s * omega_pow(d, static_cast<long long>(i) * m) * cond[static_cast<Eigen::Index>(lay.split.rest[f])];
  }
  b.post_state = PureState::normalized(state.reg(), std::move(amps));
  return b;
}

}  // namespace

std::vector<Branch> gbm_branches(const PureState& state, const LabelPair& pair, PairHandling handling) {
  const auto lay = layout(state.reg(), pair);
  std::vector<Branch> out;
  const int d = state.d();
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const Vector rest = contract(lay, state.amps().data(), state.reg().total_dim(), m, n);
      out.push_back(make_branch(state, lay, pair, m, n, rest, handling));
    }
  }
  return out;
}

Branch gbm_project(const PureState& state, const LabelPair& pair, int m, int n, PairHandling handling) {
  check_outcome(state.d(), m, n);
  const auto lay = layout(state.reg(), pair);
  const Vector rest = contract(lay, state.amps().data(), state.reg().total_dim(), m, n);
  return make_branch(state, lay, pair, m, n, rest, handling);
}

std::vector<double> gbm_probabilities(const PureState& state, const LabelPair& pair) {
  const auto lay = layout(state.reg(), pair);
  std::vector<double> out;
  for (int m = 0; m < state.d(); ++m) {
    for (int n = 0; n < state.d(); ++n) {
      out.push_back(contract(lay, state.amps().data(), state.reg().total_dim(), m, n).squaredNorm());
    }
  }
  return out;
}

Branch gbm_sample(const PureState& state, const LabelPair& pair, Rng& rng, PairHandling handling) {
  const auto lay = layout(state.reg(), pair);
  const int d = state.d();
  std::vector<Vector> rests;
  std::vector<double> probs;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      rests.push_back(contract(lay, state.amps().data(), state.reg().total_dim(), m, n));
      probs.push_back(rests.back().squaredNorm());
    }
  }
  const std::size_t k = sample_index(probs, rng);
  const int m = static_cast<int>(k) / d;
  const int n = static_cast<int>(k) % d;
  return make_branch(state, lay, pair, m, n, rests[k], handling);
}

DensityBranch gbm_project(const DensityOperator& rho, const LabelPair& pair, int m, int n) {
  check_outcome(rho.d(), m, n);
  const auto lay = layout(rho.reg(), pair);
  if (lay.rest_labels.empty()) throw InvalidArgument("removing the pair would leave an empty register");
  const std::uint64_t total = rho.reg().total_dim();
  const auto rest_dim = static_cast<Eigen::Index>(lay.split.rest_dim);
  Matrix half(rest_dim, static_cast<Eigen::Index>(total));
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(total); ++c) {
    half.col(c) = contract(lay, rho.mat().col(c).data(), total, m, n);
  }
  const Matrix half_adj = half.adjoint();
  Matrix q(rest_dim, rest_dim);
  for (Eigen::Index r = 0; r < rest_dim; ++r) q.col(r) = contract(lay, half_adj.col(r).data(), total, m, n);

  DensityBranch b;
  const double p = q.trace().real();
  b.outcome = GbmOutcome{m, n, p, pair};
  if (p < kNullBranchProbability) return b;
  q /= p;
  q = 0.5 * (q + q.adjoint()).eval();
  b.post_state = DensityOperator(Register(rho.d(), lay.rest_labels), std::move(q));
  return b;
}

double swap_identity_check(int d, int m, int n, int m2, int n2) {
  for (int x : {m, n, m2, n2}) {
    if (x < 0 || x >= d) throw InvalidArgument("swap identity index out of range");
  }
  const std::vector<std::string> order{"X", "Y", "X'", "Y'"};
  const PureState lhs = tensor(bell_state(d, m, n, "X", "Y"), bell_state(d, m2, n2, "X'", "Y'"));
  Vector rhs = Vector::Zero(lhs.amps().size());
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const PureState term = tensor(bell_state(d, mod(m + a, d), mod(n2 + b, d), "X", "Y'"),
                                    bell_state(d, mod(m2 - a, d), mod(n - b, d), "X'", "Y"));
      rhs += omega_pow(d, static_cast<long long>(a) * b) / static_cast<double>(d) * reorder(term, order).amps();
    }
  }
  return (lhs.amps() - rhs).cwiseAbs().maxCoeff();
}

}  // namespace qric
