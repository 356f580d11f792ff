#include "qric/analysis.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "index_util.h"
#include "qric/labels.h"
#include "qric/measurement.h"

namespace qric {

double StabilizerTable::max_deviation() const {
  double worst = 0.0;
  for (const auto& v : values) worst = std::max(worst, std::abs(v - cplx{1.0, 0.0}));
  return worst;
}

namespace {

template <typename State>
StabilizerTable suite(const State& state, int N) {
  const StabilizerGroups groups = channel_groups(N);
  groups.validate(state.reg());
  StabilizerTable t;
  t.d = state.d();
  for (int m = 0; m < t.d; ++m) {
    for (int n = 0; n < t.d; ++n) t.values.push_back(stabilizer_expectation(state, m, n, groups));
  }
  return t;
}

}  // namespace

StabilizerTable stabilizer_suite(const PureState& state, int N) { return suite(state, N); }
StabilizerTable stabilizer_suite(const DensityOperator& rho, int N) { return suite(rho, N); }

double ghz_reduction_deviation(int d, int N) {
  ChannelSpec spec;
  spec.kind = ChannelKind::GeneralPure;
  spec.d = d;
  spec.N = N;
  for (auto& k : enumerate_constrained_tuples(d, N, 0, 0)) {
    bool even_zero = true;
    for (std::size_t i = 1; i < k.size(); i += 2) even_zero = even_zero && k[i] == 0;
    if (even_zero) spec.table.push_back({k, 0.0});
  }
  for (auto& e : spec.table) e.w = 1.0 / static_cast<double>(spec.table.size());
  return max_amplitude_deviation(general_pure_channel(spec), ghz_channel(d, N));
}

EquivalenceResult telecloning_beta_equivalence(int d, int N, double tol) {
  EquivalenceResult r;
  r.overlap = std::abs(overlap(telecloning_as_channel(d, N), beta_weighted_channel(d, N)));
  r.pass = d == 2 ? std::abs(r.overlap - 1.0) <= tol : r.overlap < 1.0 - 1e-6;
  return r;
}

namespace {

UnlockEntry describe_pair(const DensityOperator& pair_state, int d) {
  UnlockEntry e;
  e.purity = pair_state.purity();
  const std::vector<std::string> keep{labels::channel_a(1)};
  e.entropy_bits = von_neumann_entropy(partial_trace(pair_state, keep));
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const PureState b = bell_state(d, m, n, labels::channel_a(1), labels::prime(1));
      const double f = (b.amps().adjoint() * pair_state.mat() * b.amps())(0, 0).real();
      if (f > e.bell_fidelity) {
        e.bell_fidelity = f;
        e.bell_m = m;
        e.bell_n = n;
      }
    }
  }
  return e;
}

void unlock_descend(const DensityOperator& rho, int d, int N, int s, std::vector<std::pair<int, int>>& path,
                    double prob, UnlockReport& out) {
  if (s > N) {
    UnlockEntry e = describe_pair(rho, d);
    e.outcomes = path;
    e.probability = prob;
    out.entries.push_back(std::move(e));
    return;
  }
  const LabelPair pair{labels::channel_a(s), labels::prime(s)};
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const DensityBranch br = gbm_project(rho, pair, m, n);
      if (br.is_null()) continue;
      path.emplace_back(m, n);
      unlock_descend(*br.post_state, d, N, s + 1, path, prob * br.outcome.probability, out);
      path.pop_back();
    }
  }
}

}  // namespace

UnlockReport unlock_ubes(int d, int N) {
  UnlockReport out{d, N, {}};
  std::vector<std::pair<int, int>> path;
  unlock_descend(smolin_like(d, N), d, N, 2, path, 1.0, out);
  return out;
}

UnlockReport unlock_ubes(int d, int N, Rng& rng) {
  UnlockReport out{d, N, {}};
  DensityOperator rho = smolin_like(d, N);
  std::vector<std::pair<int, int>> path;
  double prob = 1.0;
  for (int s = 2; s <= N; ++s) {
    const LabelPair pair{labels::channel_a(s), labels::prime(s)};
    std::vector<DensityBranch> branches;
    std::vector<double> w;
    for (int m = 0; m < d; ++m) {
      for (int n = 0; n < d; ++n) {
        branches.push_back(gbm_project(rho, pair, m, n));
        w.push_back(branches.back().is_null() ? 0.0 : branches.back().outcome.probability);
      }
    }
    const std::size_t k = sample_index(w, rng);
    path.emplace_back(branches[k].outcome.m, branches[k].outcome.n);
    prob *= branches[k].outcome.probability;
    rho = *branches[k].post_state;
  }
  UnlockEntry e = describe_pair(rho, d);
  e.outcomes = path;
  e.probability = prob;
  out.entries.push_back(std::move(e));
  return out;
}

Matrix partial_transpose(const DensityOperator& rho, const std::vector<std::string>& group_b) {
  const Register& reg = rho.reg();
  std::vector<bool> in_b(reg.size(), false);
  for (const auto& label : group_b) in_b[reg.position(label)] = true;
  const detail::IndexSplit split = detail::split_indices(reg, in_b);
  const std::uint64_t total = reg.total_dim();
  std::vector<std::uint64_t> compose(total);
  for (std::uint64_t f = 0; f < total; ++f) compose[split.kept[f] * split.rest_dim + split.rest[f]] = f;
  Matrix out(rho.mat().rows(), rho.mat().cols());
  for (std::uint64_t r = 0; r < total; ++r) {
    for (std::uint64_t c = 0; c < total; ++c) {
      const std::uint64_t r2 = compose[split.kept[c] * split.rest_dim + split.rest[r]];
      const std::uint64_t c2 = compose[split.kept[r] * split.rest_dim + split.rest[c]];
      out(static_cast<Eigen::Index>(r2), static_cast<Eigen::Index>(c2)) =
          rho.mat()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

double ppt_min_eigenvalue(const DensityOperator& rho, const Cut& cut) {
  cut.validate(rho.reg());
  Eigen::SelfAdjointEigenSolver<Matrix> es(partial_transpose(rho, cut.group_b), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<Cut> pair_grouping_cuts(int N) {
  if (N < 2) throw InvalidArgument("pair grouping needs N >= 2");
  std::vector<Cut> cuts;
  const unsigned limit = 1u << (N - 1);
  for (unsigned mask = 0; mask + 1 < limit; ++mask) {
    // Bit s-2 set puts pair s into group A alongside pair 1.
    Cut c;
    for (int s = 1; s <= N; ++s) {
      const bool in_a = s == 1 || ((mask >> (s - 2)) & 1u);
      auto& g = in_a ? c.group_a : c.group_b;
      g.push_back(labels::channel_a(s));
      g.push_back(labels::prime(s));
    }
    cuts.push_back(std::move(c));
  }
  return cuts;
}

double SymmetryReport::max_within() const {
  double worst = 0.0;
  for (const auto* group : {&within_g1, &within_g2}) {
    for (const auto& s : *group) worst = std::max(worst, s.distance);
  }
  return worst;
}

namespace {

SwapDistance swap_distance(const DensityOperator& rho, const std::string& a, const std::string& b) {
  const DensityOperator swapped = permute(rho, {{a, b}, {b, a}});
  return {a, b, (rho.mat() - swapped.mat()).norm()};
}

}  // namespace

SymmetryReport symmetry_report(const DensityOperator& rho, int N) {
  SymmetryReport r;
  for (int i = 1; i <= N; ++i) {
    for (int j = i + 1; j <= N; ++j) {
      r.within_g1.push_back(swap_distance(rho, labels::channel_a(i), labels::channel_a(j)));
      r.within_g2.push_back(swap_distance(rho, labels::prime(i), labels::prime(j)));
    }
  }
  r.cross = swap_distance(rho, labels::channel_a(1), labels::prime(1));
  return r;
}

SpectrumSummary spectrum_summary(const DensityOperator& rho, double tol) {
  const Eigen::VectorXd ev = rho.eigenvalues();
  SpectrumSummary s;
  s.min_eigenvalue = ev.minCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > tol) ++s.rank;
  }
  if (s.rank == 0) return s;
  const double flat = 1.0 / static_cast<double>(s.rank);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev[i] > tol) s.flat_deviation = std::max(s.flat_deviation, std::abs(ev[i] - flat));
  }
  return s;
}

FingerprintReport fingerprint(const PureState& state) {
  FingerprintReport f;
  const auto& names = state.labels();
  auto add = [&](const std::vector<std::string>& keep, std::vector<double>& entropies, std::vector<double>& spectra) {
    const DensityOperator rho = partial_trace(state, keep);
    entropies.push_back(von_neumann_entropy(rho));
    const Eigen::VectorXd ev = rho.eigenvalues();
    spectra.insert(spectra.end(), ev.data(), ev.data() + ev.size());
  };
  for (std::size_t i = 0; i < names.size(); ++i) add({names[i]}, f.entropies_one, f.spectra_one);
  if (names.size() > 2) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = i + 1; j < names.size(); ++j) add({names[i], names[j]}, f.entropies_two, f.spectra_two);
    }
  }
  for (auto* v : {&f.entropies_one, &f.entropies_two, &f.spectra_one, &f.spectra_two}) std::sort(v->begin(), v->end());
  return f;
}

bool distinguishable(const FingerprintReport& a, const FingerprintReport& b, double tol) {
  auto differ = [tol](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (std::abs(x[i] - y[i]) > tol) return true;
    }
    return false;
  };
  return differ(a.entropies_one, b.entropies_one) || differ(a.entropies_two, b.entropies_two) ||
         differ(a.spectra_one, b.spectra_one) || differ(a.spectra_two, b.spectra_two);
}

double clone_fidelity_formula(int d, int N) {
  if (d < 2 || N < 2) throw InvalidArgument("clone_fidelity_formula needs d >= 2 and N >= 2");
  return static_cast<double>(2 * N + d - 1) / static_cast<double>(N * (d + 1));
}

}  // namespace qric
