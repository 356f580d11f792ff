#include "qric/clone_family.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "qric/labels.h"

namespace qric {

BetaVector::BetaVector(std::vector<double> values, double tol) : values_(std::move(values)) {
  if (values_.empty()) throw InvalidArgument("beta vector is empty");
  double norm2 = 0.0;
  for (double b : values_) {
    if (!(b >= 0.0)) throw InvalidArgument("beta entries must be non-negative reals");
    norm2 += b * b;
  }
  if (std::abs(norm2 - 1.0) > tol) {
    throw InvalidArgument("beta vector has squared norm " + std::to_string(norm2) + ", expected 1");
  }
}

PureState clone_branch(int d, int N, int j) {
  if (d < 2 || N < 1) throw InvalidArgument("clone_branch needs d >= 2 and N >= 1");
  if (j < 0 || j >= d) throw InvalidArgument("clone_branch: basis index out of range");
  const std::size_t n_qudits = static_cast<std::size_t>(2 * N - 1);
  checked_power(d, n_qudits, max_pure_dim());

  std::vector<std::string> clones, ancillas;
  for (int s = 1; s <= N; ++s) clones.push_back(labels::clone(s));
  for (int s = 1; s < N; ++s) ancillas.push_back(labels::ancilla(s));

  Register reg(d, labels::clone_register(N));
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(reg.total_dim()));
  for (const auto& occ : occupation_vectors(d, N)) {
    const int nj = occ.counts[static_cast<std::size_t>(j)];
    if (nj < 1) continue;
    OccupationVector rest = occ;
    rest.counts[static_cast<std::size_t>(j)] -= 1;
    const Vector clone_part = symmetric_state(d, occ, clones).amps();
    Vector anc_part = Vector::Ones(1);
    if (!ancillas.empty()) anc_part = symmetric_state(d, rest, ancillas).amps();
    const double a = alpha_coeff(d, N, nj);
    for (Eigen::Index c = 0; c < clone_part.size(); ++c) {
      if (clone_part[c] == cplx{}) continue;
      amps.segment(c * anc_part.size(), anc_part.size()) += a * clone_part[c] * anc_part;
    }
  }
  return PureState(std::move(reg), std::move(amps));
}

PureState clone_state(std::span<const cplx> x, int d, int N) {
  if (static_cast<int>(x.size()) != d) throw InvalidArgument("input state must have d amplitudes");
  double norm2 = 0.0;
  for (auto c : x) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > kTolerance) throw InvalidArgument("input state is not normalized");
  Register reg(d, labels::clone_register(N));
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(checked_power(d, reg.size(), max_pure_dim())));
  for (int j = 0; j < d; ++j) {
    if (x[static_cast<std::size_t>(j)] == cplx{}) continue;
    amps += x[static_cast<std::size_t>(j)] * clone_branch(d, N, j).amps();
  }
  return PureState(std::move(reg), std::move(amps));
}

namespace {

Vector weyl_apply(const WeylOp& op, std::span<const cplx> x) {
  Vector v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
  return weyl_matrix(op) * v;
}

std::vector<std::vector<cplx>> probe_inputs(int d) {
  std::vector<std::vector<cplx>> out;
  std::vector<cplx> e0(static_cast<std::size_t>(d), cplx{});
  e0[0] = 1.0;
  out.push_back(e0);
  out.emplace_back(static_cast<std::size_t>(d), cplx{1.0 / std::sqrt(static_cast<double>(d)), 0.0});
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 2; ++t) {
    std::vector<cplx> x(static_cast<std::size_t>(d));
    double n2 = 0.0;
    for (auto& c : x) {
      c = {gauss(rng), gauss(rng)};
      n2 += std::norm(c);
    }
    for (auto& c : x) c /= std::sqrt(n2);
    out.push_back(x);
  }
  return out;
}

}  // namespace

CloneFamily extract_clone_decomposition(int d, int N) {
  if (N < 2) throw InvalidArgument("clone decomposition needs N >= 2");
  CloneFamily fam;
  fam.d = d;
  fam.N = N;
  for (int j = 0; j < d; ++j) fam.branches.push_back(clone_branch(d, N, j));

  const Register bbar_reg(d, labels::bbar_register(N));
  const std::string last = labels::clone(N);
  std::vector<double> beta(static_cast<std::size_t>(d), 0.0);
  std::vector<Vector> lam(static_cast<std::size_t>(d * d));
  for (int j = 0; j < d; ++j) {
    for (int n = 0; n < d; ++n) {
      const std::vector<std::string> which{last};
      const std::vector<int> value{mod(j + n, d)};
      Vector v = slice(fam.branches[static_cast<std::size_t>(j)], which, value);
      const double b = v.norm();
      if (j == 0) {
        if (b < 1e-12) throw VerificationError("beta_" + std::to_string(n) + " vanishes");
        beta[static_cast<std::size_t>(n)] = b;
      } else if (std::abs(b - beta[static_cast<std::size_t>(n)]) > 1e-10) {
        throw VerificationError("beta_" + std::to_string(n) + " depends on the input basis state");
      }
      lam[static_cast<std::size_t>(j * d + n)] = v / b;
    }
  }
  fam.beta = BetaVector(beta, 1e-9);
  for (int j = 0; j < d; ++j) {
    for (int n = 0; n < d; ++n) fam.lambdas.emplace_back(bbar_reg, lam[static_cast<std::size_t>(j * d + n)]);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      Vector acc = Vector::Zero(static_cast<Eigen::Index>(bbar_reg.total_dim()));
      for (int j = 0; j < d; ++j) acc += scale * omega_pow(d, static_cast<long long>(j) * m) * lam[static_cast<std::size_t>(j * d + n)];
      fam.bbar.push_back(std::move(acc));
    }
  }
  for (std::size_t a = 0; a < fam.bbar.size(); ++a) {
    for (std::size_t b = a + 1; b < fam.bbar.size(); ++b) {
      if (std::abs(fam.bbar[a].dot(fam.bbar[b])) > 1e-9) throw VerificationError("Bbar states are not orthogonal");
    }
  }

  for (const auto& x : probe_inputs(d)) {
    const double dev = max_amplitude_deviation(reconstruct_clone_state(fam, x), clone_state(x, d, N));
    if (dev > 1e-9) {
      throw VerificationError("clone decomposition does not rebuild the clone state (deviation " +
                              std::to_string(dev) + ")");
    }
  }
  return fam;
}

PureState reconstruct_clone_state(const CloneFamily& family, std::span<const cplx> x) {
  const int d = family.d;
  const int N = family.N;
  if (static_cast<int>(x.size()) != d) throw InvalidArgument("input state must have d amplitudes");
  const auto rest_dim = family.bbar.front().size();
  Vector amps = Vector::Zero(rest_dim * d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const Vector target = weyl_apply(WeylOp::u(d, -m, n), x);
      const Vector& bb = family.bbar_state(m, n);
      const double w = scale * family.beta[n];
      for (Eigen::Index r = 0; r < rest_dim; ++r) {
        amps.segment(r * d, d) += (w * bb[r]) * target;
      }
    }
  }
  auto out_labels = labels::bbar_register(N);
  out_labels.push_back(labels::clone(N));
  PureState joint(Register(d, out_labels), std::move(amps));
  const auto order = labels::clone_register(N);
  return reorder(joint, order);
}

Register CloneFamily::bbar_reg() const { return Register(d, labels::bbar_register(N)); }

Vector apply_bbar_covariance(const Vector& amps, int d, int N, int k, int l) {
  const Register reg(d, labels::bbar_register(N));
  if (static_cast<std::uint64_t>(amps.size()) != reg.total_dim()) throw InvalidArgument("Bbar vector has the wrong length");
  const Matrix fwd = weyl_matrix(WeylOp::r(d, k, l));
  const Matrix inv = weyl_matrix(WeylOp::r(d, -k, l));
  Vector out = amps;
  std::span<cplx> view(out.data(), static_cast<std::size_t>(out.size()));
  for (int s = 1; s < N; ++s) {
    apply_local_inplace(view, d, reg.size(), reg.position(labels::clone(s)), fwd);
    apply_local_inplace(view, d, reg.size(), reg.position(labels::ancilla(s)), inv);
  }
  return out;
}

double bbar_covariance_deviation(std::span<const Vector> bbar, int d, int N) {
  if (static_cast<int>(bbar.size()) != d * d) throw InvalidArgument("expected d^2 Bbar vectors");
  double worst = 0.0;
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const Vector& b = bbar[static_cast<std::size_t>(m * d + n)];
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          const Vector moved = apply_bbar_covariance(b, d, N, k, l);
          const cplx phase = omega_pow(d, static_cast<long long>(l) * m - static_cast<long long>(n) * k);
          worst = std::max(worst, (moved - phase * b).cwiseAbs().maxCoeff());
        }
      }
    }
  }
  return worst;
}

}  // namespace qric
