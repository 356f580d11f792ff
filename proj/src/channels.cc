#include "qric/channels.h"

#include <cmath>
#include <map>
#include <set>

#include "qric/labels.h"

namespace qric {

namespace {

struct KindName {
  ChannelKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {ChannelKind::Telecloning, "telecloning"},   {ChannelKind::GeneralPure, "general-pure"},
    {ChannelKind::Ghz, "ghz"},                   {ChannelKind::BetaWeighted, "beta-weighted"},
    {ChannelKind::ProductBell, "product-bell"},  {ChannelKind::Mixed, "mixed"},
    {ChannelKind::SmolinLike, "smolin-like"},
};

void check_dims(int d, int N) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  if (N < 2) throw InvalidArgument("N must be at least 2");
}

void check_tuple_shape(const BellTuple& k, int d, int N) {
  if (static_cast<int>(k.size()) != 2 * N) {
    throw InvalidArgument("tuple " + format_tuple(k) + " must have 2N = " + std::to_string(2 * N) + " entries");
  }
  for (int x : k) {
    if (x < 0 || x >= d) throw InvalidArgument("tuple " + format_tuple(k) + " has an entry outside 0..d-1");
  }
}

void check_constraint(const BellTuple& k, int d, int u, int v) {
  if (!satisfies_constraints(k, d, u, v)) {
    throw ConstraintError("tuple " + format_tuple(k) + " violates the residue constraints (u=" + std::to_string(u) +
                          ", v=" + std::to_string(v) + ", d=" + std::to_string(d) + ")");
  }
}

Vector bell_amps(int d, int m, int n) {
  Vector b = Vector::Zero(d * d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) b[j * d + mod(j + n, d)] = s * omega_pow(d, static_cast<long long>(j) * m);
  return b;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

Vector bell_product_amps(int d, const BellTuple& k) {
  Vector acc = Vector::Ones(1);
  for (std::size_t s = 0; s + 1 < k.size(); s += 2) acc = kron(acc, bell_amps(d, k[s], k[s + 1]));
  return acc;
}

DensityOperator mixture(int d, int N, const std::vector<TableEntry>& table) {
  const auto dim = static_cast<Eigen::Index>(checked_power(d, static_cast<std::size_t>(2 * N), max_density_dim()));
  Matrix rho = Matrix::Zero(dim, dim);
  for (const auto& e : table) {
    if (e.w == 0.0) continue;
    const Vector b = bell_product_amps(d, e.k);
    rho.noalias() += e.w * b * b.adjoint();
  }
  return DensityOperator(Register(d, labels::channel_register(N)), std::move(rho));
}

}  // namespace

std::string to_string(ChannelKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "unknown";
}

ChannelKind parse_channel_kind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (name == kn.name) return kn.kind;
  }
  throw InvalidArgument("unknown channel kind '" + std::string(name) + "'");
}

std::string format_tuple(const BellTuple& k) {
  std::string out = "(";
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(k[i]);
  }
  return out + ")";
}

bool satisfies_constraints(const BellTuple& k, int d, int u, int v) {
  long long odd = 0, even = 0;
  for (std::size_t i = 0; i < k.size(); ++i) (i % 2 == 0 ? odd : even) += k[i];
  return mod(odd, d) == mod(u, d) && mod(even, d) == mod(v, d);
}

std::vector<BellTuple> enumerate_constrained_tuples(int d, int N, int u, int v) {
  check_dims(d, N);
  // Free choice of the first N-1 pairs; the last pair is fixed by the residues.
  std::vector<BellTuple> out;
  BellTuple k(static_cast<std::size_t>(2 * N), 0);
  const std::size_t free = static_cast<std::size_t>(2 * (N - 1));
  while (true) {
    long long odd = 0, even = 0;
    for (std::size_t i = 0; i < free; ++i) (i % 2 == 0 ? odd : even) += k[i];
    k[free] = mod(u - odd, d);
    k[free + 1] = mod(v - even, d);
    out.push_back(k);
    std::size_t pos = free;
    while (pos > 0) {
      --pos;
      if (++k[pos] < d) break;
      k[pos] = 0;
      if (pos == 0) return out;
    }
    if (free == 0) return out;
  }
}

void validate(const ChannelSpec& spec) {
  check_dims(spec.d, spec.N);
  if (spec.u < 0 || spec.u >= spec.d || spec.v < 0 || spec.v >= spec.d) {
    throw InvalidArgument("u and v must lie in 0..d-1");
  }
  switch (spec.kind) {
    case ChannelKind::Telecloning:
    case ChannelKind::Ghz:
    case ChannelKind::BetaWeighted:
    case ChannelKind::SmolinLike:
      if (spec.u != 0 || spec.v != 0) {
        throw ConstraintError(to_string(spec.kind) + " channels have u = v = 0");
      }
      break;
    case ChannelKind::ProductBell:
      check_tuple_shape(spec.c, spec.d, spec.N);
      check_constraint(spec.c, spec.d, spec.u, spec.v);
      break;
    case ChannelKind::GeneralPure:
    case ChannelKind::Mixed: {
      if (spec.table.empty()) throw InvalidArgument(to_string(spec.kind) + " channel needs a non-empty table");
      std::set<BellTuple> seen;
      double total = 0.0;
      for (const auto& e : spec.table) {
        check_tuple_shape(e.k, spec.d, spec.N);
        check_constraint(e.k, spec.d, spec.u, spec.v);
        if (!(e.w >= 0.0)) throw InvalidArgument("weight of tuple " + format_tuple(e.k) + " is negative");
        if (!seen.insert(e.k).second) throw InvalidArgument("tuple " + format_tuple(e.k) + " listed twice");
        total += e.w;
      }
      if (std::abs(total - 1.0) > 1e-9) {
        throw InvalidArgument("table weights sum to " + std::to_string(total) + ", expected 1");
      }
      break;
    }
  }
}

StabilizerGroups channel_groups(int N) {
  StabilizerGroups g;
  for (int s = 1; s <= N; ++s) {
    g.inverse_phase.push_back(labels::channel_a(s));
    g.forward_phase.push_back(labels::prime(s));
  }
  return g;
}

PureState bell_product(int d, const BellTuple& k) {
  if (k.empty() || k.size() % 2 != 0) throw InvalidArgument("Bell tuple must have an even, non-zero length");
  const int N = static_cast<int>(k.size() / 2);
  for (int x : k) {
    if (x < 0 || x >= d) throw InvalidArgument("tuple " + format_tuple(k) + " has an entry outside 0..d-1");
  }
  checked_power(d, k.size(), max_pure_dim());
  return PureState(Register(d, labels::channel_register(N)), bell_product_amps(d, k));
}

PureState telecloning_channel(int d, int N) {
  check_dims(d, N);
  checked_power(d, static_cast<std::size_t>(2 * N), max_pure_dim());
  Register reg(d, labels::telecloning_register(N));
  const std::uint64_t block = reg.total_dim() / static_cast<std::uint64_t>(d);
  Vector amps(static_cast<Eigen::Index>(reg.total_dim()));
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j) {
    amps.segment(static_cast<Eigen::Index>(block) * j, static_cast<Eigen::Index>(block)) = s * clone_branch(d, N, j).amps();
  }
  return PureState(std::move(reg), std::move(amps));
}

PureState telecloning_as_channel(int d, int N) {
  std::map<std::string, std::string> names{{labels::kAlicePort, labels::channel_a(N)},
                                           {labels::clone(N), labels::prime(N)}};
  for (int s = 1; s < N; ++s) {
    names[labels::clone(s)] = labels::channel_a(s);
    names[labels::ancilla(s)] = labels::prime(s);
  }
  const auto order = labels::channel_register(N);
  return reorder(rename(telecloning_channel(d, N), names), order);
}

PureState general_pure_channel(const ChannelSpec& spec) {
  if (spec.kind != ChannelKind::GeneralPure) throw InvalidArgument("general_pure_channel needs a general-pure spec");
  validate(spec);
  Vector amps = Vector::Zero(static_cast<Eigen::Index>(checked_power(spec.d, static_cast<std::size_t>(2 * spec.N), max_pure_dim())));
  for (const auto& e : spec.table) {
    if (e.w == 0.0) continue;
    amps += std::sqrt(e.w) * bell_product_amps(spec.d, e.k);
  }
  return PureState(Register(spec.d, labels::channel_register(spec.N)), std::move(amps));
}

PureState ghz_channel(int d, int N) {
  check_dims(d, N);
  checked_power(d, static_cast<std::size_t>(2 * N), max_pure_dim());
  return ghz_state(d, labels::channel_register(N), 0, 0);
}

PureState beta_weighted_channel(const CloneFamily& family) {
  const int d = family.d;
  const int N = family.N;
  checked_power(d, static_cast<std::size_t>(2 * N), max_pure_dim());
  const Eigen::Index rest = family.bbar.front().size();
  Vector amps = Vector::Zero(rest * d * d);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int x = 0; x < d; ++x) {
    for (int y = 0; y < d; ++y) {
      amps += (s * family.beta[y]) * kron(family.bbar_state(x, y), bell_amps(d, mod(-x, d), mod(-y, d)));
    }
  }
  std::vector<std::string> names;
  for (int t = 1; t < N; ++t) names.push_back(labels::channel_a(t));
  for (int t = 1; t < N; ++t) names.push_back(labels::prime(t));
  names.push_back(labels::channel_a(N));
  names.push_back(labels::prime(N));
  PureState joint(Register(d, names), std::move(amps));
  const auto order = labels::channel_register(N);
  return reorder(joint, order);
}

PureState beta_weighted_channel(int d, int N) {
  check_dims(d, N);
  return beta_weighted_channel(extract_clone_decomposition(d, N));
}

PureState product_bell_channel(int d, int N, const BellTuple& c, int u, int v) {
  check_dims(d, N);
  check_tuple_shape(c, d, N);
  check_constraint(c, d, u, v);
  return bell_product(d, c);
}

DensityOperator mixed_channel(const ChannelSpec& spec) {
  if (spec.kind != ChannelKind::Mixed && spec.kind != ChannelKind::SmolinLike) {
    throw InvalidArgument("mixed_channel needs a mixed or smolin-like spec");
  }
  if (spec.kind == ChannelKind::SmolinLike) return smolin_like(spec.d, spec.N);
  validate(spec);
  return mixture(spec.d, spec.N, spec.table);
}

std::pair<std::size_t, PureState> sample_mixed(const ChannelSpec& spec, Rng& rng) {
  if (spec.kind != ChannelKind::Mixed && spec.kind != ChannelKind::SmolinLike) {
    throw InvalidArgument("sample_mixed needs a mixed or smolin-like spec");
  }
  validate(spec);
  const auto table = spec.kind == ChannelKind::SmolinLike ? uniform_table(spec.d, spec.N, 0, 0) : spec.table;
  std::vector<double> w;
  for (const auto& e : table) w.push_back(e.w);
  const std::size_t i = sample_index(w, rng);
  return {i, bell_product(spec.d, table[i].k)};
}

std::vector<TableEntry> uniform_table(int d, int N, int u, int v) {
  auto tuples = enumerate_constrained_tuples(d, N, u, v);
  const double w = 1.0 / static_cast<double>(tuples.size());
  std::vector<TableEntry> out;
  for (auto& k : tuples) out.push_back({std::move(k), w});
  return out;
}

DensityOperator smolin_like(int d, int N) {
  check_dims(d, N);
  checked_power(d, static_cast<std::size_t>(2 * N), max_density_dim());
  return mixture(d, N, uniform_table(d, N, 0, 0));
}

ChannelResource ChannelResource::pure(PureState state, int N, int u, int v) {
  const auto expected = labels::channel_register(N);
  if (state.labels() != expected) throw InvalidArgument("channel state must live on A'_1,1',...,A'_N,N'");
  ChannelResource r;
  r.d_ = state.d();
  r.N_ = N;
  r.u_ = u;
  r.v_ = v;
  r.state_ = std::move(state);
  return r;
}

ChannelResource ChannelResource::ensemble(int d, int N, std::vector<TableEntry> table, int u, int v) {
  ChannelSpec spec;
  spec.kind = ChannelKind::Mixed;
  spec.d = d;
  spec.N = N;
  spec.u = u;
  spec.v = v;
  spec.table = table;
  validate(spec);
  ChannelResource r;
  r.d_ = d;
  r.N_ = N;
  r.u_ = u;
  r.v_ = v;
  r.table_ = std::move(table);
  return r;
}

const PureState& ChannelResource::state() const {
  if (!state_) throw InvalidArgument("mixed channel has no single pure state");
  return *state_;
}

PureState ChannelResource::member(std::size_t i) const {
  if (state_) {
    if (i != 0) throw InvalidArgument("pure channel has a single member");
    return *state_;
  }
  return bell_product(d_, table_.at(i).k);
}

std::pair<std::size_t, PureState> ChannelResource::draw(Rng& rng) const {
  if (state_) return {0, *state_};
  std::vector<double> w;
  for (const auto& e : table_) w.push_back(e.w);
  const std::size_t i = sample_index(w, rng);
  return {i, bell_product(d_, table_[i].k)};
}

DensityOperator ChannelResource::density() const {
  if (state_) return DensityOperator::from_pure(*state_);
  return mixture(d_, N_, table_);
}

ChannelResource make_channel(const ChannelSpec& spec) {
  validate(spec);
  const int d = spec.d, N = spec.N;
  switch (spec.kind) {
    case ChannelKind::Telecloning:
      return ChannelResource::pure(telecloning_as_channel(d, N), N, 0, 0);
    case ChannelKind::GeneralPure:
      return ChannelResource::pure(general_pure_channel(spec), N, spec.u, spec.v);
    case ChannelKind::Ghz:
      return ChannelResource::pure(ghz_channel(d, N), N, 0, 0);
    case ChannelKind::BetaWeighted:
      return ChannelResource::pure(beta_weighted_channel(d, N), N, 0, 0);
    case ChannelKind::ProductBell:
      return ChannelResource::pure(product_bell_channel(d, N, spec.c, spec.u, spec.v), N, spec.u, spec.v);
    case ChannelKind::Mixed:
      return ChannelResource::ensemble(d, N, spec.table, spec.u, spec.v);
    case ChannelKind::SmolinLike:
      return ChannelResource::ensemble(d, N, uniform_table(d, N, 0, 0), 0, 0);
  }
  throw InvalidArgument("unhandled channel kind");
}

}  // namespace qric
