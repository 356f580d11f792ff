#include "qric/protocols.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qric/labels.h"

namespace qric {

// ---------------------------------------------------------------------------
// PartyRegistry

void PartyRegistry::assign(const std::string& party, std::vector<std::string> labels) {
  if (has_party(party)) throw InvalidArgument("party '" + party + "' assigned twice");
  for (const auto& label : labels) {
    if (!owner_.emplace(label, party).second) {
      throw InvalidArgument("label '" + label + "' already owned by " + owner_.at(label));
    }
  }
  parties_.emplace_back(party, std::move(labels));
}

const std::vector<std::string>& PartyRegistry::labels_of(const std::string& party) const {
  for (const auto& [name, labels] : parties_) {
    if (name == party) return labels;
  }
  throw InvalidArgument("unknown party '" + party + "'");
}

const std::string& PartyRegistry::owner_of(const std::string& label) const {
  auto it = owner_.find(label);
  if (it == owner_.end()) throw InvalidArgument("no party owns label '" + label + "'");
  return it->second;
}

bool PartyRegistry::has_party(const std::string& party) const {
  for (const auto& p : parties_) {
    if (p.first == party) return true;
  }
  return false;
}

void PartyRegistry::validate(const Register& reg) const {
  for (const auto& label : reg.labels()) owner_of(label);
  for (const auto& [label, party] : owner_) {
    if (!reg.contains(label)) throw InvalidArgument(party + " owns '" + label + "', which is not in the register");
  }
}

namespace {
std::string bob(int s) { return "Bob_" + std::to_string(s); }
std::string charlie(int s) { return "Charlie_" + std::to_string(s); }
const std::string kDiana = "Diana";
const std::string kAlice = "Alice";
}  // namespace

PartyRegistry PartyRegistry::telecloning(int N) {
  PartyRegistry r;
  r.assign(kAlice, {labels::kInput, labels::kAlicePort});
  for (int s = 1; s <= N; ++s) r.assign(bob(s), {labels::clone(s)});
  for (int s = 1; s < N; ++s) r.assign(charlie(s), {labels::ancilla(s)});
  return r;
}

PartyRegistry PartyRegistry::ric(int N) {
  PartyRegistry r;
  for (int s = 1; s < N; ++s) r.assign(bob(s), {labels::clone(s), labels::prime(s)});
  for (int s = 1; s < N; ++s) r.assign(charlie(s), {labels::ancilla(s), labels::channel_a(s)});
  r.assign(bob(N), {labels::clone(N), labels::prime(N)});
  r.assign(kDiana, {labels::channel_a(N)});
  return r;
}

PartyRegistry PartyRegistry::ric_mm_ghz(int N, int L) {
  PartyRegistry r;
  for (int s = 1; s < N; ++s) r.assign(bob(s), {labels::clone(s), labels::prime(s)});
  for (int s = 1; s < N; ++s) r.assign(charlie(s), {labels::ancilla(s), labels::channel_a(s)});
  r.assign(bob(N), {labels::clone(N), labels::prime(N)});
  std::vector<std::string> legs;
  for (int l = 1; l <= L; ++l) legs.push_back(labels::diana_leg(l));
  r.assign(kDiana, legs);
  return r;
}

PartyRegistry PartyRegistry::ric_mm_multi(int N, int L) {
  PartyRegistry r;
  const int P = N - L;
  for (int s = 1; s <= P; ++s) r.assign(bob(s), {labels::clone(s), labels::prime(s)});
  for (int s = 1; s <= P; ++s) r.assign(charlie(s), {labels::ancilla(s), labels::channel_a(s)});
  std::vector<std::string> diana;
  for (int s = P + 1; s <= N; ++s) {
    r.assign(bob(s), {labels::clone(s), labels::prime(s)});
    diana.push_back(labels::channel_a(s));
  }
  r.assign(kDiana, diana);
  return r;
}

double Transcript::total_bits() const {
  double t = 0.0;
  for (const auto& m : messages) t += m.bits;
  return t;
}

// ---------------------------------------------------------------------------
// Measurement trees

namespace {

void check_input(std::span<const cplx> x, int d) {
  if (static_cast<int>(x.size()) != d) throw InvalidArgument("input state must have d amplitudes");
  double n2 = 0.0;
  for (auto c : x) n2 += std::norm(c);
  if (std::abs(n2 - 1.0) > kTolerance) throw InvalidArgument("input state is not normalized");
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > (std::uint64_t{1} << 62) / base) return std::uint64_t{1} << 62;
    out *= base;
  }
  return out;
}

void descend(const PureState& state, std::span<const MeasurementStep> steps, std::size_t depth, Leaf& path,
             TreeStats& stats, const std::function<void(const Leaf&)>& visit) {
  if (depth == steps.size()) {
    ++stats.visited;
    stats.covered_probability += path.probability;
    Leaf leaf{path.outcomes, path.probability, state};
    visit(leaf);
    return;
  }
  for (auto& br : gbm_branches(state, steps[depth].pair, PairHandling::Remove)) {
    const double p = path.probability * br.outcome.probability;
    if (br.is_null() || p < kNullBranchProbability) {
      ++stats.null_leaves;
      continue;
    }
    path.outcomes.push_back(br.outcome);
    const double saved = path.probability;
    path.probability = p;
    descend(*br.post_state, steps, depth + 1, path, stats, visit);
    path.probability = saved;
    path.outcomes.pop_back();
  }
}

// One path; when `forced_first` is set the first outcome is fixed and the
// path probability still carries its Born weight.
std::optional<Leaf> walk(const PureState& state, std::span<const MeasurementStep> steps, Rng& rng,
                         std::optional<int> forced_first) {
  std::vector<GbmOutcome> outcomes;
  double prob = 1.0;
  PureState cur = state;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    Branch br = [&] {
      if (i == 0 && forced_first) {
        const int d = cur.d();
        return gbm_project(cur, steps[i].pair, *forced_first / d, *forced_first % d, PairHandling::Remove);
      }
      return gbm_sample(cur, steps[i].pair, rng, PairHandling::Remove);
    }();
    if (br.is_null()) return std::nullopt;
    prob *= br.outcome.probability;
    outcomes.push_back(br.outcome);
    cur = *br.post_state;
  }
  return Leaf{std::move(outcomes), prob, std::move(cur)};
}

}  // namespace

TreeStats enumerate_leaves(const PureState& state, std::span<const MeasurementStep> steps,
                           const std::function<void(const Leaf&)>& visit) {
  TreeStats stats;
  stats.total_leaves = saturating_pow(static_cast<std::uint64_t>(state.d()) * static_cast<std::uint64_t>(state.d()), steps.size());
  Leaf path{{}, 1.0, state};
  descend(state, steps, 0, path, stats, visit);
  return stats;
}

Leaf sample_leaf(const PureState& state, std::span<const MeasurementStep> steps, Rng& rng) {
  auto leaf = walk(state, steps, rng, std::nullopt);
  if (!leaf) throw VerificationError("sampled a null branch");
  return *leaf;
}

// ---------------------------------------------------------------------------
// Telecloning

namespace {

double bits_per_message(int d) { return 2.0 * std::log2(static_cast<double>(d)); }

double single_qudit_fidelity(const DensityOperator& rho, std::span<const cplx> x) {
  Vector v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
  return (v.adjoint() * rho.mat() * v)(0, 0).real();
}

Vector to_vector(std::span<const cplx> x) {
  Vector v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t i = 0; i < x.size(); ++i) v[static_cast<Eigen::Index>(i)] = x[i];
  return v;
}

TelecloneBranch finish_telecloning(const Branch& br, std::span<const cplx> x, int d, int N, bool correct_ancillas,
                                   const PureState& ideal, const PartyRegistry& registry) {
  const int m = br.outcome.m, n = br.outcome.n;
  TelecloneBranch out;
  out.m = m;
  out.n = n;
  out.probability = br.outcome.probability;
  PureState cur = *br.post_state;
  const double bits = bits_per_message(d);
  Transcript& tr = out.transcript;
  tr.parties = registry.parties();
  tr.outcomes.push_back(br.outcome);
  const Matrix fwd = weyl_matrix(WeylOp::r(d, m, n));
  const Matrix inv = weyl_matrix(WeylOp::r(d, -m, n));
  for (int s = 1; s <= N; ++s) {
    tr.messages.push_back({kAlice, bob(s), m, n, bits});
    tr.corrections.push_back({bob(s), labels::clone(s), WeylOp::r(d, m, n)});
    cur = apply_local(cur, fwd, labels::clone(s));
  }
  if (correct_ancillas) {
    for (int s = 1; s < N; ++s) {
      tr.messages.push_back({kAlice, charlie(s), m, n, bits});
      tr.corrections.push_back({charlie(s), labels::ancilla(s), WeylOp::r(d, -m, n)});
      cur = apply_local(cur, inv, labels::ancilla(s));
    }
  }
  for (int s = 1; s <= N; ++s) {
    const std::vector<std::string> keep{labels::clone(s)};
    out.clone_fidelities.push_back(single_qudit_fidelity(partial_trace(cur, keep), x));
  }
  out.collective_fidelity = fidelity(ideal, cur);
  tr.branch_probability = out.probability;
  tr.fidelity = *std::min_element(out.clone_fidelities.begin(), out.clone_fidelities.end());
  return out;
}

}  // namespace

TelecloneResult run_telecloning(std::span<const cplx> input, int d, int N, const TelecloneOptions& options) {
  if (d < 2 || N < 2) throw InvalidArgument("telecloning needs d >= 2 and N >= 2");
  check_input(input, d);
  checked_power(d, static_cast<std::size_t>(2 * N + 1), max_pure_dim());
  const PartyRegistry registry = PartyRegistry::telecloning(N);
  Register in_reg(d, {labels::kInput});
  const PureState joint = tensor(PureState(in_reg, to_vector(input)), telecloning_channel(d, N));
  registry.validate(joint.reg());
  const PureState ideal = clone_state(input, d, N);
  const LabelPair pair{labels::kInput, labels::kAlicePort};

  TelecloneResult result;
  result.expected_fidelity = static_cast<double>(2 * N + d - 1) / static_cast<double>(N * (d + 1));
  if (options.run.mode == RunMode::AllBranches) {
    result.exhaustive = true;
    for (const auto& br : gbm_branches(joint, pair, PairHandling::Remove)) {
      if (br.is_null()) continue;
      result.branches.push_back(finish_telecloning(br, input, d, N, options.correct_ancillas, ideal, registry));
    }
    return result;
  }
  if (options.run.trials < 1) throw InvalidArgument("trials must be at least 1");
  for (int t = 0; t < options.run.trials; ++t) {
    Rng rng = derive_rng(options.run.seed, static_cast<std::uint64_t>(t));
    const Branch br = gbm_sample(joint, pair, rng, PairHandling::Remove);
    result.branches.push_back(finish_telecloning(br, input, d, N, options.correct_ancillas, ideal, registry));
  }
  return result;
}

// ---------------------------------------------------------------------------
// RIC

std::pair<int, int> deduce_correction(std::span<const std::pair<int, int>> bob_charlie, std::pair<int, int> bob_n,
                                      int u, int v, int d) {
  if (d < 2) throw InvalidArgument("d must be at least 2");
  auto in_range = [d](int a) { return a >= 0 && a < d; };
  long long up = 0, vp = 0;
  for (const auto& [a, b] : bob_charlie) {
    if (!in_range(a) || !in_range(b)) throw InvalidArgument("outcome index out of range");
    up += a;
    vp += b;
  }
  if (!in_range(bob_n.first) || !in_range(bob_n.second) || !in_range(u) || !in_range(v)) {
    throw InvalidArgument("outcome index out of range");
  }
  return {mod(bob_n.first + up - u, d), mod(bob_n.second + vp - v, d)};
}

namespace {

// Everything a concentration run needs besides the joint state.
struct ConcentrationPlan {
  int d = 2;
  std::vector<MeasurementStep> steps;
  std::size_t shared_steps = 0;  // leading Bob/Charlie steps summed into (u', v')
  int u = 0;
  int v = 0;
  // Diana's target qudits: the i-th uses the i-th trailing outcome (or the
  // single trailing outcome when `fan` is set).
  std::vector<std::string> targets;
  bool fan = false;
  PureState target_state;
  PartyRegistry registry;
};

void check_steps(const ConcentrationPlan& plan, const Register& joint) {
  plan.registry.validate(joint);
  for (const auto& st : plan.steps) {
    for (const auto* label : {&st.pair.first, &st.pair.second}) {
      if (plan.registry.owner_of(*label) != st.party) {
        throw InvalidArgument("registry gives '" + *label + "' to " + plan.registry.owner_of(*label) + ", but " +
                              st.party + " measures it");
      }
    }
  }
  for (const auto& t : plan.targets) {
    if (plan.registry.owner_of(t) != kDiana) throw InvalidArgument("Diana must own '" + t + "'");
  }
}

RicBranch finish_concentration(const ConcentrationPlan& plan, const Leaf& leaf, std::size_t member, double weight) {
  const int d = plan.d;
  RicBranch out;
  out.channel_member = member;
  out.probability = weight * leaf.probability;
  Transcript& tr = out.transcript;
  tr.parties = plan.registry.parties();
  tr.outcomes = leaf.outcomes;
  const double bits = bits_per_message(d);
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    tr.messages.push_back({plan.steps[i].party, kDiana, leaf.outcomes[i].m, leaf.outcomes[i].n, bits});
  }
  std::vector<std::pair<int, int>> shared;
  for (std::size_t i = 0; i < plan.shared_steps; ++i) shared.emplace_back(leaf.outcomes[i].m, leaf.outcomes[i].n);

  PureState cur = leaf.state;
  for (std::size_t i = 0; i < plan.targets.size(); ++i) {
    const auto& last = leaf.outcomes[plan.fan ? plan.shared_steps : plan.shared_steps + i];
    const auto [x, y] = deduce_correction(shared, {last.m, last.n}, plan.u, plan.v, d);
    if (i == 0) tr.correction = std::pair{x, y};
    const WeylOp op = (plan.fan && i > 0) ? WeylOp::r(d, 0, y) : WeylOp::r(d, x, y);
    tr.corrections.push_back({kDiana, plan.targets[i], op});
    cur = apply_local(cur, weyl_matrix(op), plan.targets[i]);
  }
  cur = reorder(cur, plan.target_state.labels());
  out.fidelity = fidelity(plan.target_state, cur);
  tr.branch_probability = out.probability;
  tr.fidelity = out.fidelity;
  return out;
}

RicResult run_concentration(const ConcentrationPlan& plan, const PureState& input, const ChannelResource& channel,
                            const std::function<PureState(const PureState&)>& shape_channel,
                            const RunOptions& options) {
  RicResult result;
  auto record = [&](RicBranch br) {
    result.min_fidelity = std::min(result.min_fidelity, br.fidelity);
    result.total_probability += br.probability;
    result.branches.push_back(std::move(br));
  };
  auto joint_for = [&](const PureState& member) {
    PureState joint = tensor(input, shape_channel(member));
    check_steps(plan, joint.reg());
    return joint;
  };

  const std::size_t members = channel.is_mixed() ? channel.table().size() : 1;
  const std::uint64_t per_member =
      saturating_pow(static_cast<std::uint64_t>(plan.d) * static_cast<std::uint64_t>(plan.d), plan.steps.size());
  const std::uint64_t total = per_member * members;

  if (options.mode == RunMode::AllBranches && total <= options.max_branches) {
    result.stats.exhaustive = true;
    result.stats.total_leaves = total;
    for (std::size_t i = 0; i < members; ++i) {
      const double w = channel.is_mixed() ? channel.table()[i].w : 1.0;
      if (w == 0.0) continue;
      const PureState joint = joint_for(channel.member(i));
      const TreeStats st = enumerate_leaves(joint, plan.steps, [&](const Leaf& leaf) {
        record(finish_concentration(plan, leaf, i, w));
      });
      result.stats.visited += st.visited;
      result.stats.null_leaves += st.null_leaves;
      result.stats.covered_probability += w * st.covered_probability;
    }
    return result;
  }

  if (options.trials < 1) throw InvalidArgument("trials must be at least 1");
  const bool stratified = options.mode == RunMode::AllBranches;
  const int strata = plan.d * plan.d;
  result.stats.exhaustive = false;
  result.stats.total_leaves = total;
  std::set<std::pair<std::size_t, std::vector<int>>> seen;
  for (int t = 0; t < options.trials; ++t) {
    Rng rng = derive_rng(options.seed, static_cast<std::uint64_t>(t));
    const auto [member, state] = channel.draw(rng);
    const double w = channel.is_mixed() ? channel.table()[member].w : 1.0;
    const PureState joint = joint_for(state);
    std::optional<Leaf> leaf;
    if (stratified) {
      // Cycle through first outcomes, skipping ones with no support.
      for (int k = 0; k < strata && !leaf; ++k) leaf = walk(joint, plan.steps, rng, (t + k) % strata);
    } else {
      leaf = walk(joint, plan.steps, rng, std::nullopt);
    }
    if (!leaf) {
      ++result.stats.null_leaves;
      continue;
    }
    std::vector<int> key;
    for (const auto& o : leaf->outcomes) key.insert(key.end(), {o.m, o.n});
    if (seen.emplace(member, key).second) result.stats.covered_probability += w * leaf->probability;
    ++result.stats.visited;
    // Sampled branches report the path's own Born weight (times the member weight).
    record(finish_concentration(plan, *leaf, member, w));
  }
  return result;
}

std::vector<MeasurementStep> ric_steps(int first_block, const std::vector<int>& last_block) {
  std::vector<MeasurementStep> steps;
  for (int s = 1; s <= first_block; ++s) steps.push_back({bob(s), {labels::clone(s), labels::prime(s)}});
  for (int s = 1; s <= first_block; ++s) steps.push_back({charlie(s), {labels::channel_a(s), labels::ancilla(s)}});
  for (int s : last_block) steps.push_back({bob(s), {labels::clone(s), labels::prime(s)}});
  return steps;
}

PureState single_qudit(const std::string& label, std::span<const cplx> x) {
  return PureState(Register(static_cast<int>(x.size()), {label}), to_vector(x));
}

}  // namespace

RicResult run_ric(const PureState& clone, std::span<const cplx> x, const ChannelResource& channel,
                  const PartyRegistry& registry, const RunOptions& options) {
  const int d = channel.d();
  const int N = channel.N();
  check_input(x, d);
  if (clone.d() != d) throw InvalidArgument("clone state and channel dimensions differ");
  if (clone.reg().size() != static_cast<std::size_t>(2 * N - 1)) {
    throw InvalidArgument("clone state must have 2N-1 qudits");
  }
  checked_power(d, static_cast<std::size_t>(4 * N - 1), max_pure_dim());
  ConcentrationPlan plan{d, ric_steps(N - 1, {N}), static_cast<std::size_t>(2 * (N - 1)), channel.u(), channel.v(),
                         {labels::channel_a(N)}, false, single_qudit(labels::channel_a(N), x), registry};
  return run_concentration(plan, clone, channel, [](const PureState& s) { return s; }, options);
}

RicResult run_ric(std::span<const cplx> x, const ChannelResource& channel, const RunOptions& options) {
  return run_ric(clone_state(x, channel.d(), channel.N()), x, channel, PartyRegistry::ric(channel.N()), options);
}

RicResult run_mm_ghz(std::span<const cplx> x, const ChannelResource& channel, int L, const RunOptions& options) {
  const int d = channel.d();
  const int N = channel.N();
  if (L < 1) throw InvalidArgument("L must be at least 1");
  check_input(x, d);
  checked_power(d, static_cast<std::size_t>(4 * N - 2 + L), max_pure_dim());
  std::vector<std::string> legs;
  for (int l = 1; l <= L; ++l) legs.push_back(labels::diana_leg(l));

  Vector target = Vector::Zero(static_cast<Eigen::Index>(checked_power(d, static_cast<std::size_t>(L), max_pure_dim())));
  const Register leg_reg(d, legs);
  for (int j = 0; j < d; ++j) {
    const std::vector<int> dits(static_cast<std::size_t>(L), j);
    target[static_cast<Eigen::Index>(leg_reg.index(dits))] = x[static_cast<std::size_t>(j)];
  }
  ConcentrationPlan plan{d, ric_steps(N - 1, {N}), static_cast<std::size_t>(2 * (N - 1)), channel.u(), channel.v(),
                         legs, true, PureState(leg_reg, std::move(target)), PartyRegistry::ric_mm_ghz(N, L)};
  const std::string source = labels::channel_a(N);
  return run_concentration(plan, clone_state(x, d, N), channel,
                           [&](const PureState& s) { return fan_out(s, source, legs); }, options);
}

RicResult run_mm_multiqudit(const PureState& distributed, std::span<const cplx> x, int N, int L,
                            const RunOptions& options) {
  const int d = distributed.d();
  if (L < 1 || L > N) throw InvalidArgument("run_mm_multiqudit needs 1 <= L <= N");
  check_input(x, d);
  checked_power(d, static_cast<std::size_t>(4 * N - L), max_pure_dim());
  if (distributed.reg().size() != static_cast<std::size_t>(2 * N - L)) {
    throw InvalidArgument("distributed state must have 2N-L qudits");
  }
  const int P = N - L;
  std::vector<int> copies;
  std::vector<std::string> targets;
  PureState target = single_qudit(labels::channel_a(P + 1), x);
  for (int s = P + 1; s <= N; ++s) {
    copies.push_back(s);
    targets.push_back(labels::channel_a(s));
    if (s > P + 1) target = tensor(target, single_qudit(labels::channel_a(s), x));
  }
  const BellTuple zeros(static_cast<std::size_t>(2 * N), 0);
  const ChannelResource channel = ChannelResource::pure(bell_product(d, zeros), N, 0, 0);
  ConcentrationPlan plan{d,       ric_steps(P, copies), static_cast<std::size_t>(2 * P), 0, 0, targets, false,
                         target, PartyRegistry::ric_mm_multi(N, L)};
  return run_concentration(plan, distributed, channel, [](const PureState& s) { return s; }, options);
}

// ---------------------------------------------------------------------------
// Distributed inputs

BbarSource bbar_from_family(const CloneFamily& family) { return BbarSource{family.beta, family.bbar}; }

BbarSource random_bbar_source(int d, int pairs, Rng& rng) {
  if (d < 2 || pairs < 1) throw InvalidArgument("random_bbar_source needs d >= 2 and at least one pair");
  const auto order = labels::bbar_register(pairs + 1);
  const Register reg(d, order);
  checked_power(d, order.size(), max_pure_dim());
  std::vector<Vector> bbar(static_cast<std::size_t>(d * d), Vector::Zero(static_cast<Eigen::Index>(reg.total_dim())));
  // Every tuple of (phase, shift) per pair lands in exactly one (m, n) class.
  std::vector<int> k(static_cast<std::size_t>(2 * pairs), 0);
  while (true) {
    PureState term = bell_state(d, k[0], k[1], labels::clone(1), labels::ancilla(1));
    long long m = k[0], n = k[1];
    for (int s = 2; s <= pairs; ++s) {
      term = tensor(term, bell_state(d, k[2 * s - 2], k[2 * s - 1], labels::clone(s), labels::ancilla(s)));
      m += k[2 * s - 2];
      n += k[2 * s - 1];
    }
    const double r = std::sqrt(-2.0 * std::log(1.0 - uniform01(rng)));
    const cplx c = std::polar(r, 2.0 * std::numbers::pi * uniform01(rng));
    bbar[static_cast<std::size_t>(mod(m, d) * d + mod(n, d))] += c * reorder(term, order).amps();
    std::size_t pos = k.size();
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++k[pos] < d) {
        done = false;
        break;
      }
      k[pos] = 0;
    }
    if (done) break;
  }
  for (auto& b : bbar) b.normalize();
  std::vector<double> beta(static_cast<std::size_t>(d));
  double n2 = 0.0;
  for (auto& b : beta) {
    b = uniform01(rng) + 0.05;
    n2 += b * b;
  }
  for (auto& b : beta) b /= std::sqrt(n2);
  return BbarSource{BetaVector(beta), std::move(bbar)};
}

PureState synth_distributed_state(std::span<const cplx> x, int d, int N, int L, const BbarSource& source) {
  if (L < 1 || L > N) throw InvalidArgument("synth_distributed_state needs 1 <= L <= N");
  check_input(x, d);
  checked_power(d, static_cast<std::size_t>(2 * N - L), max_pure_dim());
  const int P = N - L;
  std::vector<std::string> names = labels::bbar_register(P + 1);
  for (int s = P + 1; s <= N; ++s) names.push_back(labels::clone(s));
  const Register reg(d, names);

  auto copies_of = [&](const Vector& one) {
    Vector acc = Vector::Ones(1);
    for (int i = 0; i < L; ++i) {
      Vector next(acc.size() * d);
      for (Eigen::Index a = 0; a < acc.size(); ++a) next.segment(a * d, d) = acc[a] * one;
      acc = std::move(next);
    }
    return acc;
  };

  if (P == 0) return PureState(reg, copies_of(to_vector(x)));

  if (source.beta.d() != d || source.bbar.size() != static_cast<std::size_t>(d * d)) {
    throw InvalidArgument("Bbar source does not match d");
  }
  const auto rest = static_cast<Eigen::Index>(checked_power(d, static_cast<std::size_t>(2 * P), max_pure_dim()));
  for (const auto& b : source.bbar) {
    if (b.size() != rest) throw InvalidArgument("Bbar source lives on the wrong number of qudits");
  }
  const double dev = bbar_covariance_deviation(source.bbar, d, P + 1);
  if (dev > 1e-9) throw VerificationError("Bbar source fails the covariance check (deviation " + std::to_string(dev) + ")");
  for (std::size_t a = 0; a < source.bbar.size(); ++a) {
    for (std::size_t b = a + 1; b < source.bbar.size(); ++b) {
      if (std::abs(source.bbar[a].dot(source.bbar[b])) > 1e-9) throw VerificationError("Bbar source is not orthogonal");
    }
  }

  const Vector xv = to_vector(x);
  const Eigen::Index tail = static_cast<Eigen::Index>(std::pow(d, L));
  Vector amps = Vector::Zero(rest * tail);
  const double s = 1.0 / std::sqrt(static_cast<double>(d));
  for (int m = 0; m < d; ++m) {
    for (int n = 0; n < d; ++n) {
      const Vector copies = copies_of(weyl_matrix(WeylOp::u(d, -m, n)) * xv);
      const Vector& bb = source.bbar[static_cast<std::size_t>(m * d + n)];
      const double w = s * source.beta[n];
      for (Eigen::Index r = 0; r < rest; ++r) {
        if (bb[r] != cplx{}) amps.segment(r * tail, tail) += (w * bb[r]) * copies;
      }
    }
  }
  return PureState::normalized(reg, std::move(amps));
}

double teleportation_identity_check(int d, int m, int n, int k, int k2, std::span<const cplx> x) {
  check_input(x, d);
  for (int i : {m, n, k, k2}) {
    if (i < 0 || i >= d) throw InvalidArgument("teleportation identity index out of range");
  }
  const std::string q = "N", a = "A'_N", b = "N'";
  const Vector xv = to_vector(x);
  const Register one(d, {q});
  const PureState lhs = tensor(PureState(one, weyl_matrix(WeylOp::u(d, -m, n)) * xv), bell_state(d, k, k2, a, b));
  const std::vector<std::string> order = lhs.labels();
  Vector rhs = Vector::Zero(lhs.amps().size());
  for (int p = 0; p < d; ++p) {
    for (int r = 0; r < d; ++r) {
      const long long phase = static_cast<long long>(n) * (m - k) - static_cast<long long>(n) * p +
                              static_cast<long long>(r) * k;
      const PureState target(Register(d, {a}), weyl_matrix(WeylOp::u(d, -p, r)) * xv);
      const PureState term = tensor(bell_state(d, mod(p + k - m, d), mod(r + k2 - n, d), q, b), target);
      rhs += omega_pow(d, phase) / static_cast<double>(d) * reorder(term, order).amps();
    }
  }
  return (lhs.amps() - rhs).cwiseAbs().maxCoeff();
}

}  // namespace qric
