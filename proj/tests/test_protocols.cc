#include <gtest/gtest.h>

#include "oracles.h"
#include "qric/analysis.h"
#include "qric/json_io.h"
#include "qric/labels.h"
#include "qric/protocols.h"

using namespace qric;

namespace {

std::vector<cplx> seeded_input(int d, std::uint64_t seed) {
  Rng rng = derive_rng(seed, 1000);
  return random_unit_vector(static_cast<std::size_t>(d), rng);
}

RunOptions all_branches() {
  RunOptions o;
  o.mode = RunMode::AllBranches;
  return o;
}

RunOptions sampled(int trials, std::uint64_t seed = 20240611) {
  RunOptions o;
  o.trials = trials;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(Telecloning, EveryBranchHitsOptimalFidelity) {
  for (auto [d, N] : {std::pair{2, 2}, {2, 3}, {3, 2}, {4, 2}, {3, 3}}) {
    TelecloneOptions opts;
    opts.run = all_branches();
    const TelecloneResult r = run_telecloning(seeded_input(d, 1), d, N, opts);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_EQ(r.branches.size(), static_cast<std::size_t>(d * d));
    const double f = clone_fidelity_formula(d, N);
    for (const auto& b : r.branches) {
      ASSERT_EQ(b.clone_fidelities.size(), static_cast<std::size_t>(N));
      for (double x : b.clone_fidelities) EXPECT_NEAR(x, f, 1e-9) << "d=" << d << " N=" << N;
      EXPECT_NEAR(b.probability, 1.0 / (d * d), 1e-12);
      EXPECT_NEAR(b.collective_fidelity, 1.0, 1e-9);
    }
    EXPECT_NEAR(r.expected_fidelity, f, 1e-9);
  }
}

TEST(Telecloning, FormulaValues) {
  EXPECT_NEAR(clone_fidelity_formula(2, 2), 5.0 / 6.0, 1e-15);
  EXPECT_NEAR(clone_fidelity_formula(2, 3), 7.0 / 9.0, 1e-15);
  EXPECT_NEAR(clone_fidelity_formula(3, 2), 0.75, 1e-15);
  EXPECT_NEAR(clone_fidelity_formula(4, 2), 0.7, 1e-15);
  EXPECT_NEAR(clone_fidelity_formula(3, 3), 2.0 / 3.0, 1e-15);
}

TEST(Telecloning, SkippingAncillaCorrectionsKeepsCloneFidelity) {
  TelecloneOptions opts;
  opts.run = all_branches();
  opts.correct_ancillas = false;
  const TelecloneResult r = run_telecloning(seeded_input(3, 2), 3, 2, opts);
  for (const auto& b : r.branches)
    for (double f : b.clone_fidelities) EXPECT_NEAR(f, 0.75, 1e-9);
}

TEST(Telecloning, ReducedCloneFromExplicitProjection) {
  // Project (t, t') onto B^{00} by hand; no correction is needed on that branch.
  const int d = 2, N = 2;
  const auto x = seeded_input(d, 3);
  Vector xv(2);
  xv << x[0], x[1];
  const PureState chan = telecloning_channel(d, N);
  const Vector full = oracle::kron(xv, chan.amps());
  const Eigen::Index rest = chan.amps().size() / d;
  const Matrix contract = oracle::kron(Matrix(oracle::bell(d, 0, 0).adjoint()), Matrix(Matrix::Identity(rest, rest)));
  const Vector post = (contract * full).normalized();
  const PureState after(Register(d, {"1", "2", "A_1"}), post);
  const DensityOperator rho = partial_trace(after, std::vector<std::string>{"1"});
  const double f = (xv.adjoint() * rho.mat() * xv)(0, 0).real();
  EXPECT_NEAR(f, 5.0 / 6.0, 1e-12);
}

TEST(Telecloning, TranscriptAndDeterminism) {
  TelecloneOptions opts;
  opts.run = sampled(5, 4);
  const TelecloneResult a = run_telecloning(seeded_input(2, 1), 2, 3, opts);
  const TelecloneResult b = run_telecloning(seeded_input(2, 1), 2, 3, opts);
  ASSERT_EQ(a.branches.size(), 5u);
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    EXPECT_EQ(a.branches[i].m, b.branches[i].m);
    EXPECT_EQ(a.branches[i].n, b.branches[i].n);
    EXPECT_EQ(to_json(a.branches[i].transcript).dump(), to_json(b.branches[i].transcript).dump());
    for (const auto& msg : a.branches[i].transcript.messages) {
      EXPECT_EQ(msg.from, "Alice");
      EXPECT_NEAR(msg.bits, 2.0, 1e-12);
    }
  }
}

TEST(Telecloning, SizeGuard) {
  EXPECT_THROW(run_telecloning(seeded_input(2, 1), 2, 9, TelecloneOptions{}), SizeGuardError);
}

TEST(Correction, Arithmetic) {
  const std::vector<std::pair<int, int>> zeros{{0, 0}, {0, 0}};
  EXPECT_EQ(deduce_correction(zeros, {0, 0}, 0, 0, 2), (std::pair<int, int>{0, 0}));
  // u' = 2, v' = 1, Bob_N (1, 2): x = 1 + 2 = 0, y = 2 + 1 = 0 mod 3
  const std::vector<std::pair<int, int>> outs{{1, 0}, {1, 1}};
  EXPECT_EQ(deduce_correction(outs, {1, 2}, 0, 0, 3), (std::pair<int, int>{0, 0}));
  EXPECT_EQ(deduce_correction(outs, {1, 2}, 1, 2, 3), (std::pair<int, int>{2, 1}));
}

TEST(Ric, GhzQubitsAllBranches) {
  const RicResult r = run_ric(seeded_input(2, 5), make_channel(preset_spec("ghz", 2, 2)), all_branches());
  EXPECT_TRUE(r.stats.exhaustive);
  EXPECT_EQ(r.stats.total_leaves, 64u);
  EXPECT_EQ(r.stats.visited + r.stats.null_leaves, 64u);
  EXPECT_NEAR(r.total_probability, 1.0, 1e-9);
  for (const auto& b : r.branches) EXPECT_NEAR(b.fidelity, 1.0, 1e-9);
}

TEST(Ric, EveryPresetQutritsAllBranches) {
  for (const char* name : {"ghz", "beta", "bell-product"}) {
    const RicResult r = run_ric(seeded_input(3, 6), make_channel(preset_spec(name, 3, 2)), all_branches());
    EXPECT_EQ(r.stats.total_leaves, 729u) << name;
    EXPECT_NEAR(r.total_probability, 1.0, 1e-9) << name;
    EXPECT_NEAR(r.min_fidelity, 1.0, 1e-9) << name;
  }
}

TEST(Ric, ProductBellSampled) {
  ChannelSpec s;
  s.kind = ChannelKind::ProductBell;
  s.d = 3;
  s.N = 2;
  s.c = {1, 2, 2, 1};
  const RicResult r = run_ric(seeded_input(3, 7), make_channel(s), sampled(30));
  EXPECT_EQ(r.branches.size(), 30u);
  for (const auto& b : r.branches) EXPECT_NEAR(b.fidelity, 1.0, 1e-9);
}

TEST(Ric, MixedChannelsSampled) {
  for (const char* name : {"smolin", "mixed-uniform"}) {
    for (int d : {2, 3}) {
      const RicResult r = run_ric(seeded_input(d, 8), make_channel(preset_spec(name, d, 2)), sampled(100));
      EXPECT_EQ(r.branches.size(), 100u);
      for (const auto& b : r.branches) EXPECT_NEAR(b.fidelity, 1.0, 1e-9) << name << " d=" << d;
    }
  }
}

TEST(Ric, NonzeroResiduesUseTheShiftedCorrection) {
  ChannelSpec s;
  s.kind = ChannelKind::GeneralPure;
  s.d = 3;
  s.N = 2;
  s.u = 1;
  s.v = 2;
  s.table = uniform_table(3, 2, 1, 2);
  const RicResult r = run_ric(seeded_input(3, 9), make_channel(s), all_branches());
  EXPECT_NEAR(r.min_fidelity, 1.0, 1e-9);
  EXPECT_NEAR(r.total_probability, 1.0, 1e-9);
}

TEST(Ric, ThreeClones) {
  const RicResult r = run_ric(seeded_input(2, 10), make_channel(preset_spec("beta", 2, 3)), all_branches());
  EXPECT_NEAR(r.min_fidelity, 1.0, 1e-9);
}

TEST(Ric, TelecloningChannelOnlyWorksForQubits) {
  const RicResult q = run_ric(seeded_input(2, 11), make_channel(preset_spec("telecloning", 2, 2)), all_branches());
  EXPECT_NEAR(q.min_fidelity, 1.0, 1e-9);
  const RicResult t = run_ric(seeded_input(3, 11), make_channel(preset_spec("telecloning", 3, 2)), all_branches());
  EXPECT_LT(t.min_fidelity, 0.99);
}

TEST(Ric, TranscriptMatchesCorrectionRule) {
  const int d = 3, N = 2;
  const RicResult r = run_ric(seeded_input(d, 12), make_channel(preset_spec("ghz", d, N)), sampled(20));
  for (const auto& b : r.branches) {
    const Transcript& t = b.transcript;
    ASSERT_EQ(t.outcomes.size(), static_cast<std::size_t>(2 * N - 1));
    std::vector<std::pair<int, int>> bc;
    for (int i = 0; i < 2 * (N - 1); ++i) bc.emplace_back(t.outcomes[i].m, t.outcomes[i].n);
    const auto expect = deduce_correction(bc, {t.outcomes.back().m, t.outcomes.back().n}, 0, 0, d);
    ASSERT_TRUE(t.correction.has_value());
    EXPECT_EQ(*t.correction, expect);
    EXPECT_NEAR(t.total_bits(), (2 * N - 1) * 2.0 * std::log2(3.0), 1e-12);
    for (const auto& m : t.messages) EXPECT_EQ(m.to, "Diana");
  }
}

TEST(Ric, SampleModeIsReproducible) {
  const ChannelResource ch = make_channel(preset_spec("smolin", 2, 2));
  const RicResult a = run_ric(seeded_input(2, 13), ch, sampled(10, 55));
  const RicResult b = run_ric(seeded_input(2, 13), ch, sampled(10, 55));
  ASSERT_EQ(a.branches.size(), b.branches.size());
  for (std::size_t i = 0; i < a.branches.size(); ++i) {
    EXPECT_EQ(a.branches[i].channel_member, b.branches[i].channel_member);
    EXPECT_EQ(to_json(a.branches[i].transcript).dump(), to_json(b.branches[i].transcript).dump());
  }
}

TEST(Ric, LargeTreesFallBackToStratifiedSampling) {
  RunOptions o = all_branches();
  o.max_branches = 100;
  o.trials = 40;
  const RicResult r = run_ric(seeded_input(3, 14), make_channel(preset_spec("ghz", 3, 2)), o);
  EXPECT_FALSE(r.stats.exhaustive);
  EXPECT_EQ(r.branches.size(), 40u);
  EXPECT_NEAR(r.min_fidelity, 1.0, 1e-9);
}

TEST(Registry, OwnershipMustPartition) {
  PartyRegistry reg = PartyRegistry::ric(2);
  EXPECT_NO_THROW(reg.validate(Register(2, [] {
    auto l = labels::clone_register(2);
    auto c = labels::channel_register(2);
    l.insert(l.end(), c.begin(), c.end());
    return l;
  }())));
  EXPECT_EQ(reg.owner_of(labels::channel_a(2)), "Diana");
  EXPECT_EQ(reg.owner_of(labels::prime(2)), "Bob_2");
  PartyRegistry dup;
  dup.assign("Alice", {"a"});
  EXPECT_THROW(dup.assign("Bob", {"a"}), InvalidArgument);
  EXPECT_THROW(dup.owner_of("zzz"), InvalidArgument);
}

TEST(ManyToMany, GhzFanOut) {
  const auto x = seeded_input(2, 15);
  const ChannelResource ch = make_channel(preset_spec("ghz", 2, 2));
  for (int L : {1, 2, 3}) {
    const RicResult r = run_mm_ghz(x, ch, L, all_branches());
    EXPECT_NEAR(r.min_fidelity, 1.0, 1e-9) << "L=" << L;
    EXPECT_NEAR(r.total_probability, 1.0, 1e-9);
  }
  const RicResult one = run_mm_ghz(x, ch, 1, all_branches());
  const RicResult plain = run_ric(x, ch, all_branches());
  ASSERT_EQ(one.branches.size(), plain.branches.size());
  for (std::size_t i = 0; i < one.branches.size(); ++i)
    EXPECT_NEAR(one.branches[i].probability, plain.branches[i].probability, 1e-12);
}

TEST(ManyToMany, GhzFanOutBasisInputGivesAllZeros) {
  const std::vector<cplx> e0{1.0, 0.0, 0.0};
  const RicResult r = run_mm_ghz(e0, make_channel(preset_spec("bell-product", 3, 2)), 2, sampled(10));
  for (const auto& b : r.branches) EXPECT_NEAR(b.fidelity, 1.0, 1e-9);
}

TEST(ManyToMany, SynthesizedInputReducesToCloneState) {
  for (auto [d, N] : {std::pair{2, 2}, {3, 2}, {2, 3}}) {
    const auto x = seeded_input(d, 16);
    const PureState s = synth_distributed_state(x, d, N, 1, bbar_from_family(extract_clone_decomposition(d, N)));
    const PureState c = clone_state(x, d, N);
    EXPECT_LT(max_amplitude_deviation(reorder(s, c.labels()), c), 1e-9);
  }
}

TEST(ManyToMany, MultiQuditCopies) {
  const int d = 2;
  const auto x = seeded_input(d, 17);
  for (auto [N, L] : {std::pair{2, 2}, {2, 1}, {3, 2}, {3, 1}}) {
    BbarSource src;
    if (L < N) src = bbar_from_family(extract_clone_decomposition(d, N - L + 1));
    const PureState in = synth_distributed_state(x, d, N, L, src);
    const RicResult r = run_mm_multiqudit(in, x, N, L, all_branches());
    EXPECT_NEAR(r.min_fidelity, 1.0, 1e-9) << "N=" << N << " L=" << L;
    EXPECT_NEAR(r.total_probability, 1.0, 1e-9);
  }
}

TEST(ManyToMany, MultiQuditWithRandomCovariantFamily) {
  const int d = 3, N = 3, L = 1;
  Rng rng = derive_rng(18, 0);
  const BbarSource src = random_bbar_source(d, N - L, rng);
  const auto x = seeded_input(d, 18);
  const PureState in = synth_distributed_state(x, d, N, L, src);
  const RicResult r = run_mm_multiqudit(in, x, N, L, sampled(20));
  for (const auto& b : r.branches) EXPECT_NEAR(b.fidelity, 1.0, 1e-9);
}

TEST(ManyToMany, SingleCopyMatchesRicWithBellChannel) {
  const int d = 2, N = 2;
  const auto x = seeded_input(d, 19);
  const PureState in = synth_distributed_state(x, d, N, 1, bbar_from_family(extract_clone_decomposition(d, N)));
  const RicResult mm = run_mm_multiqudit(in, x, N, 1, all_branches());
  ChannelSpec s;
  s.kind = ChannelKind::ProductBell;
  s.d = d;
  s.N = N;
  s.c = {0, 0, 0, 0};
  const RicResult ric = run_ric(x, make_channel(s), all_branches());
  EXPECT_NEAR(mm.min_fidelity, 1.0, 1e-9);
  EXPECT_NEAR(ric.min_fidelity, 1.0, 1e-9);
  EXPECT_EQ(mm.stats.total_leaves, ric.stats.total_leaves);
}
