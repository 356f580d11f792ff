#include "qric/cli.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <limits>

#include "CLI11.hpp"
#include "qric/analysis.h"
#include "qric/labels.h"
#include "qric/report.h"

namespace qric {

namespace {

// Stream index reserved for drawing the input qudit; trials use 0, 1, ...
constexpr std::uint64_t kInputStream = std::uint64_t{1} << 63;

struct RunConfig {
  std::string subcommand;
  int d = 2;
  int N = 2;
  int L = 0;
  std::string channel;
  std::string mode = "sample";
  int trials = 1;
  std::uint64_t seed = 20240611;
  double tol = std::numeric_limits<double>::quiet_NaN();
  std::string out = "-";
  bool timings = false;

  std::optional<double> tol_override() const {
    if (std::isnan(tol)) return std::nullopt;
    return tol;
  }

  RunOptions run_options() const {
    RunOptions o;
    o.mode = mode == "all-branches" ? RunMode::AllBranches : RunMode::Sample;
    o.trials = trials;
    o.seed = seed;
    return o;
  }

  Json to_json() const {
    Json j;
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["d"] = d;
    j["N"] = N;
    if (L > 0) j["L"] = L;
    if (!channel.empty()) j["channel"] = channel;
    j["mode"] = mode;
    j["trials"] = trials;
    j["seed"] = seed;
    if (tol_override()) {
      j["tol"] = tol;
    } else {
      j["tol"] = nullptr;
    }
    return j;
  }
};

std::vector<cplx> input_state(const RunConfig& cfg) {
  Rng rng = derive_rng(cfg.seed, kInputStream);
  return random_unit_vector(static_cast<std::size_t>(cfg.d), rng);
}

Json complex_list(std::span<const cplx> x) {
  Json a = Json::array();
  for (const auto& z : x) a.push_back(Json::array({z.real(), z.imag()}));
  return a;
}

std::string pct(double p) {
  std::ostringstream s;
  s << std::setprecision(6) << p;
  return s.str();
}

// -- teleclone ---------------------------------------------------------------

void add_teleclone(Report& rep, const RunConfig& cfg, const RunOptions& run, std::ostream& err) {
  const auto x = input_state(cfg);
  Stopwatch sw;
  TelecloneOptions opts;
  opts.run = run;
  const TelecloneResult res = run_telecloning(x, cfg.d, cfg.N, opts);
  rep.time("teleclone", sw.seconds());

  const double formula = clone_fidelity_formula(cfg.d, cfg.N);
  double lo = 1.0, hi = 0.0, collective = 1.0, total_p = 0.0;
  Json branches = Json::array();
  for (const auto& b : res.branches) {
    for (double f : b.clone_fidelities) {
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    collective = std::min(collective, b.collective_fidelity);
    total_p += b.probability;
    branches.push_back(Json{{"m", b.m},
                            {"n", b.n},
                            {"probability", b.probability},
                            {"clone_fidelities", b.clone_fidelities},
                            {"collective_fidelity", b.collective_fidelity},
                            {"transcript", to_json(b.transcript)}});
  }
  rep.check("teleclone.clone_fidelity_min", lo, formula, 1e-9);
  rep.check("teleclone.clone_fidelity_max", hi, formula, 1e-9);
  rep.check("teleclone.collective_fidelity_min", collective, 1.0, 1e-9);
  if (res.exhaustive) rep.check("teleclone.total_probability", total_p, 1.0, 1e-9);
  rep.detail("teleclone", Json{{"input", complex_list(x)},
                               {"fidelity_formula", formula},
                               {"expected_fidelity", res.expected_fidelity},
                               {"exhaustive", res.exhaustive},
                               {"branches", branches}});
  err << "teleclone d=" << cfg.d << " N=" << cfg.N << ": " << res.branches.size() << " branch(es), clone fidelity "
      << pct(lo) << ".." << pct(hi) << " (formula " << pct(formula) << ")\n";
}

// -- ric ---------------------------------------------------------------------

ChannelResource load_channel(Report& rep, const std::string& name, int d, int N, std::ostream& err) {
  LoadedSpec loaded = resolve_channel(name, d, N);
  for (const auto& w : loaded.warnings) {
    err << "warning: " << w << "\n";
    rep.warn(w);
  }
  rep.detail("channel_spec", to_json(loaded.spec));
  return make_channel(loaded.spec);
}

void report_ric(Report& rep, const std::string& key, const RicResult& res, std::ostream& err) {
  std::size_t at_one = 0;
  Json branches = Json::array();
  double bits = 0.0;
  for (const auto& b : res.branches) {
    at_one += b.fidelity >= 1.0 - 1e-9 ? 1 : 0;
    bits = std::max(bits, b.transcript.total_bits());
    branches.push_back(Json{{"channel_member", b.channel_member},
                            {"probability", b.probability},
                            {"fidelity", b.fidelity},
                            {"classical_bits", b.transcript.total_bits()},
                            {"transcript", to_json(b.transcript)}});
  }
  const auto n = static_cast<double>(res.branches.size());
  rep.check(key + ".min_fidelity", res.min_fidelity, 1.0, 1e-9);
  rep.check(key + ".branches_at_fidelity_1", static_cast<double>(at_one), n, 0.0);
  if (res.stats.exhaustive) rep.check(key + ".total_probability", res.total_probability, 1.0, 1e-9);
  rep.detail(key, Json{{"stats", to_json(res.stats)},
                       {"min_fidelity", res.min_fidelity},
                       {"total_probability", res.total_probability},
                       {"classical_bits", bits},
                       {"branches", branches}});
  err << key << ": " << at_one << "/" << res.branches.size() << " branch(es) at fidelity 1";
  if (res.stats.exhaustive) {
    err << " (" << res.stats.total_leaves << " enumerated, " << res.stats.null_leaves << " null)";
  }
  err << ", " << bits << " classical bits per run\n";
}

void add_ric(Report& rep, const RunConfig& cfg, const std::string& channel_name, const RunOptions& run,
             std::ostream& err) {
  const ChannelResource channel = load_channel(rep, channel_name, cfg.d, cfg.N, err);
  const auto x = input_state(cfg);
  Stopwatch sw;
  const RicResult res = run_ric(x, channel, run);
  rep.time("ric", sw.seconds());
  rep.detail("input", complex_list(x));
  report_ric(rep, "ric", res, err);
}

void add_mm_ghz(Report& rep, const RunConfig& cfg, std::ostream& err) {
  const ChannelResource channel = load_channel(rep, cfg.channel, cfg.d, cfg.N, err);
  const auto x = input_state(cfg);
  Stopwatch sw;
  const RicResult res = run_mm_ghz(x, channel, cfg.L, cfg.run_options());
  rep.time("ric_mm_ghz", sw.seconds());
  rep.detail("input", complex_list(x));
  report_ric(rep, "ric_mm_ghz", res, err);
}

void add_mm_multi(Report& rep, const RunConfig& cfg, std::ostream& err) {
  const auto x = input_state(cfg);
  Stopwatch sw;
  BbarSource source;
  if (cfg.L < cfg.N) source = bbar_from_family(extract_clone_decomposition(cfg.d, cfg.N - cfg.L + 1));
  const PureState distributed = synth_distributed_state(x, cfg.d, cfg.N, cfg.L, source);
  const RicResult res = run_mm_multiqudit(distributed, x, cfg.N, cfg.L, cfg.run_options());
  rep.time("ric_mm_multi", sw.seconds());
  rep.detail("input", complex_list(x));
  report_ric(rep, "ric_mm_multi", res, err);
}

// -- analysis ----------------------------------------------------------------

// Presets whose stabilizer expectations must all be 1. The telecloning state
// is only stabilized by S^{mn} for d = 2.
std::vector<std::string> stabilized_presets(int d) {
  std::vector<std::string> names{"ghz", "beta", "bell-product", "smolin", "mixed-uniform"};
  if (d == 2) names.insert(names.begin(), "telecloning");
  return names;
}

void add_stabilizers(Report& rep, const RunConfig& cfg, const std::vector<std::string>& names) {
  Stopwatch sw;
  Json tables = Json::object();
  for (const auto& name : names) {
    LoadedSpec loaded = resolve_channel(name, cfg.d, cfg.N);
    for (const auto& w : loaded.warnings) rep.warn(w);
    const ChannelResource ch = make_channel(loaded.spec);
    const StabilizerTable t = ch.is_mixed() ? stabilizer_suite(ch.density(), cfg.N) : stabilizer_suite(ch.state(), cfg.N);
    rep.check("stabilizers." + name, t.max_deviation(), 0.0, 1e-9);
    tables[name] = to_json(t);
  }
  rep.detail("stabilizers", tables);
  rep.time("stabilizers", sw.seconds());
}

void add_unlock(Report& rep, const RunConfig& cfg, bool sampled) {
  Stopwatch sw;
  UnlockReport ur{cfg.d, cfg.N, {}};
  if (sampled) {
    for (int t = 0; t < cfg.trials; ++t) {
      Rng rng = derive_rng(cfg.seed, static_cast<std::uint64_t>(t));
      auto one = unlock_ubes(cfg.d, cfg.N, rng);
      ur.entries.insert(ur.entries.end(), one.entries.begin(), one.entries.end());
    }
  } else {
    ur = unlock_ubes(cfg.d, cfg.N);
  }
  double purity = 1.0, bell = 1.0, entropy_dev = 0.0;
  for (const auto& e : ur.entries) {
    purity = std::min(purity, e.purity);
    bell = std::min(bell, e.bell_fidelity);
    entropy_dev = std::max(entropy_dev, std::abs(e.entropy_bits - std::log2(static_cast<double>(cfg.d))));
  }
  rep.check("unlock.min_purity", purity, 1.0, 1e-9);
  rep.check("unlock.min_bell_fidelity", bell, 1.0, 1e-9);
  rep.check("unlock.entropy_deviation", entropy_dev, 0.0, 1e-9);
  rep.detail("unlock", to_json(ur));
  rep.time("unlock", sw.seconds());
}

void add_verify(Report& rep, const RunConfig& cfg) {
  const int d = cfg.d;
  const int N = cfg.N;
  Stopwatch sw;

  double swap_dev = 0.0;
  if (d <= 3) {
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n)
        for (int m2 = 0; m2 < d; ++m2)
          for (int n2 = 0; n2 < d; ++n2) swap_dev = std::max(swap_dev, swap_identity_check(d, m, n, m2, n2));
  } else {
    Rng rng = derive_rng(cfg.seed, kInputStream + 1);
    for (int i = 0; i < 50; ++i) {
      int idx[4];
      for (auto& k : idx) k = static_cast<int>(uniform01(rng) * d);
      swap_dev = std::max(swap_dev, swap_identity_check(d, idx[0], idx[1], idx[2], idx[3]));
    }
  }
  rep.check("identity.swap", swap_dev, 0.0, 1e-12);

  const auto x = input_state(cfg);
  double tele_dev = 0.0;
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n)
      for (int k = 0; k < d; ++k)
        for (int k2 = 0; k2 < d; ++k2) tele_dev = std::max(tele_dev, teleportation_identity_check(d, m, n, k, k2, x));
  rep.check("identity.teleportation", tele_dev, 0.0, 1e-12);

  const CloneFamily family = extract_clone_decomposition(d, N);
  double recon_dev = 0.0;
  Rng rng = derive_rng(cfg.seed, kInputStream + 2);
  for (int i = 0; i < 20; ++i) {
    const auto y = random_unit_vector(static_cast<std::size_t>(d), rng);
    recon_dev = std::max(recon_dev, max_amplitude_deviation(reconstruct_clone_state(family, y), clone_state(y, d, N)));
  }
  rep.check("clone.reconstruction", recon_dev, 0.0, 1e-9);
  rep.check("clone.bbar_covariance", bbar_covariance_deviation(family.bbar, d, N), 0.0, 1e-9);
  rep.detail("beta", family.beta.values());

  rep.check("identity.ghz_reduction", ghz_reduction_deviation(d, N), 0.0, 1e-12);
  const EquivalenceResult c = telecloning_beta_equivalence(d, N);
  if (d == 2) {
    rep.check("equivalence.telecloning_beta_overlap", c.overlap, 1.0, 1e-9);
  } else {
    rep.check("equivalence.telecloning_beta_overlap", c.overlap, 1.0 - 1e-6, 0.0, Relation::Below);
  }
  rep.time("identities", sw.seconds());

  add_stabilizers(rep, cfg, stabilized_presets(d));

  Stopwatch ubes;
  const DensityOperator smolin = smolin_like(d, N);
  const SpectrumSummary spec = spectrum_summary(smolin);
  const double expected_rank = std::pow(static_cast<double>(d), 2.0 * (N - 1));
  rep.check("smolin.rank", static_cast<double>(spec.rank), expected_rank, 0.0);
  rep.check("smolin.flat_spectrum", spec.flat_deviation, 0.0, 1e-10);
  double ppt = std::numeric_limits<double>::infinity();
  for (const auto& cut : pair_grouping_cuts(N)) ppt = std::min(ppt, ppt_min_eigenvalue(smolin, cut));
  rep.check("smolin.ppt_min_eigenvalue", ppt, 0.0, 1e-10, Relation::AtLeast);
  const SymmetryReport sym = symmetry_report(smolin, N);
  rep.check("symmetry.within_group", sym.max_within(), 0.0, 1e-9);
  if (d == 2) {
    rep.check("symmetry.cross_group", sym.cross.distance, 0.0, 1e-9);
  } else {
    rep.check("symmetry.cross_group", sym.cross.distance, 1e-3, 0.0, Relation::Above);
  }
  rep.detail("symmetry", to_json(sym));
  rep.time("ubes", ubes.seconds());
  add_unlock(rep, cfg, false);

  // Property (c): pure channels carry log2 d ebits across rest:{N'}.
  double ebit_dev = 0.0;
  Cut cut;
  for (int s = 1; s <= N; ++s) {
    cut.group_a.push_back(labels::channel_a(s));
    if (s < N) cut.group_a.push_back(labels::prime(s));
  }
  cut.group_b.push_back(labels::prime(N));
  for (const char* name : {"ghz", "beta", "bell-product"}) {
    const ChannelResource ch = make_channel(preset_spec(name, d, N));
    const PureState st = reorder(ch.state(), labels::channel_register(N));
    ebit_dev = std::max(ebit_dev, std::abs(entropy_across_cut(st, cut) - std::log2(static_cast<double>(d))));
  }
  rep.check("channels.last_prime_entropy", ebit_dev, 0.0, 1e-8);

  const FingerprintReport fg = fingerprint(ghz_channel(d, N));
  const FingerprintReport fb = fingerprint(beta_weighted_channel(d, N));
  rep.check("fingerprint.ghz_vs_beta_distinguishable", distinguishable(fg, fb) ? 1.0 : 0.0, 1.0, 0.0);
  rep.check("fingerprint.ghz_vs_ghz_distinguishable", distinguishable(fg, fg) ? 1.0 : 0.0, 0.0, 0.0);
}

// -- plumbing ----------------------------------------------------------------

void emit(const Report& rep, const RunConfig& cfg, std::ostream& out) {
  const std::string text = rep.to_json(cfg.timings).dump(2) + "\n";
  if (cfg.out == "-") {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + cfg.out + "' for writing");
  file << text;
  file.close();
  if (!file) throw IoError("failed writing '" + cfg.out + "'");
}

void add_common(CLI::App* sub, RunConfig& cfg, bool needs_channel, bool needs_l) {
  sub->add_option("--d", cfg.d, "qudit dimension")->check(CLI::Range(2, 1 << 16));
  sub->add_option("--N", cfg.N, "number of clones")->check(CLI::Range(2, 1 << 16));
  if (needs_l) sub->add_option("--L", cfg.L, "number of concentrated outputs")->check(CLI::Range(1, 1 << 16));
  if (needs_channel) sub->add_option("--channel", cfg.channel, "preset name or channel-spec file");
  sub->add_option("--mode", cfg.mode, "sample | all-branches")->check(CLI::IsMember({"sample", "all-branches"}));
  sub->add_option("--trials", cfg.trials, "number of sampled runs")->check(CLI::Range(1, 1 << 30));
  sub->add_option("--seed", cfg.seed, "base seed");
  sub->add_option("--tol", cfg.tol, "override every check tolerance")->check(CLI::NonNegativeNumber);
  sub->add_option("--out", cfg.out, "output path, - for standard output");
  sub->add_flag("--timings", cfg.timings, "include wall-clock timings in the JSON");
}

int dispatch(RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Report rep(cfg.to_json(), cfg.tol_override());
  const std::string& cmd = cfg.subcommand;
  if (cmd == "teleclone") {
    add_teleclone(rep, cfg, cfg.run_options(), err);
  } else if (cmd == "ric") {
    add_ric(rep, cfg, cfg.channel, cfg.run_options(), err);
  } else if (cmd == "ric-mm-ghz") {
    if (cfg.L < 1) throw InvalidArgument("ric-mm-ghz needs --L >= 1");
    add_mm_ghz(rep, cfg, err);
  } else if (cmd == "ric-mm-multi") {
    if (cfg.L < 1 || cfg.L > cfg.N) throw InvalidArgument("ric-mm-multi needs 1 <= L <= N");
    add_mm_multi(rep, cfg, err);
  } else if (cmd == "verify") {
    add_verify(rep, cfg);
  } else if (cmd == "stabilizers") {
    add_stabilizers(rep, cfg, cfg.channel.empty() ? stabilized_presets(cfg.d) : std::vector<std::string>{cfg.channel});
  } else if (cmd == "unlock") {
    add_unlock(rep, cfg, cfg.mode == "sample");
  } else if (cmd == "report") {
    RunOptions exhaustive = cfg.run_options();
    exhaustive.mode = RunMode::AllBranches;
    add_verify(rep, cfg);
    add_teleclone(rep, cfg, exhaustive, err);
    add_ric(rep, cfg, cfg.channel, exhaustive, err);
  }
  emit(rep, cfg, out);
  rep.print_summary(err, cmd);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Qudit telecloning and remote information concentration simulator", "qric"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunConfig cfg;
  struct Sub {
    const char* name;
    const char* help;
    bool channel;
    bool l;
  };
  const Sub subs[] = {
      {"teleclone", "1->N telecloning of a seeded random qudit", false, false},
      {"ric", "remote information concentration over a channel", true, false},
      {"ric-mm-ghz", "concentration into L GHZ-encoded outputs", true, true},
      {"ric-mm-multi", "concentration of L copies over Bell-pair channels", false, true},
      {"verify", "identity, stabilizer and bound-entanglement checks", false, false},
      {"stabilizers", "stabilizer expectations of channel states", true, false},
      {"unlock", "unlock a Bell pair from the smolin-like state", false, false},
      {"report", "verify + teleclone + ric in one JSON document", true, false},
  };
  for (const auto& s : subs) add_common(app.add_subcommand(s.name, s.help), cfg, s.channel, s.l);

  std::vector<const char*> argv{"qric"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  for (const auto& s : subs) {
    if (app.got_subcommand(s.name)) cfg.subcommand = s.name;
  }
  if (cfg.channel.empty() && (cfg.subcommand == "ric" || cfg.subcommand == "ric-mm-ghz" || cfg.subcommand == "report")) {
    cfg.channel = "ghz";
  }
  if (cfg.subcommand == "report" && !app.get_subcommand("report")->get_option("--out")->count()) {
    cfg.out = "qric-report.json";
  }

  try {
    return dispatch(cfg, out, err);
  } catch (const SizeGuardError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qric
