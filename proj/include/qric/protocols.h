#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qric/channels.h"
#include "qric/clone_family.h"
#include "qric/measurement.h"

namespace qric {

/// Which party holds which particles. Ownership must partition the register a
/// protocol runs on.
class PartyRegistry {
 public:
  void assign(const std::string& party, std::vector<std::string> labels);

  const std::vector<std::string>& labels_of(const std::string& party) const;
  /// Throws InvalidArgument when no party owns `label`.
  const std::string& owner_of(const std::string& label) const;
  bool has_party(const std::string& party) const;
  /// Parties in the order they were assigned.
  const std::vector<std::pair<std::string, std::vector<std::string>>>& parties() const { return parties_; }

  /// Throws InvalidArgument unless every label of `reg` has exactly one owner
  /// and no party owns a label outside `reg`.
  void validate(const Register& reg) const;

  /// Alice: t, t'; Bob_s: s; Charlie_s: A_s.
  static PartyRegistry telecloning(int N);
  /// Bob_s: s, s'; Charlie_s: A_s, A'_s (s < N); Bob_N: N, N'; Diana: A'_N.
  static PartyRegistry ric(int N);
  /// As ric(N), with Diana holding D_1..D_L instead of A'_N.
  static PartyRegistry ric_mm_ghz(int N, int L);
  /// Senders own the first N-L clones and ancillas plus copy qudits
  /// N-L+1..N; Diana holds A'_{N-L+1}..A'_N.
  static PartyRegistry ric_mm_multi(int N, int L);

 private:
  std::vector<std::pair<std::string, std::vector<std::string>>> parties_;
  std::map<std::string, std::string> owner_;
};

struct Message {
  std::string from;
  std::string to;
  int m = 0;
  int n = 0;
  double bits = 0.0;
};

struct LocalCorrection {
  std::string party;
  std::string label;
  WeylOp op;
};

struct Transcript {
  std::vector<std::pair<std::string, std::vector<std::string>>> parties;
  std::vector<GbmOutcome> outcomes;
  std::vector<Message> messages;
  std::vector<LocalCorrection> corrections;
  std::optional<std::pair<int, int>> correction;  // Diana's (x, y)
  double branch_probability = 1.0;
  double fidelity = 0.0;

  double total_bits() const;
};

enum class RunMode { Sample, AllBranches };

struct RunOptions {
  RunMode mode = RunMode::Sample;
  int trials = 1;
  std::uint64_t seed = 20240611;
  /// AllBranches enumerates the outcome tree when it has at most this many
  /// leaves and falls back to stratified sampling of `trials` paths otherwise.
  std::uint64_t max_branches = 10000;
};

/// One measuring party's GBM.
struct MeasurementStep {
  std::string party;
  LabelPair pair;
};

/// A leaf of the measurement tree: the outcomes along the path, their joint
/// probability, and the renormalized state of the unmeasured qudits.
struct Leaf {
  std::vector<GbmOutcome> outcomes;
  double probability = 1.0;
  PureState state;
};

struct TreeStats {
  bool exhaustive = true;
  std::uint64_t total_leaves = 0;  // d^{2 * steps}
  std::uint64_t visited = 0;
  std::uint64_t null_leaves = 0;
  double covered_probability = 0.0;
};

/// Calls `visit` for every leaf with probability above the null threshold.
TreeStats enumerate_leaves(const PureState& state, std::span<const MeasurementStep> steps,
                           const std::function<void(const Leaf&)>& visit);

/// Draws one path through the steps.
Leaf sample_leaf(const PureState& state, std::span<const MeasurementStep> steps, Rng& rng);

// ---------------------------------------------------------------------------
// Telecloning

struct TelecloneBranch {
  int m = 0;
  int n = 0;
  double probability = 0.0;
  std::vector<double> clone_fidelities;  // per Bob
  double collective_fidelity = 0.0;      // |<sum x_j phi_j | out>|^2
  Transcript transcript;
};

struct TelecloneResult {
  std::vector<TelecloneBranch> branches;
  double expected_fidelity = 0.0;
  bool exhaustive = false;
};

struct TelecloneOptions {
  RunOptions run;
  bool correct_ancillas = true;
};

/// Input is one qudit; Alice measures (t, t'), Bob_s applies R^{m,n} and each
/// ancilla R^{-m,n}.
TelecloneResult run_telecloning(std::span<const cplx> input, int d, int N, const TelecloneOptions& options);

// ---------------------------------------------------------------------------
// Remote information concentration

/// x = u'' + u' - u, y = v'' + v' - v (mod d), u' and v' summing the first and
/// second components of the 2(N-1) Bob/Charlie outcomes.
std::pair<int, int> deduce_correction(std::span<const std::pair<int, int>> bob_charlie,
                                      std::pair<int, int> bob_n, int u, int v, int d);

struct RicBranch {
  std::size_t channel_member = 0;
  double probability = 0.0;  // includes the channel member weight for ensembles
  double fidelity = 0.0;
  Transcript transcript;
};

struct RicResult {
  std::vector<RicBranch> branches;
  TreeStats stats;
  double min_fidelity = 1.0;
  double total_probability = 0.0;
};

/// Measurement order: Bob_1..Bob_{N-1} on (s, s'), Charlie_1..Charlie_{N-1} on
/// (A'_s, A_s), then Bob_N on (N, N'). Diana applies R^{x,y} to A'_N.
/// `x` is the target qudit the clone state encodes and is only used for the
/// fidelity.
RicResult run_ric(const PureState& clone, std::span<const cplx> x, const ChannelResource& channel,
                  const PartyRegistry& registry, const RunOptions& options);

/// Convenience: clone_state(x) and PartyRegistry::ric(N).
RicResult run_ric(std::span<const cplx> x, const ChannelResource& channel, const RunOptions& options);

/// The channel's A'_N fanned out onto D_1..D_L; the input is clone_state(x).
/// Diana applies R^{x,y} on D_1 and R^{0,y} on D_2..D_L; the target is
/// sum_j x_j |j..j>.
RicResult run_mm_ghz(std::span<const cplx> x, const ChannelResource& channel, int L, const RunOptions& options);

/// Distributed input from synth_distributed_state, channel |B^{00}>^{(x)N}.
/// Copy i is teleported from qudit N-L+i to A'_{N-L+i}; the target is
/// |x>^{(x)L}.
RicResult run_mm_multiqudit(const PureState& distributed, std::span<const cplx> x, int N, int L,
                            const RunOptions& options);

/// A covariant family of orthogonal Bbar-like vectors on 2(N-L) qudits.
struct BbarSource {
  BetaVector beta{{1.0}};
  std::vector<Vector> bbar;  // index m*d + n, over labels::bbar_register(N-L+1)
};

BbarSource bbar_from_family(const CloneFamily& family);
/// Random orthonormal Bbar_{mn} supported on Bell tuples of (s, A_s) pairs with
/// sum of phases = m and sum of shifts = n; beta random.
BbarSource random_bbar_source(int d, int pairs, Rng& rng);

/// (1/sqrt d) sum_{m,n} beta_n Bbar_{mn} (x) (U^{-m,n} x)^{(x)L} with the copies
/// on labels N-L+1..N. L = N means no Bbar part: the state is |x>^{(x)N}.
PureState synth_distributed_state(std::span<const cplx> x, int d, int N, int L, const BbarSource& source);

/// max |LHS - RHS| of
///   U^{-m,n}|x>_N |B^{k,k'}>_{A'N'}
///     = (1/d) sum_{a,b} w^{n(m-k) - n a + b k} |B^{a+k-m, b+k'-n}>_{N N'} U^{-a,b}|x>_{A'}
double teleportation_identity_check(int d, int m, int n, int k, int k2, std::span<const cplx> x);

}  // namespace qric
