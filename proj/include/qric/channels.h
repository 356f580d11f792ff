#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qric/clone_family.h"
#include "qric/opsbasis.h"

namespace qric {

enum class ChannelKind { Telecloning, GeneralPure, Ghz, BetaWeighted, ProductBell, Mixed, SmolinLike };

std::string to_string(ChannelKind kind);
/// Accepts the names used in channel files: "general-pure", "smolin-like", ...
ChannelKind parse_channel_kind(std::string_view name);

/// (k_1, ..., k_2N); pair s carries Bell indices (k_{2s-1}, k_{2s}).
using BellTuple = std::vector<int>;

struct TableEntry {
  BellTuple k;
  double w = 0.0;
};

struct ChannelSpec {
  ChannelKind kind = ChannelKind::Ghz;
  int d = 2;
  int N = 2;
  int u = 0;
  int v = 0;
  std::vector<TableEntry> table;  // general-pure: probabilities P; mixed: weights C
  BellTuple c;                    // product-bell
  std::optional<std::uint64_t> seed;
};

/// sum k_odd mod d == u and sum k_even mod d == v
bool satisfies_constraints(const BellTuple& k, int d, int u, int v);

/// All d^{2(N-1)} constrained tuples in lexicographic order.
std::vector<BellTuple> enumerate_constrained_tuples(int d, int N, int u, int v);

/// Throws InvalidArgument / ConstraintError (naming the offending tuple) on a
/// malformed spec. Weights must already sum to 1 within 1e-9.
void validate(const ChannelSpec& spec);

std::string format_tuple(const BellTuple& k);

/// Splits a channel register into A'_1..A'_N and 1'..N' for S^{mn}.
StabilizerGroups channel_groups(int N);

/// (x)_s |B^{k_{2s-1},k_{2s}}>_{A'_s,s'}
PureState bell_product(int d, const BellTuple& k);

/// (1/sqrt d) sum_j |j>_{t'} |phi_j>, on labels::telecloning_register(N).
PureState telecloning_channel(int d, int N);

/// The telecloning state renamed onto the channel register:
/// t' -> A'_N, s -> A'_s, A_s -> s', N -> N'.
PureState telecloning_as_channel(int d, int N);

PureState general_pure_channel(const ChannelSpec& spec);
PureState ghz_channel(int d, int N);

/// (1/sqrt d) sum_{x,y} beta_y |Bbar_{xy}> |B^{-x,-y}>_{A'_N N'} with the Bbar
/// qudits renamed s -> A'_s and A_s -> s'.
PureState beta_weighted_channel(const CloneFamily& family);
PureState beta_weighted_channel(int d, int N);

PureState product_bell_channel(int d, int N, const BellTuple& c, int u = 0, int v = 0);

/// sum C |B..><B..| over the table.
DensityOperator mixed_channel(const ChannelSpec& spec);

/// Draws a table row with probability C; returns its index and product-Bell state.
std::pair<std::size_t, PureState> sample_mixed(const ChannelSpec& spec, Rng& rng);

/// Uniform mixture of the d^{2(N-1)} u=v=0 product-Bell projectors.
DensityOperator smolin_like(int d, int N);

/// Uniform table over the constrained tuples for (u, v).
std::vector<TableEntry> uniform_table(int d, int N, int u, int v);

/// A realized channel: either one pure state or a classical ensemble of
/// product-Bell states.
class ChannelResource {
 public:
  static ChannelResource pure(PureState state, int N, int u, int v);
  static ChannelResource ensemble(int d, int N, std::vector<TableEntry> table, int u, int v);

  int d() const { return d_; }
  int N() const { return N_; }
  int u() const { return u_; }
  int v() const { return v_; }
  bool is_mixed() const { return !state_.has_value(); }

  /// Pure channels only.
  const PureState& state() const;
  const std::vector<TableEntry>& table() const { return table_; }
  PureState member(std::size_t i) const;
  std::pair<std::size_t, PureState> draw(Rng& rng) const;

  DensityOperator density() const;

 private:
  ChannelResource() = default;

  int d_ = 2;
  int N_ = 2;
  int u_ = 0;
  int v_ = 0;
  std::optional<PureState> state_;
  std::vector<TableEntry> table_;
};

/// Builds the resource a spec describes (validating it first).
ChannelResource make_channel(const ChannelSpec& spec);

}  // namespace qric
