#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "qric/analysis.h"
#include "qric/channels.h"
#include "qric/protocols.h"

namespace qric {

using Json = nlohmann::ordered_json;

struct LoadedSpec {
  ChannelSpec spec;
  std::vector<std::string> warnings;
};

/// {kind, d, N, u, v, table: [{k: [...], w: ...}], c: [...], seed}
/// Missing u, v default to 0. Table weights that do not sum to 1 within 1e-9
/// are rescaled and a warning is recorded.
LoadedSpec parse_channel_spec(const Json& doc);
LoadedSpec parse_channel_spec_text(std::string_view text);
/// Throws IoError when the file cannot be read.
LoadedSpec load_channel_spec(const std::string& path);

Json to_json(const ChannelSpec& spec);

/// telecloning, ghz, beta, bell-product, smolin, mixed-uniform
bool is_preset(std::string_view name);
ChannelSpec preset_spec(std::string_view name, int d, int N);
/// For s < N pair s is (s, s+1) mod d; the last pair balances both sums to 0.
BellTuple default_product_tuple(int d, int N);

/// Preset name, or a path to a channel file.
LoadedSpec resolve_channel(const std::string& name_or_path, int d, int N);

Json to_json(const Transcript& t);
Json to_json(const StabilizerTable& t);
Json to_json(const UnlockReport& r);
Json to_json(const SymmetryReport& r);
Json to_json(const TreeStats& s);

}  // namespace qric
