#include "qric/json_io.h"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qric {

namespace {

int get_int(const Json& doc, const char* key, int fallback, bool required) {
  if (!doc.contains(key)) {
    if (required) throw InvalidArgument(std::string("channel spec is missing '") + key + "'");
    return fallback;
  }
  const auto& v = doc.at(key);
  if (!v.is_number_integer()) throw InvalidArgument(std::string("channel spec field '") + key + "' must be an integer");
  return v.get<int>();
}

BellTuple get_tuple(const Json& v, const char* what) {
  if (!v.is_array()) throw InvalidArgument(std::string(what) + " must be an array of integers");
  BellTuple k;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw InvalidArgument(std::string(what) + " must be an array of integers");
    k.push_back(x.get<int>());
  }
  return k;
}

}  // namespace

LoadedSpec parse_channel_spec(const Json& doc) {
  if (!doc.is_object()) throw InvalidArgument("channel spec must be a JSON object");
  LoadedSpec out;
  ChannelSpec& spec = out.spec;
  if (!doc.contains("kind") || !doc.at("kind").is_string()) throw InvalidArgument("channel spec needs a string 'kind'");
  spec.kind = parse_channel_kind(doc.at("kind").get<std::string>());
  spec.d = get_int(doc, "d", 2, true);
  spec.N = get_int(doc, "N", 2, true);
  spec.u = get_int(doc, "u", 0, false);
  spec.v = get_int(doc, "v", 0, false);
  if (doc.contains("c")) spec.c = get_tuple(doc.at("c"), "c");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) throw InvalidArgument("seed must be a non-negative integer");
    spec.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("table")) {
    if (!doc.at("table").is_array()) throw InvalidArgument("table must be an array");
    for (const auto& row : doc.at("table")) {
      if (!row.is_object() || !row.contains("k") || !row.contains("w") || !row.at("w").is_number()) {
        throw InvalidArgument("table rows need 'k' (array) and 'w' (number)");
      }
      spec.table.push_back({get_tuple(row.at("k"), "k"), row.at("w").get<double>()});
    }
    double total = 0.0;
    for (const auto& e : spec.table) total += e.w;
    if (!spec.table.empty() && std::abs(total - 1.0) > 1e-9) {
      if (!(total > 0.0)) throw InvalidArgument("table weights sum to zero");
      std::ostringstream msg;
      msg << "table weights sum to " << total << "; rescaled to 1";
      out.warnings.push_back(msg.str());
      for (auto& e : spec.table) e.w /= total;
    }
  }
  validate(spec);
  return out;
}

LoadedSpec parse_channel_spec_text(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("channel spec is not valid JSON: ") + e.what());
  }
  return parse_channel_spec(doc);
}

LoadedSpec load_channel_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read channel file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_channel_spec_text(buf.str());
}

Json to_json(const ChannelSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  j["d"] = spec.d;
  j["N"] = spec.N;
  j["u"] = spec.u;
  j["v"] = spec.v;
  if (!spec.table.empty()) {
    Json rows = Json::array();
    for (const auto& e : spec.table) rows.push_back(Json{{"k", e.k}, {"w", e.w}});
    j["table"] = rows;
  }
  if (!spec.c.empty()) j["c"] = spec.c;
  if (spec.seed) j["seed"] = *spec.seed;
  return j;
}

namespace {
constexpr std::string_view kPresets[] = {"telecloning", "ghz", "beta", "bell-product", "smolin", "mixed-uniform"};
}

bool is_preset(std::string_view name) {
  for (auto p : kPresets) {
    if (p == name) return true;
  }
  return false;
}

BellTuple default_product_tuple(int d, int N) {
  BellTuple c;
  long long odd = 0, even = 0;
  for (int s = 1; s < N; ++s) {
    c.push_back(mod(s, d));
    c.push_back(mod(s + 1, d));
    odd += s;
    even += s + 1;
  }
  c.push_back(mod(-odd, d));
  c.push_back(mod(-even, d));
  return c;
}

ChannelSpec preset_spec(std::string_view name, int d, int N) {
  ChannelSpec s;
  s.d = d;
  s.N = N;
  if (name == "telecloning") {
    s.kind = ChannelKind::Telecloning;
  } else if (name == "ghz") {
    s.kind = ChannelKind::Ghz;
  } else if (name == "beta") {
    s.kind = ChannelKind::BetaWeighted;
  } else if (name == "bell-product") {
    s.kind = ChannelKind::ProductBell;
    s.c = default_product_tuple(d, N);
  } else if (name == "smolin") {
    s.kind = ChannelKind::SmolinLike;
  } else if (name == "mixed-uniform") {
    s.kind = ChannelKind::Mixed;
    s.table = uniform_table(d, N, 0, 0);
  } else {
    throw InvalidArgument("unknown channel preset '" + std::string(name) + "'");
  }
  return s;
}

LoadedSpec resolve_channel(const std::string& name_or_path, int d, int N) {
  if (is_preset(name_or_path)) {
    LoadedSpec out{preset_spec(name_or_path, d, N), {}};
    validate(out.spec);
    return out;
  }
  if (!std::ifstream(name_or_path)) {
    throw IoError("'" + name_or_path +
                  "' is not a preset (telecloning, ghz, beta, bell-product, smolin, mixed-uniform) or a readable file");
  }
  LoadedSpec out = load_channel_spec(name_or_path);
  if (out.spec.d != d || out.spec.N != N) {
    throw InvalidArgument("channel file is for d=" + std::to_string(out.spec.d) + ", N=" + std::to_string(out.spec.N) +
                          " but the run asks for d=" + std::to_string(d) + ", N=" + std::to_string(N));
  }
  return out;
}

Json to_json(const Transcript& t) {
  Json j;
  Json parties = Json::object();
  for (const auto& [name, labels] : t.parties) parties[name] = labels;
  j["parties"] = parties;
  Json msgs = Json::array();
  for (const auto& m : t.messages) {
    msgs.push_back(Json{{"from", m.from}, {"to", m.to}, {"m", m.m}, {"n", m.n}, {"bits", m.bits}});
  }
  j["messages"] = msgs;
  if (t.correction) {
    j["correction"] = Json{{"x", t.correction->first}, {"y", t.correction->second}};
  } else {
    j["correction"] = nullptr;
  }
  j["branch_probability"] = t.branch_probability;
  j["fidelity"] = t.fidelity;
  return j;
}

Json to_json(const StabilizerTable& t) {
  Json rows = Json::array();
  for (int m = 0; m < t.d; ++m) {
    for (int n = 0; n < t.d; ++n) {
      const cplx v = t.values[static_cast<std::size_t>(m * t.d + n)];
      rows.push_back(Json{{"m", m}, {"n", n}, {"re", v.real()}, {"im", v.imag()}});
    }
  }
  return rows;
}

Json to_json(const UnlockReport& r) {
  Json rows = Json::array();
  for (const auto& e : r.entries) {
    Json outcomes = Json::array();
    for (const auto& [m, n] : e.outcomes) outcomes.push_back(Json::array({m, n}));
    rows.push_back(Json{{"outcomes", outcomes},
                        {"probability", e.probability},
                        {"purity", e.purity},
                        {"entropy_bits", e.entropy_bits},
                        {"bell", Json::array({e.bell_m, e.bell_n})},
                        {"bell_fidelity", e.bell_fidelity}});
  }
  return rows;
}

Json to_json(const SymmetryReport& r) {
  auto list = [](const std::vector<SwapDistance>& v) {
    Json a = Json::array();
    for (const auto& s : v) a.push_back(Json{{"swap", Json::array({s.a, s.b})}, {"distance", s.distance}});
    return a;
  };
  return Json{{"within_g1", list(r.within_g1)},
              {"within_g2", list(r.within_g2)},
              {"cross", Json{{"swap", Json::array({r.cross.a, r.cross.b})}, {"distance", r.cross.distance}}}};
}

Json to_json(const TreeStats& s) {
  return Json{{"exhaustive", s.exhaustive},
              {"total_branches", s.total_leaves},
              {"visited", s.visited},
              {"null_branches", s.null_leaves},
              {"covered_probability", s.covered_probability}};
}

}  // namespace qric
