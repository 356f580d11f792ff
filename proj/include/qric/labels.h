#pragma once

#include <string>
#include <vector>

namespace qric::labels {

// Particle names used throughout the protocols.
//   clone(s)      "s"     clone held by Bob_s
//   ancilla(s)    "A_s"   cloning ancilla
//   channel_a(s)  "A'_s"  channel qudit paired with prime(s)
//   prime(s)      "s'"
inline std::string clone(int s) { return std::to_string(s); }
inline std::string ancilla(int s) { return "A_" + std::to_string(s); }
inline std::string channel_a(int s) { return "A'_" + std::to_string(s); }
inline std::string prime(int s) { return std::to_string(s) + "'"; }
inline std::string diana_leg(int l) { return "D_" + std::to_string(l); }

inline const std::string kInput = "t";
inline const std::string kAlicePort = "t'";

/// 1..N, A_1..A_{N-1}
inline std::vector<std::string> clone_register(int N) {
  std::vector<std::string> out;
  for (int s = 1; s <= N; ++s) out.push_back(clone(s));
  for (int s = 1; s < N; ++s) out.push_back(ancilla(s));
  return out;
}

/// 1..N-1, A_1..A_{N-1}: the qudits carrying the B-bar states.
inline std::vector<std::string> bbar_register(int N) {
  std::vector<std::string> out;
  for (int s = 1; s < N; ++s) out.push_back(clone(s));
  for (int s = 1; s < N; ++s) out.push_back(ancilla(s));
  return out;
}

/// t', 1..N, A_1..A_{N-1}
inline std::vector<std::string> telecloning_register(int N) {
  std::vector<std::string> out{kAlicePort};
  auto rest = clone_register(N);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

/// A'_1, 1', A'_2, 2', ..., A'_N, N'
inline std::vector<std::string> channel_register(int N) {
  std::vector<std::string> out;
  for (int s = 1; s <= N; ++s) {
    out.push_back(channel_a(s));
    out.push_back(prime(s));
  }
  return out;
}

}  // namespace qric::labels
