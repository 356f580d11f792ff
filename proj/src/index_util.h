#pragma once

#include <cstdint>
#include <vector>

#include "qric/statealg.h"

namespace qric::detail {

// Splits every full index into (index within the kept labels, index within the rest).
// Both sub-indices are big-endian in register order.
struct IndexSplit {
  std::vector<std::uint64_t> kept;
  std::vector<std::uint64_t> rest;
  std::uint64_t kept_dim = 1;
  std::uint64_t rest_dim = 1;
};

IndexSplit split_indices(const Register& reg, const std::vector<bool>& in_keep);

}  // namespace qric::detail
