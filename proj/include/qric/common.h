#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>

namespace qric {

using cplx = std::complex<double>;

/// Absolute tolerance used by every comparison unless a call overrides it.
inline constexpr double kTolerance = 1e-10;

/// Branches whose probability falls below this are reported as null.
inline constexpr double kNullBranchProbability = 1e-14;

inline constexpr std::uint64_t kDefaultMaxPureDim = std::uint64_t{1} << 18;
inline constexpr std::uint64_t kDefaultMaxDensityDim = std::uint64_t{1} << 12;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: unknown labels, mismatched dimensions, bad indices.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A state or operator would exceed the dense-representation guard.
class SizeGuardError : public Error {
 public:
  using Error::Error;
};

/// A channel table entry violates the residue constraints.
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// An internal numerical check failed (reconstruction, covariance, ...).
class VerificationError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Reduces k into 0..d-1.
constexpr int mod(long long k, int d) {
  long long r = k % d;
  return static_cast<int>(r < 0 ? r + d : r);
}

using Rng = std::mt19937_64;

/// Generator for trial `index` of a run seeded with `seed`.
Rng derive_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0,1) from the top 53 bits; identical on every platform.
double uniform01(Rng& rng);

/// Index drawn with probability weights[i] / sum(weights).
std::size_t sample_index(std::span<const double> weights, Rng& rng);

/// Maximum number of amplitudes in a pure state. QRIC_MAX_DIM overrides.
std::uint64_t max_pure_dim();

/// Maximum row count of a dense density operator.
std::uint64_t max_density_dim();

/// d^n, throwing SizeGuardError on overflow past `limit`.
std::uint64_t checked_power(int d, std::size_t n, std::uint64_t limit);

}  // namespace qric
