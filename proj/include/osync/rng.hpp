#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace osync {

// All randomness in the library flows through this engine. Independent
// streams are obtained by hashing a tuple of identifiers (base seed, n, d,
// grid index, trial index, ...) with derive_stream(), so any single instance
// can be regenerated without replaying the ones before it.
using Rng = std::mt19937_64;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Order-sensitive hash of the identifiers into a 64-bit stream seed.
std::uint64_t derive_stream(std::initializer_list<std::uint64_t> parts);

Rng make_rng(std::uint64_t seed);

// rows x cols matrix of i.i.d. N(0, 1) entries, filled column-major.
Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace osync
