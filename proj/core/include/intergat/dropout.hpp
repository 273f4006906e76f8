#pragma once

#include <cstdint>
#include <random>

#include "intergat/mat.hpp"

namespace intergat {

enum class Mode { train, eval };

/// Inverted-dropout keep mask: each entry is 1/(1-rate) with probability 1-rate and 0
/// otherwise. In eval mode, or at rate 0, the mask is all ones.
/// Throws UsageError unless 0 <= rate < 1.
Mat dropout_mask(double rate, std::mt19937_64& rng, std::size_t rows, std::size_t cols, Mode mode);
Mat dropout_mask(double rate, std::uint64_t seed, std::size_t rows, std::size_t cols, Mode mode);

}  // namespace intergat
