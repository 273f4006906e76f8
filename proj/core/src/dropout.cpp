#include "intergat/dropout.hpp"

#include "intergat/error.hpp"

namespace intergat {

Mat dropout_mask(double rate, std::mt19937_64& rng, std::size_t rows, std::size_t cols, Mode mode) {
  if (!(rate >= 0.0 && rate < 1.0)) throw UsageError("dropout rate must lie in [0, 1)");
  Mat mask(rows, cols, 1.0);
  if (mode == Mode::eval || rate == 0.0) return mask;
  std::bernoulli_distribution keep(1.0 - rate);
  const double scale = 1.0 / (1.0 - rate);
  for (double& v : mask.values()) v = keep(rng) ? scale : 0.0;
  return mask;
}

Mat dropout_mask(double rate, std::uint64_t seed, std::size_t rows, std::size_t cols, Mode mode) {
  std::mt19937_64 rng(seed);
  return dropout_mask(rate, rng, rows, cols, mode);
}

}  // namespace intergat
