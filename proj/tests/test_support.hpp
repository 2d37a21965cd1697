// Shared helpers for the test binaries.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace evercommit::testing {

/// Binomial standard error of a rate p over n trials.
inline double binomial_sigma(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

/// Pearson chi-square statistic against a uniform distribution.
inline double chi_square_uniform(const std::vector<std::size_t>& counts) {
  double total = 0;
  for (auto c : counts) total += static_cast<double>(c);
  double expected = total / static_cast<double>(counts.size());
  double stat = 0;
  for (auto c : counts) stat += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  return stat;
}

}  // namespace evercommit::testing
