#pragma once

#include <optional>
#include <span>

namespace orgaze {

/// Arithmetic mean; empty input has none.
std::optional<double> mean_of(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator); needs two values.
std::optional<double> sample_sd(std::span<const double> values);

}  // namespace orgaze
