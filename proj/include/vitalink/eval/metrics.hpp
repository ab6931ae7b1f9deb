#pragma once

#include <array>
#include <span>
#include <vector>

#include "vitalink/dsp/activity.hpp"

namespace vitalink::eval {

/// Mean absolute error over entries whose mask is true. Throws LengthMismatch
/// on unequal lengths and EmptyMask when no entry is selected.
double mae(std::span<const double> predictions, std::span<const double> references,
           const std::vector<bool>& valid_mask);

/// Rows are the true label, columns the prediction, both in sit, walk, run
/// order.
struct ConfusionMatrix {
    std::array<std::array<std::size_t, 3>, 3> counts{};
    double accuracy_pct = 0.0;
    std::size_t total() const;
};

/// Throws LengthMismatch on unequal or empty inputs.
ConfusionMatrix confusion(std::span<const dsp::ActivityLabel> predicted, std::span<const dsp::ActivityLabel> truth);

/// Fixed-width histogram normalized to a density (sums to 1 / bin width).
struct Histogram {
    double lo = 0.0, width = 1.0;
    std::vector<double> density;
};
/// Values outside [lo, lo + bins * width) go to the edge bins. An empty input
/// gives all-zero densities.
Histogram density_histogram(std::span<const double> values, double lo, double width, std::size_t bins);

}  // namespace vitalink::eval
