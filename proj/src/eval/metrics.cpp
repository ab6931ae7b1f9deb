#include "vitalink/eval/metrics.hpp"

#include <cmath>

#include "vitalink/error.hpp"

namespace vitalink::eval {

double mae(std::span<const double> predictions, std::span<const double> references,
           const std::vector<bool>& valid_mask) {
    if (predictions.size() != references.size() || predictions.size() != valid_mask.size()) {
        throw LengthMismatch("mae needs equal lengths, got " + std::to_string(predictions.size()) + ", " +
                             std::to_string(references.size()) + " and mask " + std::to_string(valid_mask.size()));
    }
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (!valid_mask[i]) continue;
        sum += std::abs(predictions[i] - references[i]);
        ++n;
    }
    if (n == 0) throw EmptyMask("mae over an empty mask");
    return sum / static_cast<double>(n);
}

std::size_t ConfusionMatrix::total() const {
    std::size_t n = 0;
    for (const auto& row : counts) {
        for (auto c : row) n += c;
    }
    return n;
}

ConfusionMatrix confusion(std::span<const dsp::ActivityLabel> predicted, std::span<const dsp::ActivityLabel> truth) {
    if (predicted.size() != truth.size() || truth.empty()) {
        throw LengthMismatch("confusion needs equal, non-empty label lists, got " + std::to_string(predicted.size()) +
                             " and " + std::to_string(truth.size()));
    }
    ConfusionMatrix m;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto t = static_cast<std::size_t>(truth[i]), p = static_cast<std::size_t>(predicted[i]);
        ++m.counts[t][p];
        correct += t == p;
    }
    m.accuracy_pct = 100.0 * static_cast<double>(correct) / static_cast<double>(truth.size());
    return m;
}

Histogram density_histogram(std::span<const double> values, double lo, double width, std::size_t bins) {
    Histogram h{lo, width, std::vector<double>(bins, 0.0)};
    if (bins == 0 || values.empty()) return h;
    for (double v : values) {
        const double pos = std::floor((v - lo) / width);
        const auto i = pos < 0.0 ? std::size_t{0} : std::min(bins - 1, static_cast<std::size_t>(pos));
        h.density[i] += 1.0;
    }
    const double norm = static_cast<double>(values.size()) * width;
    for (auto& d : h.density) d /= norm;
    return h;
}

}  // namespace vitalink::eval
