#include "cjs/numeric.hpp"

#include <algorithm>

namespace cjs {

namespace {

constexpr std::size_t kPairwiseBlock = 64;

double pairwise_sum_impl(const double* data, std::size_t count) {
    if (count <= kPairwiseBlock) {
        double acc = 0.0;
        for (std::size_t i = 0; i < count; ++i) acc += data[i];
        return acc;
    }
    const std::size_t half = count / 2;
    return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, count - half);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_impl(values.data(), values.size());
}

double sample_mean(std::span<const double> values) {
    if (values.empty()) throw ConfigError("sample_mean: empty input");
    double acc = 0.0;
    for (double v : values) acc += v;
    const double mean = acc / static_cast<double>(values.size());
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return std::clamp(mean, *lo, *hi);
}

double sum_squared_deviation(std::span<const double> values, double center) {
    double acc = 0.0;
    for (double v : values) {
        const double d = v - center;
        acc += d * d;
    }
    return acc;
}

}  // namespace cjs
