#include "mprad/tscin.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mprad/error.hpp"
#include "mprad/tspm.hpp"

namespace mprad {

const std::array<std::string_view, kFirstOrderCount>& first_order_names() {
    static const std::array<std::string_view, kFirstOrderCount> names = {
        "mean", "median", "std", "min", "max", "range",
        "mad", "skewness", "kurtosis", "entropy", "uniformity",
    };
    return names;
}

std::optional<FirstOrderFeature> first_order_feature_from_name(std::string_view name) {
    const auto& names = first_order_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<FirstOrderFeature>(i);
    }
    return std::nullopt;
}

namespace {

// Median of sorted data.
double sorted_median(std::span<const double> v) {
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

FirstOrderFeatures first_order_statistics(std::span<double> values, int bins, double lo, double hi) {
    if (values.empty()) throw Error(Errc::invalid_argument, "first-order statistics of an empty sample");
    if (bins < 1 || !(hi > lo)) throw Error(Errc::invalid_argument, "bad histogram binning");

    // Sorting first makes every accumulation order-independent.
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());

    using F = FirstOrderFeature;
    FirstOrderFeatures f;
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    f[F::mean] = mean;
    f[F::median] = sorted_median(values);
    f[F::minimum] = values.front();
    f[F::maximum] = values.back();
    f[F::range] = values.back() - values.front();
    f[F::std] = std::sqrt(m2);

    const bool constant = values.front() == values.back();
    if (constant) {
        f[F::std] = 0.0;
    } else if (m2 > 0.0) {
        f[F::skewness] = m3 / std::pow(m2, 1.5);
        f[F::kurtosis] = m4 / (m2 * m2);
    }

    std::vector<double> dev(values.size());
    const double med = f[F::median];
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = std::abs(values[i] - med);
    std::sort(dev.begin(), dev.end());
    f[F::mad] = sorted_median(dev);

    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
    const double width = hi - lo;
    for (double v : values) {
        auto b = static_cast<long long>(std::floor((v - lo) / width * bins));
        b = std::clamp<long long>(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    f[F::entropy] = entropy_bits(counts, values.size());
    f[F::uniformity] = uniformity(counts, values.size());
    return f;
}

FirstOrderFeatures tscin_features(std::span<const double> signature, int bins) {
    if (signature.empty()) throw Error(Errc::invalid_argument, "empty tissue signature");
    std::vector<double> v(signature.begin(), signature.end());
    return first_order_statistics(v, bins, 0.0, 1.0);
}

}  // namespace mprad
