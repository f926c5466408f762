#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace mprad {

inline constexpr std::size_t kFirstOrderCount = 11;

enum class FirstOrderFeature : std::size_t {
    mean,
    median,
    std,
    minimum,
    maximum,
    range,
    mad,
    skewness,
    kurtosis,
    entropy,
    uniformity,
};

const std::array<std::string_view, kFirstOrderCount>& first_order_names();
std::optional<FirstOrderFeature> first_order_feature_from_name(std::string_view name);

struct FirstOrderFeatures {
    std::array<double, kFirstOrderCount> values{};

    double operator[](FirstOrderFeature f) const noexcept {
        return values[static_cast<std::size_t>(f)];
    }
    double& operator[](FirstOrderFeature f) noexcept { return values[static_cast<std::size_t>(f)]; }
};

/// Population moments plus a binned entropy/uniformity over `values`.
///
/// Entropy and uniformity use `bins` equal-width bins on [lo, hi); values
/// outside are clamped into the edge bins. Skewness and kurtosis are 0 when
/// all values are equal; kurtosis is non-excess. MAD is the median absolute
/// deviation from the median. `values` is reordered in place.
FirstOrderFeatures first_order_statistics(std::span<double> values, int bins, double lo, double hi);

/// Histogram bin count used for a signature of `channels` entries.
constexpr int tscin_bins(int channels) noexcept { return channels < 16 ? channels : 16; }

/// Cross-channel statistics of one unit-normalized signature, binned into
/// `bins` bins over [0,1]. Throws Errc::invalid_argument on an empty signature.
FirstOrderFeatures tscin_features(std::span<const double> signature, int bins);
inline FirstOrderFeatures tscin_features(std::span<const double> signature) {
    return tscin_features(signature, tscin_bins(static_cast<int>(signature.size())));
}

}  // namespace mprad
