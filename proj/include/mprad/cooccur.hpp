#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mprad/region.hpp"
#include "mprad/stack.hpp"

namespace mprad {

/// Lattice displacement for a co-occurrence pair. Angles are measured
/// counter-clockwise from the +column axis with rows growing downward, so
/// 45 degrees points up-right.
struct Offset {
    int distance = 1;
    int angle = 0;  // one of 0, 45, 90, 135

    int drow() const noexcept { return angle == 0 ? 0 : -distance; }
    int dcol() const noexcept {
        return angle == 0 || angle == 45 ? distance : (angle == 90 ? 0 : -distance);
    }

    // Throws Errc::invalid_argument for d < 1 or an unsupported angle.
    void validate() const;

    friend bool operator==(const Offset&, const Offset&) = default;
};

/// d = distance at 0, 45, 90 and 135 degrees.
std::vector<Offset> all_angles(int distance = 1);

/// Parses "d:angle[,d:angle...]", e.g. "1:0,1:90".
std::vector<Offset> parse_offsets(std::string_view text);
std::string format_offsets(std::span<const Offset> offsets);

/// Dense G x G matrix of non-negative reals. Raw builders store exact
/// integer counts; `normalized()` divides by the total.
class CooccurrenceMatrix {
public:
    CooccurrenceMatrix() = default;
    explicit CooccurrenceMatrix(int levels);

    int levels() const noexcept { return levels_; }
    double operator()(int m, int n) const noexcept { return cells_[index(m, n)]; }
    double& operator()(int m, int n) noexcept { return cells_[index(m, n)]; }
    std::span<const double> cells() const noexcept { return cells_; }

    bool is_normalized() const noexcept { return normalized_; }
    bool is_symmetric() const noexcept { return symmetric_; }

    double sum() const noexcept;
    std::size_t nonzero_count() const noexcept;

    /// M + M^T. Only valid on raw counts.
    CooccurrenceMatrix symmetrized() const;
    /// Throws Errc::no_valid_pairs when the matrix is all zero.
    CooccurrenceMatrix normalized() const;

    /// G rows of G comma-separated values.
    std::string to_csv() const;

    friend bool operator==(const CooccurrenceMatrix&, const CooccurrenceMatrix&) = default;

private:
    std::size_t index(int m, int n) const noexcept {
        return static_cast<std::size_t>(m) * static_cast<std::size_t>(levels_) +
               static_cast<std::size_t>(n);
    }

    int levels_ = 0;
    std::vector<double> cells_;
    bool normalized_ = false;
    bool symmetric_ = false;
};

/// Classic single-channel GLCM over the pairs (p, p+offset) with both ends
/// inside `region`; symmetrized on request, always normalized.
/// Throws Errc::no_valid_pairs when no pair fits.
CooccurrenceMatrix build_glcm(const Grid<Level>& channel, int levels, const Region& region,
                              Offset offset, bool symmetric = true);

/// Channel-wise pairing of two signatures: cell (m,n) counts channels r with
/// si[r] = m and sj[r] = n. Raw counts, sum = N.
CooccurrenceMatrix pair_signature_glcm(std::span<const Level> si, std::span<const Level> sj,
                                       int levels);

/// Sum of pair_signature_glcm over every spatial pair in `region` satisfying
/// the offset; symmetrized (by default) and normalized. An empty subset
/// means all channels.
CooccurrenceMatrix build_tscm(const QuantizedStack& q, const Region& region, Offset offset,
                              bool symmetric = true, std::span<const int> channel_subset = {});

/// Raw cross-channel relationship matrix of one signature: cell (i,j) counts
/// k with s[k] = i and s[k+d] = j. Requires 1 <= d <= N-1.
CooccurrenceMatrix build_tsrm(std::span<const Level> signature, int channel_distance, int levels);

inline constexpr std::size_t kHaralickCount = 22;

enum class HaralickFeature : std::size_t {
    autocorrelation,
    cluster_prominence,
    cluster_shade,
    cluster_tendency,
    contrast,
    correlation,
    difference_entropy,
    dissimilarity,
    energy,
    entropy,
    homogeneity1,
    homogeneity2,
    imc1,
    imc2,
    idmn,
    idn,
    inverse_variance,
    maximum_probability,
    sum_average,
    sum_entropy,
    sum_variance,
    variance,
};

const std::array<std::string_view, kHaralickCount>& haralick_names();
std::optional<HaralickFeature> haralick_feature_from_name(std::string_view name);

struct HaralickFeatures {
    std::array<double, kHaralickCount> values{};

    double operator[](HaralickFeature f) const noexcept {
        return values[static_cast<std::size_t>(f)];
    }
    double& operator[](HaralickFeature f) noexcept { return values[static_cast<std::size_t>(f)]; }
};

/// The 22-feature battery on a normalized matrix (levels indexed from 1 in
/// the formulas). Entropies are in bits. Throws Errc::not_normalized.
HaralickFeatures haralick(const CooccurrenceMatrix& m);

}  // namespace mprad
