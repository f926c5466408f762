#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mprad/grid.hpp"

namespace mprad {

using Level = std::uint16_t;

/// N co-registered channels of raw intensity on one grid.
class MultiParametricStack {
public:
    MultiParametricStack() = default;

    // Throws Errc::dimension_mismatch / invalid_argument / degenerate on
    // violated invariants (shape, N >= 1, finite values).
    MultiParametricStack(std::vector<Grid<double>> channels, std::vector<std::string> names);

    int width() const noexcept { return channels_.empty() ? 0 : channels_.front().width(); }
    int height() const noexcept { return channels_.empty() ? 0 : channels_.front().height(); }
    int channel_count() const noexcept { return static_cast<int>(channels_.size()); }

    const Grid<double>& channel(int k) const { return channels_.at(static_cast<std::size_t>(k)); }
    const std::vector<Grid<double>>& channels() const noexcept { return channels_; }
    const std::vector<std::string>& channel_names() const noexcept { return names_; }

private:
    std::vector<Grid<double>> channels_;
    std::vector<std::string> names_;
};

struct ChannelBounds {
    double min = 0.0;
    double max = 0.0;
};

struct QuantizationSpec {
    int levels = 256;
    std::vector<ChannelBounds> bounds;  // per-channel global min/max
};

/// Quantized levels plus the matching unit-normalized intensities
/// (per-channel min-max to [0,1]) used by the cross-channel statistics.
class QuantizedStack {
public:
    QuantizedStack() = default;
    QuantizedStack(std::vector<Grid<Level>> levels, std::vector<Grid<double>> unit,
                   QuantizationSpec spec, std::vector<std::string> names);

    int width() const noexcept { return levels_.empty() ? 0 : levels_.front().width(); }
    int height() const noexcept { return levels_.empty() ? 0 : levels_.front().height(); }
    int channel_count() const noexcept { return static_cast<int>(levels_.size()); }
    int levels() const noexcept { return spec_.levels; }

    const Grid<Level>& channel(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
    const Grid<double>& unit_channel(int k) const { return unit_.at(static_cast<std::size_t>(k)); }
    const QuantizationSpec& spec() const noexcept { return spec_; }
    const std::vector<std::string>& channel_names() const noexcept { return names_; }

private:
    std::vector<Grid<Level>> levels_;
    std::vector<Grid<double>> unit_;
    QuantizationSpec spec_;
    std::vector<std::string> names_;
};

/// Per-voxel vector across channels, in channel order.
template <class T>
struct Signature {
    Position position;
    std::vector<T> values;
};

using TissueSignature = Signature<Level>;
using UnitSignature = Signature<double>;

/// level = floor((v - min) / (max - min) * G), clamped to G-1; constant channels map to 0.
QuantizedStack quantize(const MultiParametricStack& stack, int levels);

Level quantize_value(double v, ChannelBounds bounds, int levels) noexcept;

TissueSignature signature_at(const QuantizedStack& q, Position p);
UnitSignature unit_signature_at(const QuantizedStack& q, Position p);

/// Integer label image; 0 is background.
class RoiMask {
public:
    RoiMask() = default;
    explicit RoiMask(Grid<int> labels, std::map<int, std::string> label_names = {});

    int width() const noexcept { return labels_.width(); }
    int height() const noexcept { return labels_.height(); }
    const Grid<int>& labels() const noexcept { return labels_; }
    int at(Position p) const { return labels_[p]; }
    const std::map<int, std::string>& label_names() const noexcept { return names_; }

    /// Sorted distinct non-zero labels.
    std::vector<int> present_labels() const;
    std::string label_name(int label) const;

private:
    Grid<int> labels_;
    std::map<int, std::string> names_;
};

}  // namespace mprad
