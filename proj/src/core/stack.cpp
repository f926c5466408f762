#include "mprad/stack.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "mprad/error.hpp"

namespace mprad {

MultiParametricStack::MultiParametricStack(std::vector<Grid<double>> channels,
                                           std::vector<std::string> names)
    : channels_(std::move(channels)), names_(std::move(names)) {
    if (channels_.empty()) {
        throw Error(Errc::invalid_argument, "stack needs at least one channel");
    }
    const int w = channels_.front().width();
    const int h = channels_.front().height();
    if (w < 1 || h < 1) {
        throw Error(Errc::invalid_argument, "stack dimensions must be at least 1x1");
    }
    for (std::size_t k = 0; k < channels_.size(); ++k) {
        if (!channels_[k].same_shape(w, h)) {
            throw Error(Errc::dimension_mismatch,
                        "channel " + std::to_string(k) + " is " +
                            std::to_string(channels_[k].width()) + "x" +
                            std::to_string(channels_[k].height()) + ", expected " +
                            std::to_string(w) + "x" + std::to_string(h));
        }
        for (double v : channels_[k].values()) {
            if (!std::isfinite(v)) {
                throw Error(Errc::invalid_argument,
                            "channel " + std::to_string(k) + " contains a non-finite value");
            }
        }
    }
    if (names_.empty()) {
        for (std::size_t k = 0; k < channels_.size(); ++k) names_.push_back("ch" + std::to_string(k));
    }
    if (names_.size() != channels_.size()) {
        throw Error(Errc::invalid_argument, "channel name count does not match channel count");
    }
}

QuantizedStack::QuantizedStack(std::vector<Grid<Level>> levels, std::vector<Grid<double>> unit,
                               QuantizationSpec spec, std::vector<std::string> names)
    : levels_(std::move(levels)), unit_(std::move(unit)), spec_(std::move(spec)),
      names_(std::move(names)) {
    if (levels_.empty() || levels_.size() != unit_.size() ||
        spec_.bounds.size() != levels_.size()) {
        throw Error(Errc::invalid_argument, "inconsistent quantized stack");
    }
    if (spec_.levels < 2) throw Error(Errc::invalid_argument, "levels must be >= 2");
    const int w = levels_.front().width();
    const int h = levels_.front().height();
    for (std::size_t k = 0; k < levels_.size(); ++k) {
        if (!levels_[k].same_shape(w, h) || !unit_[k].same_shape(w, h)) {
            throw Error(Errc::dimension_mismatch, "quantized channels differ in shape");
        }
        for (Level v : levels_[k].values()) {
            if (v >= spec_.levels) throw Error(Errc::out_of_range, "level exceeds G-1");
        }
    }
    if (names_.empty()) {
        for (std::size_t k = 0; k < levels_.size(); ++k) names_.push_back("ch" + std::to_string(k));
    }
}

Level quantize_value(double v, ChannelBounds bounds, int levels) noexcept {
    const double span = bounds.max - bounds.min;
    if (!(span > 0.0)) return 0;
    const double scaled = std::floor((v - bounds.min) / span * static_cast<double>(levels));
    if (scaled <= 0.0) return 0;
    if (scaled >= static_cast<double>(levels - 1)) return static_cast<Level>(levels - 1);
    return static_cast<Level>(scaled);
}

QuantizedStack quantize(const MultiParametricStack& stack, int levels) {
    if (levels < 2 || levels > 65536) {
        throw Error(Errc::invalid_argument,
                    "quantization levels must lie in [2, 65536], got " + std::to_string(levels));
    }
    QuantizationSpec spec;
    spec.levels = levels;
    std::vector<Grid<Level>> out;
    std::vector<Grid<double>> unit;
    for (const auto& ch : stack.channels()) {
        const auto [lo, hi] = std::minmax_element(ch.values().begin(), ch.values().end());
        const ChannelBounds b{*lo, *hi};
        spec.bounds.push_back(b);
        Grid<Level> q(ch.width(), ch.height());
        Grid<double> u(ch.width(), ch.height());
        const double span = b.max - b.min;
        auto src = ch.values();
        auto dst = q.values();
        auto udst = u.values();
        for (std::size_t i = 0; i < src.size(); ++i) {
            dst[i] = quantize_value(src[i], b, levels);
            udst[i] = span > 0.0 ? (src[i] - b.min) / span : 0.0;
        }
        out.push_back(std::move(q));
        unit.push_back(std::move(u));
    }
    return QuantizedStack(std::move(out), std::move(unit), std::move(spec), stack.channel_names());
}

namespace {

void check_position(const QuantizedStack& q, Position p) {
    if (p.row < 0 || p.col < 0 || p.row >= q.height() || p.col >= q.width()) {
        throw Error(Errc::out_of_range, "position (" + std::to_string(p.row) + ", " +
                                            std::to_string(p.col) + ") outside grid");
    }
}

}  // namespace

TissueSignature signature_at(const QuantizedStack& q, Position p) {
    check_position(q, p);
    TissueSignature s{p, {}};
    s.values.reserve(static_cast<std::size_t>(q.channel_count()));
    for (int k = 0; k < q.channel_count(); ++k) s.values.push_back(q.channel(k)[p]);
    return s;
}

UnitSignature unit_signature_at(const QuantizedStack& q, Position p) {
    check_position(q, p);
    UnitSignature s{p, {}};
    s.values.reserve(static_cast<std::size_t>(q.channel_count()));
    for (int k = 0; k < q.channel_count(); ++k) s.values.push_back(q.unit_channel(k)[p]);
    return s;
}

RoiMask::RoiMask(Grid<int> labels, std::map<int, std::string> label_names)
    : labels_(std::move(labels)), names_(std::move(label_names)) {
    for (int v : labels_.values()) {
        if (v < 0) throw Error(Errc::invalid_argument, "mask labels must be non-negative");
    }
}

std::vector<int> RoiMask::present_labels() const {
    std::set<int> seen;
    for (int v : labels_.values()) {
        if (v != 0) seen.insert(v);
    }
    return {seen.begin(), seen.end()};
}

std::string RoiMask::label_name(int label) const {
    if (auto it = names_.find(label); it != names_.end()) return it->second;
    return "label" + std::to_string(label);
}

}  // namespace mprad
