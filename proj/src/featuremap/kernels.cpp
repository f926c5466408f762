#include "kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "../cooccur/haralick_core.hpp"
#include "mprad/tscin.hpp"
#include "mprad/tspm.hpp"

namespace mprad::detail {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct WindowBox {
    int row0, col0, row1, col1;  // half-open
};

WindowBox box_at(int row, int col, int window) {
    const int h = window / 2;
    return {row - h, col - h, row + h + 1, col + h + 1};
}

// ---------------------------------------------------------------------------
// First-order statistics of one channel inside the window.

class FosEvaluator final : public WindowEvaluator {
public:
    FosEvaluator(const QuantizedStack& q, const KernelConfig& cfg)
        : channel_(q.channel(cfg.channel)), window_(cfg.window), levels_(q.levels()) {
        values_.reserve(static_cast<std::size_t>(window_) * static_cast<std::size_t>(window_));
    }

    void evaluate(int row, int col, std::span<double> out) override {
        const WindowBox b = box_at(row, col, window_);
        values_.clear();
        for (int r = b.row0; r < b.row1; ++r) {
            const auto line = channel_.row(r);
            for (int c = b.col0; c < b.col1; ++c) values_.push_back(line[static_cast<std::size_t>(c)]);
        }
        const FirstOrderFeatures f = first_order_statistics(values_, levels_, -0.5, levels_ - 0.5);
        std::copy(f.values.begin(), f.values.end(), out.begin());
    }

private:
    const Grid<Level>& channel_;
    int window_;
    int levels_;
    std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Joint histogram over packed signature keys. The first selected channel
// occupies the most significant field, so sorted keys follow the same
// lexicographic order as SparseJointHistogram.

class TspmEvaluator final : public WindowEvaluator {
public:
    TspmEvaluator(const QuantizedStack& q, const KernelConfig& cfg, bool need_mi)
        : window_(cfg.window), need_mi_(need_mi),
          bits_(std::bit_width(static_cast<unsigned>(q.levels() - 1))) {
        for (int k : resolve_channel_subset(cfg.channel_subset, q.channel_count())) {
            channels_.push_back(&q.channel(k));
        }
        const std::size_t area = static_cast<std::size_t>(window_) * static_cast<std::size_t>(window_);
        keys_.reserve(area);
        counts_.reserve(area);
        if (need_mi_) subset_entropy_.assign(std::size_t{1} << channels_.size(), 0.0);
    }

    static bool packable(const QuantizedStack& q, const KernelConfig& cfg) {
        const int bits = std::bit_width(static_cast<unsigned>(q.levels() - 1));
        const auto n = resolve_channel_subset(cfg.channel_subset, q.channel_count()).size();
        return static_cast<int>(n) * bits <= 64 && n <= 20;
    }

    void evaluate(int row, int col, std::span<double> out) override {
        const WindowBox b = box_at(row, col, window_);
        const std::size_t all = (std::size_t{1} << channels_.size()) - 1;
        histogram(b, all);
        const std::uint64_t total = keys_.size();
        out[0] = entropy_bits(counts_, total);
        out[1] = uniformity(counts_, total);
        if (!need_mi_) {
            out[2] = kNaN;
            return;
        }
        subset_entropy_[all] = out[0];
        for (std::size_t mask = 1; mask < all; ++mask) {
            histogram(b, mask);
            subset_entropy_[mask] = entropy_bits(counts_, total);
        }
        out[2] = inclusion_exclusion(subset_entropy_);
    }

private:
    void histogram(const WindowBox& b, std::size_t mask) {
        keys_.clear();
        for (int r = b.row0; r < b.row1; ++r) {
            for (int c = b.col0; c < b.col1; ++c) {
                std::uint64_t key = 0;
                for (std::size_t i = 0; i < channels_.size(); ++i) {
                    if (mask & (std::size_t{1} << i)) key = (key << bits_) | (*channels_[i])(r, c);
                }
                keys_.push_back(key);
            }
        }
        std::sort(keys_.begin(), keys_.end());
        counts_.clear();
        for (std::size_t i = 0; i < keys_.size();) {
            std::size_t j = i + 1;
            while (j < keys_.size() && keys_[j] == keys_[i]) ++j;
            counts_.push_back(j - i);
            i = j;
        }
    }

    int window_;
    bool need_mi_;
    int bits_;
    std::vector<const Grid<Level>*> channels_;
    std::vector<std::uint64_t> keys_;
    std::vector<std::uint64_t> counts_;
    std::vector<double> subset_entropy_;
};

// ---------------------------------------------------------------------------
// Co-occurrence over the window for one or more channels (glcm is the
// one-channel case of tscm), averaged over offsets.

class WindowCooccurrenceEvaluator final : public WindowEvaluator {
public:
    WindowCooccurrenceEvaluator(const QuantizedStack& q, const KernelConfig& cfg,
                                std::vector<int> channel_ids)
        : window_(cfg.window), offsets_(cfg.offsets), acc_(q.levels()), scratch_(q.levels()) {
        for (int k : channel_ids) channels_.push_back(&q.channel(k));
    }

    void evaluate(int row, int col, std::span<double> out) override {
        const WindowBox b = box_at(row, col, window_);
        std::array<double, kHaralickCount> sum{};
        for (const Offset& o : offsets_) {
            const int dr = o.drow();
            const int dc = o.dcol();
            const int r0 = std::max(b.row0, b.row0 - dr);
            const int r1 = std::min(b.row1, b.row1 - dr);
            const int c0 = std::max(b.col0, b.col0 - dc);
            const int c1 = std::min(b.col1, b.col1 - dc);
            for (const Grid<Level>* ch : channels_) {
                for (int r = r0; r < r1; ++r) {
                    const auto here = ch->row(r);
                    const auto there = ch->row(r + dr);
                    for (int c = c0; c < c1; ++c) {
                        acc_.add_symmetric(here[static_cast<std::size_t>(c)],
                                           there[static_cast<std::size_t>(c + dc)]);
                    }
                }
            }
            acc_.drain(cells_);
            const HaralickFeatures f = scratch_.evaluate(cells_);
            for (std::size_t i = 0; i < kHaralickCount; ++i) sum[i] += f.values[i];
        }
        const double n = static_cast<double>(offsets_.size());
        for (std::size_t i = 0; i < kHaralickCount; ++i) out[i] = sum[i] / n;
    }

private:
    int window_;
    std::vector<Offset> offsets_;
    std::vector<const Grid<Level>*> channels_;
    CooccurrenceAccumulator acc_;
    HaralickScratch scratch_;
    std::vector<CellProbability> cells_;
};

// ---------------------------------------------------------------------------
// Per-voxel families.

class TscinEvaluator final : public WindowEvaluator {
public:
    explicit TscinEvaluator(const QuantizedStack& q) : q_(q) {
        values_.resize(static_cast<std::size_t>(q.channel_count()));
    }

    void evaluate(int row, int col, std::span<double> out) override {
        for (int k = 0; k < q_.channel_count(); ++k) {
            values_[static_cast<std::size_t>(k)] = q_.unit_channel(k)(row, col);
        }
        const FirstOrderFeatures f =
            first_order_statistics(values_, tscin_bins(q_.channel_count()), 0.0, 1.0);
        std::copy(f.values.begin(), f.values.end(), out.begin());
    }

private:
    const QuantizedStack& q_;
    std::vector<double> values_;
};

class TsrmEvaluator final : public WindowEvaluator {
public:
    TsrmEvaluator(const QuantizedStack& q, const KernelConfig& cfg)
        : q_(q), distance_(cfg.channel_distance), acc_(q.levels()), scratch_(q.levels()) {}

    void evaluate(int row, int col, std::span<double> out) override {
        const int n = q_.channel_count();
        for (int k = 0; k + distance_ < n; ++k) {
            acc_.add_symmetric(q_.channel(k)(row, col), q_.channel(k + distance_)(row, col));
        }
        acc_.drain(cells_);
        const HaralickFeatures f = scratch_.evaluate(cells_);
        std::copy(f.values.begin(), f.values.end(), out.begin());
    }

private:
    const QuantizedStack& q_;
    int distance_;
    CooccurrenceAccumulator acc_;
    HaralickScratch scratch_;
    std::vector<CellProbability> cells_;
};

// ---------------------------------------------------------------------------
// Reference evaluator: one call into the public builders per window.

class ReferenceEvaluator final : public WindowEvaluator {
public:
    ReferenceEvaluator(const QuantizedStack& q, const KernelConfig& cfg, bool need_mi)
        : q_(q), cfg_(cfg), need_mi_(need_mi) {}

    void evaluate(int row, int col, std::span<double> out) override {
        const Region window = Region::window({row, col}, cfg_.window);
        const int g = q_.levels();
        switch (cfg_.family) {
            case Family::fos: {
                std::vector<double> v;
                const Rect& b = window.bounds();
                for (int r = b.row0; r < b.row1; ++r) {
                    for (int c = b.col0; c < b.col1; ++c) v.push_back(q_.channel(cfg_.channel)(r, c));
                }
                const auto f = first_order_statistics(v, g, -0.5, g - 0.5);
                std::copy(f.values.begin(), f.values.end(), out.begin());
                break;
            }
            case Family::tspm: {
                const SparseJointHistogram h = build_tspm(q_, window, cfg_.channel_subset);
                out[0] = tspm_entropy(h);
                out[1] = tspm_uniformity(h);
                out[2] = need_mi_ ? tspm_mutual_information(q_, window, cfg_.channel_subset) : kNaN;
                break;
            }
            case Family::glcm:
            case Family::tscm: {
                std::array<double, kHaralickCount> sum{};
                for (const Offset& o : cfg_.offsets) {
                    const CooccurrenceMatrix m =
                        cfg_.family == Family::glcm
                            ? build_glcm(q_.channel(cfg_.channel), g, window, o, true)
                            : build_tscm(q_, window, o, true, cfg_.channel_subset);
                    const HaralickFeatures f = haralick(m);
                    for (std::size_t i = 0; i < kHaralickCount; ++i) sum[i] += f.values[i];
                }
                const double n = static_cast<double>(cfg_.offsets.size());
                for (std::size_t i = 0; i < kHaralickCount; ++i) out[i] = sum[i] / n;
                break;
            }
            case Family::tscin: {
                const auto f = tscin_features(unit_signature_at(q_, {row, col}).values);
                std::copy(f.values.begin(), f.values.end(), out.begin());
                break;
            }
            case Family::tsrm: {
                const auto s = signature_at(q_, {row, col});
                const auto m = build_tsrm(s.values, cfg_.channel_distance, g).symmetrized().normalized();
                const auto f = haralick(m);
                std::copy(f.values.begin(), f.values.end(), out.begin());
                break;
            }
        }
    }

private:
    const QuantizedStack& q_;
    const KernelConfig& cfg_;
    bool need_mi_;
};

}  // namespace

std::unique_ptr<WindowEvaluator> make_fast_evaluator(const QuantizedStack& q, const KernelConfig& cfg,
                                                     bool need_mi) {
    switch (cfg.family) {
        case Family::fos: return std::make_unique<FosEvaluator>(q, cfg);
        case Family::tspm:
            if (TspmEvaluator::packable(q, cfg)) return std::make_unique<TspmEvaluator>(q, cfg, need_mi);
            return std::make_unique<ReferenceEvaluator>(q, cfg, need_mi);
        case Family::glcm:
            return std::make_unique<WindowCooccurrenceEvaluator>(q, cfg, std::vector<int>{cfg.channel});
        case Family::tscm:
            return std::make_unique<WindowCooccurrenceEvaluator>(
                q, cfg, resolve_channel_subset(cfg.channel_subset, q.channel_count()));
        case Family::tscin: return std::make_unique<TscinEvaluator>(q);
        case Family::tsrm: return std::make_unique<TsrmEvaluator>(q, cfg);
    }
    return nullptr;
}

std::unique_ptr<WindowEvaluator> make_reference_evaluator(const QuantizedStack& q,
                                                          const KernelConfig& cfg, bool need_mi) {
    return std::make_unique<ReferenceEvaluator>(q, cfg, need_mi);
}

}  // namespace mprad::detail
