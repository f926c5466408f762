#include "mprad/cooccur.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "haralick_core.hpp"
#include "mprad/error.hpp"
#include "mprad/tspm.hpp"

namespace mprad {

void Offset::validate() const {
    if (distance < 1) {
        throw Error(Errc::invalid_argument, "offset distance must be >= 1, got " + std::to_string(distance));
    }
    if (angle != 0 && angle != 45 && angle != 90 && angle != 135) {
        throw Error(Errc::invalid_argument,
                    "offset angle must be 0, 45, 90 or 135, got " + std::to_string(angle));
    }
}

std::vector<Offset> all_angles(int distance) {
    return {{distance, 0}, {distance, 45}, {distance, 90}, {distance, 135}};
}

std::vector<Offset> parse_offsets(std::string_view text) {
    std::vector<Offset> out;
    auto to_int = [&](std::string_view s) {
        while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw Error(Errc::invalid_argument, "bad offset list \"" + std::string(text) + "\"");
        }
        return v;
    };
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find(',', start), text.size());
        const std::string_view item = text.substr(start, end - start);
        const std::size_t colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw Error(Errc::invalid_argument, "offset \"" + std::string(item) + "\" is not d:angle");
        }
        Offset o{to_int(item.substr(0, colon)), to_int(item.substr(colon + 1))};
        o.validate();
        out.push_back(o);
        start = end + 1;
    }
    return out;
}

std::string format_offsets(std::span<const Offset> offsets) {
    std::string s;
    for (std::size_t i = 0; i < offsets.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(offsets[i].distance) + ":" + std::to_string(offsets[i].angle);
    }
    return s;
}

CooccurrenceMatrix::CooccurrenceMatrix(int levels) : levels_(levels) {
    if (levels < 1 || levels > 4096) {
        throw Error(Errc::invalid_argument,
                    "co-occurrence levels must lie in [1, 4096], got " + std::to_string(levels));
    }
    cells_.assign(static_cast<std::size_t>(levels) * static_cast<std::size_t>(levels), 0.0);
}

double CooccurrenceMatrix::sum() const noexcept {
    double s = 0.0;
    for (double v : cells_) s += v;
    return s;
}

std::size_t CooccurrenceMatrix::nonzero_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](double v) { return v != 0.0; }));
}

CooccurrenceMatrix CooccurrenceMatrix::symmetrized() const {
    if (normalized_) throw Error(Errc::invalid_argument, "symmetrize raw counts, not a normalized matrix");
    CooccurrenceMatrix out(levels_);
    for (int m = 0; m < levels_; ++m) {
        for (int n = 0; n < levels_; ++n) out(m, n) = (*this)(m, n) + (*this)(n, m);
    }
    out.symmetric_ = true;
    return out;
}

CooccurrenceMatrix CooccurrenceMatrix::normalized() const {
    const double total = sum();
    if (!(total > 0.0)) throw Error(Errc::no_valid_pairs, "co-occurrence matrix is empty");
    CooccurrenceMatrix out = *this;
    for (double& v : out.cells_) v /= total;
    out.normalized_ = true;
    return out;
}

std::string CooccurrenceMatrix::to_csv() const {
    std::string out;
    char buf[32];
    for (int m = 0; m < levels_; ++m) {
        for (int n = 0; n < levels_; ++n) {
            if (n) out += ',';
            std::snprintf(buf, sizeof buf, "%.17g", (*this)(m, n));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

namespace {

void check_levels(int levels) {
    if (levels < 2) throw Error(Errc::invalid_argument, "levels must be >= 2");
}

}  // namespace

CooccurrenceMatrix build_glcm(const Grid<Level>& channel, int levels, const Region& region,
                              Offset offset, bool symmetric) {
    check_levels(levels);
    offset.validate();
    region.check_within(channel.width(), channel.height());
    CooccurrenceMatrix counts(levels);
    const Rect& b = region.bounds();
    const int dr = offset.drow();
    const int dc = offset.dcol();
    long long pairs = 0;
    for (int r = b.row0; r < b.row1; ++r) {
        for (int c = b.col0; c < b.col1; ++c) {
            if (!region.contains(r, c) || !region.contains(r + dr, c + dc)) continue;
            const int m = channel(r, c);
            const int n = channel(r + dr, c + dc);
            if (m >= levels || n >= levels) throw Error(Errc::out_of_range, "level exceeds G-1");
            counts(m, n) += 1.0;
            ++pairs;
        }
    }
    if (pairs == 0) {
        throw Error(Errc::no_valid_pairs, "no voxel pair inside the region for offset " +
                                              std::to_string(offset.distance) + ":" +
                                              std::to_string(offset.angle));
    }
    return symmetric ? counts.symmetrized().normalized() : counts.normalized();
}

CooccurrenceMatrix pair_signature_glcm(std::span<const Level> si, std::span<const Level> sj,
                                       int levels) {
    check_levels(levels);
    if (si.size() != sj.size()) {
        throw Error(Errc::invalid_argument, "signature lengths differ (" + std::to_string(si.size()) +
                                                " vs " + std::to_string(sj.size()) + ")");
    }
    CooccurrenceMatrix m(levels);
    for (std::size_t r = 0; r < si.size(); ++r) {
        if (si[r] >= levels || sj[r] >= levels) throw Error(Errc::out_of_range, "level exceeds G-1");
        m(si[r], sj[r]) += 1.0;
    }
    return m;
}

CooccurrenceMatrix build_tscm(const QuantizedStack& q, const Region& region, Offset offset,
                              bool symmetric, std::span<const int> channel_subset) {
    const std::vector<int> channels = resolve_channel_subset(channel_subset, q.channel_count());
    offset.validate();
    region.check_within(q.width(), q.height());
    const int g = q.levels();
    CooccurrenceMatrix counts(g);
    const Rect& b = region.bounds();
    const int dr = offset.drow();
    const int dc = offset.dcol();
    long long pairs = 0;
    for (int r = b.row0; r < b.row1; ++r) {
        for (int c = b.col0; c < b.col1; ++c) {
            if (!region.contains(r, c) || !region.contains(r + dr, c + dc)) continue;
            // Sum of the per-pair signature matrices: one indicator per channel.
            for (int k : channels) {
                const int m = q.channel(k)(r, c);
                const int n = q.channel(k)(r + dr, c + dc);
                counts(m, n) += 1.0;
            }
            ++pairs;
        }
    }
    if (pairs == 0) {
        throw Error(Errc::no_valid_pairs, "no signature pair inside the region for offset " +
                                              std::to_string(offset.distance) + ":" +
                                              std::to_string(offset.angle));
    }
    return symmetric ? counts.symmetrized().normalized() : counts.normalized();
}

CooccurrenceMatrix build_tsrm(std::span<const Level> signature, int channel_distance, int levels) {
    check_levels(levels);
    const int n = static_cast<int>(signature.size());
    if (channel_distance < 1 || channel_distance > n - 1) {
        throw Error(Errc::out_of_range, "channel distance " + std::to_string(channel_distance) +
                                            " outside [1, " + std::to_string(n - 1) + "]");
    }
    CooccurrenceMatrix m(levels);
    for (int k = 0; k + channel_distance < n; ++k) {
        const Level i = signature[static_cast<std::size_t>(k)];
        const Level j = signature[static_cast<std::size_t>(k + channel_distance)];
        if (i >= levels || j >= levels) throw Error(Errc::out_of_range, "level exceeds G-1");
        m(i, j) += 1.0;
    }
    return m;
}

const std::array<std::string_view, kHaralickCount>& haralick_names() {
    static const std::array<std::string_view, kHaralickCount> names = {
        "autocorrelation", "cluster_prominence", "cluster_shade", "cluster_tendency",
        "contrast",        "correlation",        "difference_entropy", "dissimilarity",
        "energy",          "entropy",            "homogeneity1",  "homogeneity2",
        "imc1",            "imc2",               "idmn",          "idn",
        "inverse_variance", "maximum_probability", "sum_average", "sum_entropy",
        "sum_variance",    "variance",
    };
    return names;
}

std::optional<HaralickFeature> haralick_feature_from_name(std::string_view name) {
    const auto& names = haralick_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<HaralickFeature>(i);
    }
    return std::nullopt;
}

HaralickFeatures haralick(const CooccurrenceMatrix& m) {
    if (!m.is_normalized() || std::abs(m.sum() - 1.0) > 1e-9) {
        throw Error(Errc::not_normalized, "Haralick features need a normalized matrix");
    }
    std::vector<detail::CellProbability> cells;
    detail::collect_cells(m, cells);
    detail::HaralickScratch scratch(m.levels());
    return scratch.evaluate(cells);
}

}  // namespace mprad
