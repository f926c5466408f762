#include <algorithm>
#include <string>

#include "mprad/error.hpp"
#include "mprad/featuremap.hpp"
#include "mprad/tscin.hpp"
#include "mprad/tspm.hpp"

namespace mprad {

std::string_view to_string(Family f) {
    switch (f) {
        case Family::fos: return "fos";
        case Family::glcm: return "glcm";
        case Family::tspm: return "tspm";
        case Family::tscm: return "tscm";
        case Family::tscin: return "tscin";
        case Family::tsrm: return "tsrm";
    }
    return "?";
}

std::string_view to_string(SummaryStat s) {
    switch (s) {
        case SummaryStat::mean: return "mean";
        case SummaryStat::median: return "median";
        case SummaryStat::std: return "std";
        case SummaryStat::min: return "min";
        case SummaryStat::max: return "max";
    }
    return "?";
}

Family family_from_string(std::string_view s) {
    for (Family f : {Family::fos, Family::glcm, Family::tspm, Family::tscm, Family::tscin, Family::tsrm}) {
        if (to_string(f) == s) return f;
    }
    throw Error(Errc::invalid_argument, "unknown feature family \"" + std::string(s) + "\"");
}

SummaryStat summary_from_string(std::string_view s) {
    for (SummaryStat st : {SummaryStat::mean, SummaryStat::median, SummaryStat::std, SummaryStat::min,
                           SummaryStat::max}) {
        if (to_string(st) == s) return st;
    }
    throw Error(Errc::invalid_argument, "unknown summary statistic \"" + std::string(s) + "\"");
}

std::vector<std::string_view> family_feature_names(Family f) {
    switch (f) {
        case Family::fos:
        case Family::tscin: {
            const auto& n = first_order_names();
            return {n.begin(), n.end()};
        }
        case Family::glcm:
        case Family::tscm:
        case Family::tsrm: {
            const auto& n = haralick_names();
            return {n.begin(), n.end()};
        }
        case Family::tspm: return {"entropy", "uniformity", "mi"};
    }
    return {};
}

const std::vector<KernelPreset>& kernel_presets() {
    static const std::vector<KernelPreset> presets = {
        {"usc", 15, 256},
        {"breast", 5, 128},
        {"stroke", 3, 32},
    };
    return presets;
}

KernelConfig preset_config(std::string_view name) {
    for (const auto& p : kernel_presets()) {
        if (p.name == name) {
            KernelConfig cfg;
            cfg.window = p.window;
            cfg.levels = p.levels;
            return cfg;
        }
    }
    throw Error(Errc::invalid_argument, "unknown preset \"" + std::string(name) + "\"");
}

namespace {

bool is_cooccurrence(Family f) {
    return f == Family::glcm || f == Family::tscm || f == Family::tsrm;
}

}  // namespace

void KernelConfig::validate() const {
    if (window < 3 || window % 2 == 0) {
        throw Error(Errc::invalid_argument, "window must be odd and >= 3, got " + std::to_string(window));
    }
    if (levels < 2) throw Error(Errc::invalid_argument, "levels must be >= 2");
    if (is_cooccurrence(family) && levels > 4096) {
        throw Error(Errc::invalid_argument, "co-occurrence families support at most 4096 levels");
    }
    if (family == Family::glcm || family == Family::tscm) {
        if (offsets.empty()) throw Error(Errc::invalid_argument, "at least one offset is required");
        for (const Offset& o : offsets) {
            o.validate();
            if (o.distance >= window) {
                throw Error(Errc::invalid_argument, "offset distance " + std::to_string(o.distance) +
                                                        " leaves no pair inside a " +
                                                        std::to_string(window) + " window");
            }
        }
    }
    if (channel < 0) throw Error(Errc::out_of_range, "channel index must be >= 0");
    if (family == Family::tsrm && channel_distance < 1) {
        throw Error(Errc::out_of_range, "channel distance must be >= 1");
    }
    const auto names = family_feature_names(family);
    if (feature != "all" && std::find(names.begin(), names.end(), feature) == names.end()) {
        throw Error(Errc::invalid_argument, "family " + std::string(to_string(family)) +
                                                " has no feature \"" + feature + "\"");
    }
}

void KernelConfig::validate_for(const QuantizedStack& q) const {
    validate();
    if (q.levels() != levels) {
        throw Error(Errc::invalid_argument, "stack quantized to " + std::to_string(q.levels()) +
                                                " levels, kernel expects " + std::to_string(levels));
    }
    if (window > q.width() || window > q.height()) {
        throw Error(Errc::invalid_argument, "window " + std::to_string(window) + " larger than image " +
                                                std::to_string(q.width()) + "x" +
                                                std::to_string(q.height()));
    }
    const int n = q.channel_count();
    if ((family == Family::fos || family == Family::glcm) && channel >= n) {
        throw Error(Errc::out_of_range, "channel " + std::to_string(channel) + " outside [0, " +
                                            std::to_string(n) + ")");
    }
    if (family == Family::tspm || family == Family::tscm) resolve_channel_subset(channel_subset, n);
    if (family == Family::tsrm && channel_distance > n - 1) {
        throw Error(Errc::out_of_range, "channel distance " + std::to_string(channel_distance) +
                                            " needs at least " + std::to_string(channel_distance + 1) +
                                            " channels, stack has " + std::to_string(n));
    }
}

Rect valid_rect(int width, int height, int window) {
    const int half = window / 2;
    Rect r{half, half, height - half, width - half};
    if (r.empty()) return Rect{};
    return r;
}

long long FeatureMap::valid_count() const {
    long long n = 0;
    for (auto v : valid.values()) n += v ? 1 : 0;
    return n;
}

std::vector<std::string> resolve_features(const QuantizedStack& q, const KernelConfig& cfg,
                                          std::vector<std::string> features) {
    const auto names = family_feature_names(cfg.family);
    const bool mi_possible =
        cfg.family != Family::tspm ||
        resolve_channel_subset(cfg.channel_subset, q.channel_count()).size() >= 2;
    std::vector<std::string> out;
    for (const auto& f : features) {
        if (f == "all") {
            for (auto n : names) {
                if (n == "mi" && !mi_possible) continue;
                out.emplace_back(n);
            }
            continue;
        }
        if (std::find(names.begin(), names.end(), f) == names.end()) {
            throw Error(Errc::invalid_argument, "family " + std::string(to_string(cfg.family)) +
                                                    " has no feature \"" + f + "\"");
        }
        if (f == "mi" && !mi_possible) {
            throw Error(Errc::invalid_argument, "tspm mi needs a channel subset of size >= 2");
        }
        out.push_back(f);
    }
    if (out.empty()) throw Error(Errc::invalid_argument, "no features requested");
    return out;
}

}  // namespace mprad
