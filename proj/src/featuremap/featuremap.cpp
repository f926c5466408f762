#include "mprad/featuremap.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>

#include "kernels.hpp"
#include "mprad/error.hpp"
#include "mprad/io.hpp"

namespace mprad {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct MapPlan {
    std::vector<std::string> names;
    std::vector<std::size_t> slots;  // index into the family feature vector
    std::size_t family_size = 0;
    bool need_mi = false;
};

MapPlan plan_maps(const QuantizedStack& q, const KernelConfig& cfg, std::vector<std::string> features) {
    cfg.validate_for(q);
    MapPlan plan;
    plan.names = resolve_features(q, cfg, std::move(features));
    const auto family = family_feature_names(cfg.family);
    plan.family_size = family.size();
    for (const auto& name : plan.names) {
        const auto it = std::find(family.begin(), family.end(), name);
        plan.slots.push_back(static_cast<std::size_t>(it - family.begin()));
        if (name == "mi") plan.need_mi = true;
    }
    return plan;
}

std::vector<FeatureMap> blank_maps(const QuantizedStack& q, const KernelConfig& cfg, const MapPlan& plan) {
    const Rect valid = valid_rect(q.width(), q.height(), cfg.window);
    std::vector<FeatureMap> maps;
    for (const auto& name : plan.names) {
        FeatureMap m{Grid<double>(q.width(), q.height(), kNaN),
                     Grid<std::uint8_t>(q.width(), q.height(), 0), cfg, name};
        m.config.feature = name;
        for (int r = valid.row0; r < valid.row1; ++r) {
            for (int c = valid.col0; c < valid.col1; ++c) m.valid(r, c) = 1;
        }
        maps.push_back(std::move(m));
    }
    return maps;
}

}  // namespace

std::vector<FeatureMap> compute_maps(const QuantizedStack& q, const KernelConfig& cfg,
                                     std::vector<std::string> features, ParallelOptions par) {
    const MapPlan plan = plan_maps(q, cfg, std::move(features));
    std::vector<FeatureMap> maps = blank_maps(q, cfg, plan);
    const Rect valid = valid_rect(q.width(), q.height(), cfg.window);
    const int threads = par.threads > 0 ? par.threads : omp_get_max_threads();

    std::exception_ptr failure;
#pragma omp parallel num_threads(threads)
    {
        std::unique_ptr<detail::WindowEvaluator> eval;
        try {
            eval = detail::make_fast_evaluator(q, cfg, plan.need_mi);
        } catch (...) {
#pragma omp critical(mprad_map_failure)
            if (!failure) failure = std::current_exception();
        }
        std::vector<double> out(plan.family_size);
#pragma omp for schedule(dynamic, 1)
        for (int r = valid.row0; r < valid.row1; ++r) {
            if (!eval) continue;
            try {
                for (int c = valid.col0; c < valid.col1; ++c) {
                    eval->evaluate(r, c, out);
                    for (std::size_t i = 0; i < maps.size(); ++i) maps[i].values(r, c) = out[plan.slots[i]];
                }
            } catch (...) {
#pragma omp critical(mprad_map_failure)
                if (!failure) failure = std::current_exception();
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
    return maps;
}

FeatureMap compute_map(const QuantizedStack& q, const KernelConfig& cfg, ParallelOptions par) {
    if (cfg.feature == "all") {
        throw Error(Errc::invalid_argument, "compute_map takes one feature; use compute_maps for \"all\"");
    }
    return std::move(compute_maps(q, cfg, {cfg.feature}, par).front());
}

std::vector<FeatureMap> compute_maps_reference(const QuantizedStack& q, const KernelConfig& cfg,
                                               std::vector<std::string> features) {
    const MapPlan plan = plan_maps(q, cfg, std::move(features));
    std::vector<FeatureMap> maps = blank_maps(q, cfg, plan);
    const Rect valid = valid_rect(q.width(), q.height(), cfg.window);
    auto eval = detail::make_reference_evaluator(q, cfg, plan.need_mi);
    std::vector<double> out(plan.family_size);
    for (int r = valid.row0; r < valid.row1; ++r) {
        for (int c = valid.col0; c < valid.col1; ++c) {
            eval->evaluate(r, c, out);
            for (std::size_t i = 0; i < maps.size(); ++i) maps[i].values(r, c) = out[plan.slots[i]];
        }
    }
    return maps;
}

FeatureMap compute_map_reference(const QuantizedStack& q, const KernelConfig& cfg) {
    if (cfg.feature == "all") {
        throw Error(Errc::invalid_argument, "compute_map takes one feature; use compute_maps for \"all\"");
    }
    return std::move(compute_maps_reference(q, cfg, {cfg.feature}).front());
}

// ---------------------------------------------------------------------------
// Summaries

double summary_statistic(std::vector<double>& values, SummaryStat stat) {
    if (values.empty()) throw Error(Errc::empty_region, "summary of an empty sample");
    const auto n = static_cast<double>(values.size());
    switch (stat) {
        case SummaryStat::mean: {
            double s = 0.0;
            for (double v : values) s += v;
            return s / n;
        }
        case SummaryStat::median: {
            std::sort(values.begin(), values.end());
            const std::size_t k = values.size();
            return k % 2 == 1 ? values[k / 2] : 0.5 * (values[k / 2 - 1] + values[k / 2]);
        }
        case SummaryStat::std: {
            double s = 0.0;
            for (double v : values) s += v;
            const double mean = s / n;
            double ss = 0.0;
            for (double v : values) ss += (v - mean) * (v - mean);
            return std::sqrt(ss / n);
        }
        case SummaryStat::min: return *std::min_element(values.begin(), values.end());
        case SummaryStat::max: return *std::max_element(values.begin(), values.end());
    }
    return kNaN;
}

double summarize(const FeatureMap& map, const RoiMask& mask, int label, SummaryStat stat) {
    if (!mask.labels().same_shape(map.width(), map.height())) {
        throw Error(Errc::dimension_mismatch, "mask and feature map differ in shape");
    }
    std::vector<double> values;
    for (int r = 0; r < map.height(); ++r) {
        for (int c = 0; c < map.width(); ++c) {
            if (map.valid(r, c) && mask.labels()(r, c) == label) values.push_back(map.values(r, c));
        }
    }
    if (values.empty()) {
        throw Error(Errc::empty_region,
                    "label " + std::to_string(label) + " has no valid voxel in the feature map");
    }
    return summary_statistic(values, stat);
}

// ---------------------------------------------------------------------------
// Export

std::string map_to_csv(const FeatureMap& map) {
    std::string out;
    out.reserve(static_cast<std::size_t>(map.width()) * static_cast<std::size_t>(map.height()) * 12);
    char buf[32];
    for (int r = 0; r < map.height(); ++r) {
        for (int c = 0; c < map.width(); ++c) {
            if (c) out += ',';
            if (map.valid(r, c)) {
                std::snprintf(buf, sizeof buf, "%.17g", map.values(r, c));
                out += buf;
            } else {
                out += "NaN";
            }
        }
        out += '\n';
    }
    return out;
}

Grid<std::uint16_t> map_to_gray8(const FeatureMap& map) {
    Grid<std::uint16_t> img(map.width(), map.height(), 0);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int r = 0; r < map.height(); ++r) {
        for (int c = 0; c < map.width(); ++c) {
            if (!map.valid(r, c)) continue;
            lo = std::min(lo, map.values(r, c));
            hi = std::max(hi, map.values(r, c));
        }
    }
    if (!(hi > lo)) return img;
    for (int r = 0; r < map.height(); ++r) {
        for (int c = 0; c < map.width(); ++c) {
            if (!map.valid(r, c)) continue;
            const double t = (map.values(r, c) - lo) / (hi - lo);
            img(r, c) = static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
        }
    }
    return img;
}

void export_map(const FeatureMap& map, const std::filesystem::path& path, MapRender render) {
    switch (render) {
        case MapRender::raw_csv: io::write_file_atomic(path, map_to_csv(map)); break;
        case MapRender::normalized_png: io::write_png(path, {map_to_gray8(map), 8}); break;
    }
}

}  // namespace mprad
