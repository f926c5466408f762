#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mprad/cooccur.hpp"
#include "mprad/grid.hpp"
#include "mprad/region.hpp"
#include "mprad/stack.hpp"

namespace mprad {

enum class Family { fos, glcm, tspm, tscm, tscin, tsrm };
enum class SummaryStat { mean, median, std, min, max };

std::string_view to_string(Family f);
std::string_view to_string(SummaryStat s);
Family family_from_string(std::string_view s);
SummaryStat summary_from_string(std::string_view s);

/// Features a family produces, in output order.
std::vector<std::string_view> family_feature_names(Family f);

/// Sliding-window feature definition.
///
/// `channel` selects the image for the single-channel families (fos, glcm).
/// `channel_subset` restricts tspm/tscm to some channels (empty = all).
/// `channel_distance` is the cross-channel lag for tsrm. Co-occurrence
/// families average their features over `offsets`.
struct KernelConfig {
    int window = 15;
    int levels = 256;
    std::vector<Offset> offsets = all_angles(1);
    Family family = Family::tspm;
    std::string feature = "entropy";
    int channel = 0;
    std::vector<int> channel_subset;
    int channel_distance = 1;
    SummaryStat summary = SummaryStat::mean;

    /// Structural checks that do not depend on the image.
    void validate() const;
    /// Everything in validate() plus checks against a quantized stack.
    void validate_for(const QuantizedStack& q) const;
};

struct KernelPreset {
    std::string_view name;
    int window;
    int levels;
};

/// usc 15x15/256, breast 5x5/128, stroke 3x3/32.
const std::vector<KernelPreset>& kernel_presets();
KernelConfig preset_config(std::string_view name);

/// Per-voxel scalar field; `valid` is 1 where the whole window fits inside the image.
struct FeatureMap {
    Grid<double> values;
    Grid<std::uint8_t> valid;
    KernelConfig config;
    std::string feature;

    int width() const noexcept { return values.width(); }
    int height() const noexcept { return values.height(); }
    long long valid_count() const;
};

/// Centered rectangle of voxels whose window lies inside a width x height image.
Rect valid_rect(int width, int height, int window);

struct ParallelOptions {
    int threads = 0;  // 0: OpenMP default
};

/// Parallel over output rows. `cfg.feature` may be a single name; use
/// compute_maps for several features from one pass.
FeatureMap compute_map(const QuantizedStack& q, const KernelConfig& cfg, ParallelOptions par = {});

/// One map per requested name ("all" expands to every feature the family
/// can produce for this stack).
std::vector<FeatureMap> compute_maps(const QuantizedStack& q, const KernelConfig& cfg,
                                     std::vector<std::string> features, ParallelOptions par = {});

/// Serial reference built directly on the public per-window builders. Slow;
/// kept as the correctness baseline for the parallel kernels.
FeatureMap compute_map_reference(const QuantizedStack& q, const KernelConfig& cfg);
std::vector<FeatureMap> compute_maps_reference(const QuantizedStack& q, const KernelConfig& cfg,
                                               std::vector<std::string> features);

/// Expand "all" and validate names for this configuration.
std::vector<std::string> resolve_features(const QuantizedStack& q, const KernelConfig& cfg,
                                          std::vector<std::string> features);

/// Statistic over valid voxels carrying `label`. Throws Errc::empty_region
/// when the ROI and the validity mask do not intersect.
double summarize(const FeatureMap& map, const RoiMask& mask, int label, SummaryStat stat);

/// Statistic of a sample (population standard deviation). Reorders `values`.
double summary_statistic(std::vector<double>& values, SummaryStat stat);

enum class MapRender { raw_csv, normalized_png };

/// height rows of width comma-separated values; NaN marks invalid voxels.
std::string map_to_csv(const FeatureMap& map);

/// Valid values rescaled linearly to 0..255; invalid voxels are 0.
Grid<std::uint16_t> map_to_gray8(const FeatureMap& map);

void export_map(const FeatureMap& map, const std::filesystem::path& path, MapRender render);

}  // namespace mprad
