#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mprad/featuremap.hpp"
#include "mprad/region.hpp"
#include "mprad/stack.hpp"

namespace mprad::phantom {

enum class ShapeKind { rectangle, disk, wedge, remainder };

/// Region footprint. `remainder` claims every pixel no other shape covers.
/// A wedge is the angular sector [angle0, angle1) degrees around `center`
/// (counter-clockwise from +column, rows growing downward) with radius
/// >= `radius`; a disk is radius < `radius` around `center`.
struct Shape {
    ShapeKind kind = ShapeKind::remainder;
    Rect rect{};
    double center_row = 0.0;
    double center_col = 0.0;
    double radius = 0.0;
    double angle0 = 0.0;
    double angle1 = 360.0;

    static Shape rectangle(Rect r);
    static Shape disk(double row, double col, double radius);
    static Shape wedge(double row, double col, double inner_radius, double angle0, double angle1);
    static Shape remainder();

    bool covers(int row, int col) const;
};

enum class TextureKind { constant, checkerboard, sinusoid, correlated_noise, uniform_noise };

/// Intensity pattern in 8-bit units. Noise textures draw from the stream
/// `stream`; two textures with the same stream see the same field, which is
/// how channels are made to share or not share structure.
struct Texture {
    TextureKind kind = TextureKind::constant;
    double base = 128.0;
    double amplitude = 64.0;
    int period = 8;            // checkerboard cell size, pixels
    double frequency = 0.1;    // sinusoid cycles per pixel
    double angle = 0.0;        // sinusoid direction, degrees
    double corr_length = 2.0;  // correlated noise Gaussian sigma, pixels
    int noise_levels = 0;      // uniform noise: 0 = continuous, else K equispaced values
    std::uint64_t stream = 0;
    int shift_row = 0;         // the pattern is read at (row + shift_row,
    int shift_col = 0;         // col + shift_col), wrapping around the frame

    static Texture constant(double level);
    static Texture checkerboard(int period, double base, double amplitude);
    static Texture sinusoid(double frequency, double angle, double base, double amplitude);
    static Texture correlated_noise(double corr_length, double base, double amplitude, std::uint64_t stream);
    static Texture uniform_noise(double base, double amplitude, std::uint64_t stream, int levels = 0);

    Texture shifted(int rows, int cols) const;
};

struct PhantomRegion {
    std::string name;
    Shape shape;
    std::vector<Texture> textures;  // one per channel
};

struct PhantomSpec {
    int size = 256;
    std::uint64_t seed = 0;
    int channels = 1;
    std::vector<PhantomRegion> regions;  // region i gets label i+1
};

struct Phantom {
    MultiParametricStack stack;
    RoiMask truth;
};

/// Pure function of the spec. Throws Errc::invalid_argument for overlapping
/// or uncovered layouts, regions smaller than 16x16 pixels, or a texture
/// count that does not match the channel count.
Phantom generate(const PhantomSpec& spec);

/// Named layouts:
///   constant     one region, constant intensity in every channel
///   two-texture  left/right halves with different textures in both channels
///   adversarial  two channels whose per-region marginals match but whose
///                joint structure differs between the halves
///   mosaic       disk + wedge + remainder with distinct textures
PhantomSpec preset(std::string_view name, int size, std::uint64_t seed);
std::vector<std::string_view> preset_names();

/// Counter-based 64-bit generator (SplitMix64 finaliser over seed, stream
/// and counter). Platform independent.
std::uint64_t counter_random(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept;
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept;

enum class SegmentationMethod { threshold, kmeans };

SegmentationMethod segmentation_method_from_string(std::string_view s);

/// Pixel accuracy of clustering `map` into as many groups as `truth` has
/// labels, after the best cluster-to-label matching. Evaluated on valid map
/// pixels with a non-zero truth label. `threshold` (Otsu) needs exactly two
/// labels. Throws Errc::degenerate for a constant map, Errc::invalid_argument
/// for fewer than two labels or when the map is valid over less than 90% of
/// the label interiors.
double score_segmentation(const FeatureMap& map, const RoiMask& truth, SegmentationMethod method);

/// Cluster index per valid pixel (-1 elsewhere), clusters ordered by centre.
Grid<int> cluster_map(const FeatureMap& map, const RoiMask& truth, SegmentationMethod method, int clusters);

}  // namespace mprad::phantom
