#include "mprad/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "mprad/error.hpp"

namespace mprad::phantom {

// ---------------------------------------------------------------------------
// Random numbers

std::uint64_t counter_random(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept {
    std::uint64_t z = seed * 0x9E3779B97F4A7C15ULL + stream * 0xD1B54A32D192ED03ULL +
                      counter * 0x8CB92BA72F3D8DD7ULL + 0x632BE59BD9B4E019ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    z ^= z >> 31;
    // second round decorrelates neighbouring counters further
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) noexcept {
    return static_cast<double>(counter_random(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// ---------------------------------------------------------------------------
// Shapes and textures

Shape Shape::rectangle(Rect r) {
    Shape s;
    s.kind = ShapeKind::rectangle;
    s.rect = r;
    return s;
}

Shape Shape::disk(double row, double col, double radius) {
    Shape s;
    s.kind = ShapeKind::disk;
    s.center_row = row;
    s.center_col = col;
    s.radius = radius;
    return s;
}

Shape Shape::wedge(double row, double col, double inner_radius, double angle0, double angle1) {
    Shape s;
    s.kind = ShapeKind::wedge;
    s.center_row = row;
    s.center_col = col;
    s.radius = inner_radius;
    s.angle0 = angle0;
    s.angle1 = angle1;
    return s;
}

Shape Shape::remainder() { return Shape{}; }

bool Shape::covers(int row, int col) const {
    switch (kind) {
        case ShapeKind::rectangle: return rect.contains(row, col);
        case ShapeKind::disk: {
            const double dr = row - center_row;
            const double dc = col - center_col;
            return dr * dr + dc * dc < radius * radius;
        }
        case ShapeKind::wedge: {
            const double dr = row - center_row;
            const double dc = col - center_col;
            if (dr * dr + dc * dc < radius * radius) return false;
            double a = std::atan2(-dr, dc) * 180.0 / std::numbers::pi;
            if (a < 0.0) a += 360.0;
            return (a >= angle0 && a < angle1) || (a + 360.0 >= angle0 && a + 360.0 < angle1);
        }
        case ShapeKind::remainder: return false;
    }
    return false;
}

Texture Texture::constant(double level) {
    Texture t;
    t.kind = TextureKind::constant;
    t.base = level;
    t.amplitude = 0.0;
    return t;
}

Texture Texture::checkerboard(int period, double base, double amplitude) {
    Texture t;
    t.kind = TextureKind::checkerboard;
    t.period = period;
    t.base = base;
    t.amplitude = amplitude;
    return t;
}

Texture Texture::sinusoid(double frequency, double angle, double base, double amplitude) {
    Texture t;
    t.kind = TextureKind::sinusoid;
    t.frequency = frequency;
    t.angle = angle;
    t.base = base;
    t.amplitude = amplitude;
    return t;
}

Texture Texture::correlated_noise(double corr_length, double base, double amplitude, std::uint64_t stream) {
    Texture t;
    t.kind = TextureKind::correlated_noise;
    t.corr_length = corr_length;
    t.base = base;
    t.amplitude = amplitude;
    t.stream = stream;
    return t;
}

Texture Texture::uniform_noise(double base, double amplitude, std::uint64_t stream, int levels) {
    Texture t;
    t.kind = TextureKind::uniform_noise;
    t.base = base;
    t.amplitude = amplitude;
    t.stream = stream;
    t.noise_levels = levels;
    return t;
}

Texture Texture::shifted(int rows, int cols) const {
    Texture t = *this;
    t.shift_row = rows;
    t.shift_col = cols;
    return t;
}

namespace {

// Gaussian-smoothed white noise over the whole frame, standardized to zero
// mean and unit variance. Edges clamp.
Grid<double> smooth_noise(int size, std::uint64_t seed, std::uint64_t stream, double sigma) {
    Grid<double> white(size, size);
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            white(r, c) = counter_uniform(seed, stream, static_cast<std::uint64_t>(r) * size + c) - 0.5;
        }
    }
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double ksum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = sigma > 0.0 ? std::exp(-0.5 * i * i / (sigma * sigma)) : (i == 0 ? 1.0 : 0.0);
        kernel[static_cast<std::size_t>(i + radius)] = w;
        ksum += w;
    }
    for (double& w : kernel) w /= ksum;

    auto clampi = [size](int v) { return std::clamp(v, 0, size - 1); };
    Grid<double> tmp(size, size), out(size, size);
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) s += kernel[static_cast<std::size_t>(i + radius)] * white(r, clampi(c + i));
            tmp(r, c) = s;
        }
    }
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            double s = 0.0;
            for (int i = -radius; i <= radius; ++i) s += kernel[static_cast<std::size_t>(i + radius)] * tmp(clampi(r + i), c);
            out(r, c) = s;
        }
    }
    double mean = 0.0;
    for (double v : out.values()) mean += v;
    mean /= static_cast<double>(out.size());
    double var = 0.0;
    for (double v : out.values()) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(out.size()));
    for (double& v : out.values()) v = sd > 0.0 ? (v - mean) / sd : 0.0;
    return out;
}

class TextureSampler {
public:
    TextureSampler(int size, std::uint64_t seed) : size_(size), seed_(seed) {}

    double sample(const Texture& t, int row, int col) {
        const int r = wrap(row + t.shift_row);
        const int c = wrap(col + t.shift_col);
        switch (t.kind) {
            case TextureKind::constant: return t.base;
            case TextureKind::checkerboard: {
                const int p = std::max(1, t.period);
                return ((r / p + c / p) % 2 == 0) ? t.base - t.amplitude : t.base + t.amplitude;
            }
            case TextureKind::sinusoid: {
                const double a = t.angle * std::numbers::pi / 180.0;
                const double phase = 2.0 * std::numbers::pi * t.frequency * (c * std::cos(a) - r * std::sin(a));
                return t.base + t.amplitude * std::sin(phase);
            }
            case TextureKind::correlated_noise: {
                const Grid<double>& field = smooth(t.stream, t.corr_length);
                return t.base + t.amplitude * std::clamp(field(r, c) / 2.5, -1.0, 1.0);
            }
            case TextureKind::uniform_noise: {
                const auto counter = static_cast<std::uint64_t>(r) * static_cast<std::uint64_t>(size_) +
                                     static_cast<std::uint64_t>(c);
                if (t.noise_levels >= 2) {
                    const std::uint64_t k = counter_random(seed_, t.stream, counter) %
                                            static_cast<std::uint64_t>(t.noise_levels);
                    return t.base + t.amplitude * (2.0 * static_cast<double>(k) / (t.noise_levels - 1) - 1.0);
                }
                return t.base + t.amplitude * (2.0 * counter_uniform(seed_, t.stream, counter) - 1.0);
            }
        }
        return t.base;
    }

private:
    int wrap(int v) const { return ((v % size_) + size_) % size_; }

    const Grid<double>& smooth(std::uint64_t stream, double sigma) {
        const auto key = std::make_pair(stream, sigma);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, smooth_noise(size_, seed_, stream, sigma)).first;
        return it->second;
    }

    int size_;
    std::uint64_t seed_;
    std::map<std::pair<std::uint64_t, double>, Grid<double>> cache_;
};

}  // namespace

Phantom generate(const PhantomSpec& spec) {
    if (spec.size < 16) throw Error(Errc::invalid_argument, "phantom size must be >= 16");
    if (spec.channels < 1) throw Error(Errc::invalid_argument, "phantom needs at least one channel");
    if (spec.regions.empty()) throw Error(Errc::invalid_argument, "phantom needs at least one region");
    const int n = spec.size;

    int remainder_label = 0;
    for (std::size_t i = 0; i < spec.regions.size(); ++i) {
        const auto& reg = spec.regions[i];
        if (static_cast<int>(reg.textures.size()) != spec.channels) {
            throw Error(Errc::invalid_argument, "region \"" + reg.name + "\" has " +
                                                    std::to_string(reg.textures.size()) +
                                                    " textures for " + std::to_string(spec.channels) +
                                                    " channels");
        }
        if (reg.shape.kind == ShapeKind::remainder) {
            if (remainder_label != 0) throw Error(Errc::invalid_argument, "at most one remainder region");
            remainder_label = static_cast<int>(i) + 1;
        }
    }

    Grid<int> labels(n, n, 0);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            for (std::size_t i = 0; i < spec.regions.size(); ++i) {
                if (!spec.regions[i].shape.covers(r, c)) continue;
                if (labels(r, c) != 0) {
                    throw Error(Errc::invalid_argument,
                                "regions \"" + spec.regions[static_cast<std::size_t>(labels(r, c) - 1)].name +
                                    "\" and \"" + spec.regions[i].name + "\" overlap at (" +
                                    std::to_string(r) + ", " + std::to_string(c) + ")");
                }
                labels(r, c) = static_cast<int>(i) + 1;
            }
            if (labels(r, c) == 0) {
                if (remainder_label == 0) {
                    throw Error(Errc::invalid_argument, "layout leaves pixel (" + std::to_string(r) + ", " +
                                                            std::to_string(c) + ") uncovered");
                }
                labels(r, c) = remainder_label;
            }
        }
    }
    std::vector<long long> area(spec.regions.size() + 1, 0);
    for (int v : labels.values()) ++area[static_cast<std::size_t>(v)];
    for (std::size_t i = 0; i < spec.regions.size(); ++i) {
        if (area[i + 1] < 16 * 16) {
            throw Error(Errc::invalid_argument, "region \"" + spec.regions[i].name + "\" covers " +
                                                    std::to_string(area[i + 1]) +
                                                    " pixels, fewer than 16x16");
        }
    }

    TextureSampler sampler(n, spec.seed);
    std::vector<Grid<double>> channels;
    std::vector<std::string> names;
    for (int k = 0; k < spec.channels; ++k) {
        Grid<double> ch(n, n);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                const auto& tex = spec.regions[static_cast<std::size_t>(labels(r, c) - 1)].textures[static_cast<std::size_t>(k)];
                ch(r, c) = std::clamp(std::round(sampler.sample(tex, r, c)), 0.0, 255.0);
            }
        }
        channels.push_back(std::move(ch));
        names.push_back("ch" + std::to_string(k + 1));
    }
    std::map<int, std::string> label_names;
    for (std::size_t i = 0; i < spec.regions.size(); ++i) label_names[static_cast<int>(i) + 1] = spec.regions[i].name;
    return {MultiParametricStack(std::move(channels), std::move(names)), RoiMask(std::move(labels), std::move(label_names))};
}

std::vector<std::string_view> preset_names() { return {"constant", "two-texture", "adversarial", "mosaic"}; }

PhantomSpec preset(std::string_view name, int size, std::uint64_t seed) {
    PhantomSpec spec;
    spec.size = size;
    spec.seed = seed;
    const int half = size / 2;
    const Rect left{0, 0, size, half};
    const Rect right{0, half, size, size};
    if (name == "constant") {
        spec.channels = 2;
        spec.regions.push_back({"background", Shape::remainder(), {Texture::constant(100), Texture::constant(100)}});
    } else if (name == "two-texture") {
        spec.channels = 2;
        spec.regions.push_back({"noise", Shape::rectangle(left),
                                {Texture::uniform_noise(128, 100, 1), Texture::correlated_noise(1.0, 128, 100, 2)}});
        spec.regions.push_back({"periodic", Shape::rectangle(right),
                                {Texture::sinusoid(1.0 / 16.0, 30.0, 128, 100), Texture::checkerboard(4, 128, 60)}});
    } else if (name == "adversarial") {
        // Both halves show the left half's 8-level noise field in both
        // channels, so per-region marginals are identical. On the left the
        // channels coincide; on the right channel 2 reads the field with a
        // cyclic row shift, which decouples it from channel 1.
        spec.channels = 2;
        const Texture field = Texture::uniform_noise(128, 112, 1, 8);
        spec.regions.push_back({"coupled", Shape::rectangle(left), {field, field}});
        spec.regions.push_back({"independent", Shape::rectangle(right),
                                {field.shifted(0, -half), field.shifted(size / 2 + 1, -half)}});
    } else if (name == "mosaic") {
        spec.channels = 2;
        const double mid = (size - 1) / 2.0;
        spec.regions.push_back({"background", Shape::remainder(),
                                {Texture::correlated_noise(2.0, 128, 90, 1), Texture::uniform_noise(100, 60, 2)}});
        spec.regions.push_back({"disk", Shape::disk(mid, mid, size / 6.0),
                                {Texture::checkerboard(4, 128, 80), Texture::constant(200)}});
        spec.regions.push_back({"wedge", Shape::wedge(mid, mid, size / 6.0, 20.0, 110.0),
                                {Texture::sinusoid(1.0 / 12.0, 0.0, 128, 90), Texture::correlated_noise(4.0, 60, 50, 3)}});
    } else {
        throw Error(Errc::invalid_argument, "unknown phantom preset \"" + std::string(name) + "\"");
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Segmentation scoring

SegmentationMethod segmentation_method_from_string(std::string_view s) {
    if (s == "threshold" || s == "otsu") return SegmentationMethod::threshold;
    if (s == "kmeans") return SegmentationMethod::kmeans;
    throw Error(Errc::invalid_argument, "unknown segmentation method \"" + std::string(s) + "\"");
}

namespace {

double otsu_threshold(const std::vector<double>& values, double lo, double hi) {
    constexpr int bins = 256;
    std::vector<double> hist(bins, 0.0);
    const double scale = bins / (hi - lo);
    for (double v : values) hist[static_cast<std::size_t>(std::clamp(static_cast<int>((v - lo) * scale), 0, bins - 1))] += 1.0;
    const auto n = static_cast<double>(values.size());
    double total_mass = 0.0;
    for (int i = 0; i < bins; ++i) total_mass += i * hist[static_cast<std::size_t>(i)];
    double w0 = 0.0, m0 = 0.0, best = -1.0;
    int best_i = 0;
    for (int i = 0; i < bins - 1; ++i) {
        w0 += hist[static_cast<std::size_t>(i)];
        m0 += i * hist[static_cast<std::size_t>(i)];
        const double w1 = n - w0;
        if (w0 == 0.0 || w1 == 0.0) continue;
        const double mu0 = m0 / w0;
        const double mu1 = (total_mass - m0) / w1;
        const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (between > best) {
            best = between;
            best_i = i;
        }
    }
    return lo + (best_i + 1) / scale;
}

std::vector<double> kmeans_centres(std::vector<double> values, int k) {
    std::sort(values.begin(), values.end());
    std::vector<double> centres(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const auto idx = static_cast<std::size_t>((i + 0.5) / k * static_cast<double>(values.size()));
        centres[static_cast<std::size_t>(i)] = values[std::min(idx, values.size() - 1)];
    }
    std::vector<double> sum(static_cast<std::size_t>(k));
    std::vector<long long> count(static_cast<std::size_t>(k));
    for (int iter = 0; iter < 100; ++iter) {
        std::fill(sum.begin(), sum.end(), 0.0);
        std::fill(count.begin(), count.end(), 0);
        // values are sorted and clusters are intervals: boundaries are midpoints
        std::size_t j = 0;
        for (double v : values) {
            while (j + 1 < centres.size() && v > 0.5 * (centres[j] + centres[j + 1])) ++j;
            sum[j] += v;
            ++count[j];
        }
        bool moved = false;
        for (std::size_t i = 0; i < centres.size(); ++i) {
            if (count[i] == 0) continue;
            const double c = sum[i] / static_cast<double>(count[i]);
            if (c != centres[i]) moved = true;
            centres[i] = c;
        }
        std::sort(centres.begin(), centres.end());
        if (!moved) break;
    }
    return centres;
}

int nearest(const std::vector<double>& centres, double v) {
    int best = 0;
    for (std::size_t i = 1; i < centres.size(); ++i) {
        if (std::abs(v - centres[i]) < std::abs(v - centres[static_cast<std::size_t>(best)])) best = static_cast<int>(i);
    }
    return best;
}

}  // namespace

Grid<int> cluster_map(const FeatureMap& map, const RoiMask& truth, SegmentationMethod method, int clusters) {
    if (!truth.labels().same_shape(map.width(), map.height())) {
        throw Error(Errc::dimension_mismatch, "truth mask and feature map differ in shape");
    }
    if (clusters < 2) throw Error(Errc::invalid_argument, "need at least two clusters");
    if (method == SegmentationMethod::threshold && clusters != 2) {
        throw Error(Errc::invalid_argument, "threshold segmentation handles exactly two labels");
    }
    std::vector<double> values;
    for (int r = 0; r < map.height(); ++r) {
        for (int c = 0; c < map.width(); ++c) {
            if (map.valid(r, c) && truth.labels()(r, c) != 0) values.push_back(map.values(r, c));
        }
    }
    if (values.empty()) throw Error(Errc::empty_region, "no valid labelled pixel to cluster");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) throw Error(Errc::degenerate, "feature map is constant over the labelled pixels");

    Grid<int> out(map.width(), map.height(), -1);
    if (method == SegmentationMethod::threshold) {
        const double t = otsu_threshold(values, lo, hi);
        for (int r = 0; r < map.height(); ++r) {
            for (int c = 0; c < map.width(); ++c) {
                if (map.valid(r, c) && truth.labels()(r, c) != 0) out(r, c) = map.values(r, c) < t ? 0 : 1;
            }
        }
        return out;
    }
    const auto centres = kmeans_centres(std::move(values), clusters);
    for (int r = 0; r < map.height(); ++r) {
        for (int c = 0; c < map.width(); ++c) {
            if (map.valid(r, c) && truth.labels()(r, c) != 0) out(r, c) = nearest(centres, map.values(r, c));
        }
    }
    return out;
}

double score_segmentation(const FeatureMap& map, const RoiMask& truth, SegmentationMethod method) {
    const auto labels = truth.present_labels();
    const int k = static_cast<int>(labels.size());
    if (k < 2) throw Error(Errc::invalid_argument, "segmentation scoring needs at least two truth labels");
    if (k > 8) throw Error(Errc::invalid_argument, "segmentation scoring supports at most 8 labels");
    if (!truth.labels().same_shape(map.width(), map.height())) {
        throw Error(Errc::dimension_mismatch, "truth mask and feature map differ in shape");
    }

    // Interior pixels: the whole window lies inside one label.
    const int half = map.config.window / 2;
    long long interior = 0, interior_valid = 0;
    for (int r = half; r + half < map.height(); ++r) {
        for (int c = half; c + half < map.width(); ++c) {
            const int l = truth.labels()(r, c);
            if (l == 0) continue;
            bool inside = true;
            for (int dr = -half; dr <= half && inside; ++dr) {
                for (int dc = -half; dc <= half; ++dc) {
                    if (truth.labels()(r + dr, c + dc) != l) {
                        inside = false;
                        break;
                    }
                }
            }
            if (!inside) continue;
            ++interior;
            if (map.valid(r, c)) ++interior_valid;
        }
    }
    if (interior == 0 || static_cast<double>(interior_valid) < 0.9 * static_cast<double>(interior)) {
        throw Error(Errc::invalid_argument, "feature map is valid over " + std::to_string(interior_valid) +
                                                " of " + std::to_string(interior) +
                                                " interior pixels, below 90%");
    }

    const Grid<int> clusters = cluster_map(map, truth, method, k);
    // confusion[cluster][label index]
    std::vector<std::vector<long long>> confusion(static_cast<std::size_t>(k), std::vector<long long>(static_cast<std::size_t>(k), 0));
    long long total = 0;
    for (int r = 0; r < map.height(); ++r) {
        for (int c = 0; c < map.width(); ++c) {
            const int cl = clusters(r, c);
            if (cl < 0) continue;
            const auto li = std::lower_bound(labels.begin(), labels.end(), truth.labels()(r, c)) - labels.begin();
            ++confusion[static_cast<std::size_t>(cl)][static_cast<std::size_t>(li)];
            ++total;
        }
    }
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
    long long best = 0;
    do {
        long long hit = 0;
        for (int i = 0; i < k; ++i) hit += confusion[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
        best = std::max(best, hit);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(total);
}

}  // namespace mprad::phantom
