#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "mprad/featuremap.hpp"
#include "mprad/io.hpp"
#include "mprad/tspm.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mprad;

namespace {

KernelConfig config(Family family, std::string feature, int window, int levels) {
    KernelConfig cfg;
    cfg.family = family;
    cfg.feature = std::move(feature);
    cfg.window = window;
    cfg.levels = levels;
    return cfg;
}

bool bit_equal(const FeatureMap& a, const FeatureMap& b) {
    if (!(a.valid == b.valid) || a.values.size() != b.values.size()) return false;
    return std::memcmp(a.values.values().data(), b.values.values().data(), a.values.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("presets mirror the published regimes") {
    CHECK(preset_config("usc").window == 15);
    CHECK(preset_config("usc").levels == 256);
    CHECK(preset_config("breast").window == 5);
    CHECK(preset_config("breast").levels == 128);
    CHECK(preset_config("stroke").window == 3);
    CHECK(preset_config("stroke").levels == 32);
    CHECK_THROWS_AS(preset_config("brain"), Error);
}

TEST_CASE("config validation") {
    CHECK_ERRC(config(Family::tspm, "entropy", 4, 8).validate(), Errc::invalid_argument);
    CHECK_ERRC(config(Family::tspm, "entropy", 1, 8).validate(), Errc::invalid_argument);
    CHECK_ERRC(config(Family::tspm, "contrast", 3, 8).validate(), Errc::invalid_argument);
    auto cfg = config(Family::glcm, "contrast", 3, 8);
    cfg.offsets = {{3, 0}};
    CHECK_ERRC(cfg.validate(), Errc::invalid_argument);

    std::mt19937_64 rng(40);
    const auto q = oracle::random_stack(rng, 6, 6, 2, 8);
    CHECK_ERRC(compute_map(q, config(Family::tspm, "entropy", 7, 8)), Errc::invalid_argument);
    CHECK_ERRC(compute_map(q, config(Family::tspm, "entropy", 3, 16)), Errc::invalid_argument);
    auto tsrm = config(Family::tsrm, "entropy", 3, 8);
    tsrm.channel_distance = 2;
    CHECK_ERRC(compute_map(q, tsrm), Errc::out_of_range);
    CHECK_THROWS_AS(compute_map(q, config(Family::tspm, "all", 3, 8)), Error);
}

TEST_CASE("feature names resolve per family") {
    std::mt19937_64 rng(41);
    const auto q1 = oracle::random_stack(rng, 5, 5, 1, 4);
    const auto q2 = oracle::random_stack(rng, 5, 5, 2, 4);
    CHECK(resolve_features(q1, config(Family::tspm, "entropy", 3, 4), {"all"}).size() == 2);
    CHECK(resolve_features(q2, config(Family::tspm, "entropy", 3, 4), {"all"}).size() == 3);
    CHECK(resolve_features(q2, config(Family::tscm, "entropy", 3, 4), {"all"}).size() == 22);
    CHECK(resolve_features(q2, config(Family::tscin, "std", 3, 4), {"all"}).size() == 11);
    CHECK_THROWS_AS(resolve_features(q1, config(Family::tspm, "entropy", 3, 4), {"mi"}), Error);
}

TEST_CASE("validity is the centered rectangle inset by window/2") {
    std::mt19937_64 rng(42);
    const auto q = oracle::random_stack(rng, 9, 7, 2, 4);
    const auto m = compute_map(q, config(Family::tspm, "entropy", 5, 4));
    for (int r = 0; r < 7; ++r) {
        for (int c = 0; c < 9; ++c) {
            const bool inside = r >= 2 && r < 5 && c >= 2 && c < 7;
            CHECK(static_cast<bool>(m.valid(r, c)) == inside);
            CHECK(std::isnan(m.values(r, c)) == !inside);
        }
    }
    CHECK(m.valid_count() == 15);
}

TEST_CASE("constant stack gives zero entropy maps") {
    const MultiParametricStack s({Grid<double>(8, 8, 3.0), Grid<double>(8, 8, 9.0)}, {});
    const auto q = quantize(s, 8);
    for (Family f : {Family::tspm, Family::tscm, Family::glcm, Family::fos, Family::tscin, Family::tsrm}) {
        const auto m = compute_map(q, config(f, "entropy", 3, 8));
        for (int r = 1; r < 7; ++r) {
            for (int c = 1; c < 7; ++c) CHECK(m.values(r, c) == 0.0);
        }
    }
}

TEST_CASE("N=1: TSCM maps equal GLCM maps and TSCIN std is zero") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const auto q = oracle::random_stack(rng, 10, 9, 1, 8);
        for (const char* feature : {"entropy", "contrast", "correlation", "imc2"}) {
            const auto a = compute_map(q, config(Family::tscm, feature, 3 + 2 * (trial % 3), 8));
            const auto b = compute_map(q, config(Family::glcm, feature, 3 + 2 * (trial % 3), 8));
            CHECK(bit_equal(a, b));
        }
        const auto s = compute_map(q, config(Family::tscin, "std", 3, 8));
        for (int r = 1; r < 8; ++r) {
            for (int c = 1; c < 9; ++c) CHECK(s.values(r, c) == 0.0);
        }
    }
}

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 6; ++trial) {
        const int n = 1 + trial % 4;
        const auto q = oracle::random_stack(rng, 11, 10, n, trial % 2 ? 8 : 16);
        for (Family f : {Family::fos, Family::glcm, Family::tspm, Family::tscm, Family::tscin, Family::tsrm}) {
            if (f == Family::tsrm && n < 2) continue;
            auto cfg = config(f, "all", 5, q.levels());
            cfg.offsets = trial % 2 ? all_angles(1) : std::vector<Offset>{{1, 0}, {2, 135}};
            if (f == Family::fos || f == Family::glcm) cfg.channel = n - 1;
            const auto fast = compute_maps(q, cfg, {"all"}, {3});
            const auto ref = compute_maps_reference(q, cfg, {"all"});
            REQUIRE(fast.size() == ref.size());
            for (std::size_t i = 0; i < fast.size(); ++i) {
                INFO(to_string(f) << " " << fast[i].feature);
                CHECK(fast[i].feature == ref[i].feature);
                CHECK(bit_equal(fast[i], ref[i]));
            }
        }
    }
}

TEST_CASE("TSPM channel subsets in maps") {
    std::mt19937_64 rng(45);
    const auto q = oracle::random_stack(rng, 8, 8, 3, 4);
    auto cfg = config(Family::tspm, "entropy", 3, 4);
    cfg.channel_subset = {2, 0};
    const auto m = compute_map(q, cfg, {2});
    CHECK(bit_equal(m, compute_map_reference(q, cfg)));
    const std::vector<int> subset{2, 0};
    CHECK(m.values(4, 4) == tspm_entropy(build_tspm(q, Region::window({4, 4}, 3), subset)));
}

TEST_CASE("map values equal brute-force window histograms") {
    std::mt19937_64 rng(46);
    const auto q = oracle::random_stack(rng, 7, 7, 2, 3);
    const auto m = compute_map(q, config(Family::tspm, "entropy", 3, 3));
    for (int r = 1; r < 6; ++r) {
        for (int c = 1; c < 6; ++c) {
            const auto h = oracle::tspm_counts(q, {r - 1, c - 1, r + 2, c + 2}, {0, 1});
            CHECK(m.values(r, c) == doctest::Approx(oracle::entropy_bits(h)).epsilon(1e-12));
        }
    }
}

TEST_CASE("two-region phantom: interior windows differ by construction") {
    // left half: checkerboard in both channels; right half: stripes in ch1, constant ch2
    Grid<double> a(8, 8), b(8, 8);
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            if (c < 4) {
                a(r, c) = (r + c) % 2;
                b(r, c) = (r + c + 1) % 2;
            } else {
                a(r, c) = r % 2;
                b(r, c) = 0;
            }
        }
    }
    const auto q = quantize(MultiParametricStack({a, b}, {}), 2);
    const auto m = compute_map(q, config(Family::tspm, "entropy", 3, 2));
    const double left = oracle::entropy_bits(oracle::tspm_counts(q, {1, 0, 4, 3}, {0, 1}));
    const double right = oracle::entropy_bits(oracle::tspm_counts(q, {1, 5, 4, 8}, {0, 1}));
    CHECK(left != doctest::Approx(right));
    CHECK(m.values(2, 1) == doctest::Approx(left));
    CHECK(m.values(2, 6) == doctest::Approx(right));
}

TEST_CASE("deterministic across thread counts") {
    std::mt19937_64 rng(47);
    const auto q = oracle::random_stack(rng, 24, 20, 3, 16);
    for (Family f : {Family::tspm, Family::tscm, Family::tscin}) {
        const auto cfg = config(f, "entropy", 5, 16);
        const auto base = compute_map(q, cfg, {1});
        for (int t : {2, 3, 8}) CHECK(bit_equal(base, compute_map(q, cfg, {t})));
    }
}

TEST_CASE("locality: one voxel change stays within the window radius") {
    std::mt19937_64 rng(48);
    auto channels = oracle::random_raw_stack(rng, 15, 15, 2, 7).channels();
    // pin the global bounds so quantization elsewhere cannot move
    channels[0](0, 0) = 0;
    channels[0](0, 1) = 7;
    const auto cfg = config(Family::tscm, "entropy", 5, 8);
    const auto before = compute_map(quantize(MultiParametricStack(channels, {}), 8), cfg);
    channels[0](7, 7) = channels[0](7, 7) == 0 ? 3 : 0;
    const auto after = compute_map(quantize(MultiParametricStack(channels, {}), 8), cfg);
    for (int r = 0; r < 15; ++r) {
        for (int c = 0; c < 15; ++c) {
            if (before.valid(r, c) && (std::abs(r - 7) > 2 || std::abs(c - 7) > 2)) {
                CHECK(before.values(r, c) == after.values(r, c));
            }
        }
    }
    CHECK(before.values(7, 7) != after.values(7, 7));
}

TEST_CASE("summaries") {
    const MultiParametricStack s({Grid<double>(6, 6, 1.0)}, {});
    const auto q = quantize(s, 4);
    auto m = compute_map(q, config(Family::fos, "mean", 3, 4));
    Grid<int> labels(6, 6, 1);
    const RoiMask mask(labels);
    CHECK(summarize(m, mask, 1, SummaryStat::mean) == 0.0);

    std::vector<double> v{4, 1, 3, 2};
    CHECK(summary_statistic(v, SummaryStat::median) == 2.5);
    CHECK(summary_statistic(v, SummaryStat::min) == 1);
    CHECK(summary_statistic(v, SummaryStat::max) == 4);
    CHECK(summary_statistic(v, SummaryStat::std) == doctest::Approx(std::sqrt(1.25)));

    Grid<int> border(6, 6, 0);
    border(0, 0) = 2;
    border(5, 3) = 2;
    CHECK_ERRC(summarize(m, RoiMask(border), 2, SummaryStat::mean), Errc::empty_region);
}

TEST_CASE("export: CSV is lossless with NaN borders, PNG scales valid values") {
    std::mt19937_64 rng(49);
    const auto q = oracle::random_stack(rng, 6, 5, 2, 8);
    const auto m = compute_map(q, config(Family::tspm, "entropy", 3, 8));
    const std::string csv = map_to_csv(m);
    CHECK(csv.rfind("NaN,NaN,NaN,NaN,NaN,NaN\n", 0) == 0);
    // parse back one value
    const auto line = csv.substr(csv.find('\n') + 1);
    const auto second = line.substr(line.find(',') + 1);
    CHECK(std::stod(second.substr(0, second.find(','))) == m.values(1, 1));

    const auto img = map_to_gray8(m);
    CHECK(img(0, 0) == 0);
    std::uint16_t hi = 0;
    for (auto v : img.values()) hi = std::max(hi, v);
    CHECK(hi == 255);

    test::TempDir dir;
    export_map(m, dir / "m.csv", MapRender::raw_csv);
    export_map(m, dir / "m.png", MapRender::normalized_png);
    CHECK(io::read_text_file(dir / "m.csv") == csv);
    CHECK(io::read_gray_image(dir / "m.png").pixels == img);
}
