#include <doctest.h>

#include <random>

#include "mprad/cooccur.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mprad;
using F = HaralickFeature;

namespace {

QuantizedStack from_levels(std::vector<Grid<Level>> ls, int levels) {
    std::vector<Grid<double>> us;
    std::vector<ChannelBounds> b;
    for (const auto& l : ls) {
        us.emplace_back(l.width(), l.height(), 0.0);
        b.push_back({0.0, static_cast<double>(levels - 1)});
    }
    return QuantizedStack(std::move(ls), std::move(us), {levels, b}, std::vector<std::string>(b.size(), "c"));
}

CooccurrenceMatrix matrix(int g, std::initializer_list<std::tuple<int, int, double>> cells) {
    CooccurrenceMatrix m(g);
    for (auto [i, j, v] : cells) m(i, j) = v;
    return m.normalized();
}

CooccurrenceMatrix random_normalized(std::mt19937_64& rng, int g, double fill) {
    std::bernoulli_distribution on(fill);
    std::uniform_int_distribution<int> count(1, 50);
    CooccurrenceMatrix m(g);
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            if (on(rng)) m(i, j) = count(rng);
        }
    }
    if (m.sum() == 0.0) m(0, 0) = 1.0;
    return m.normalized();
}

void check_counts(const CooccurrenceMatrix& m, const oracle::Counts& raw) {
    const double total = static_cast<double>(oracle::total(raw));
    for (int i = 0; i < m.levels(); ++i) {
        for (int j = 0; j < m.levels(); ++j) {
            CHECK(m(i, j) == static_cast<double>(raw[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) / total);
        }
    }
}

}  // namespace

TEST_CASE("offsets: lattice directions, parsing and validation") {
    CHECK(Offset{1, 0}.drow() == 0);
    CHECK(Offset{1, 0}.dcol() == 1);
    CHECK(Offset{2, 45}.drow() == -2);
    CHECK(Offset{2, 45}.dcol() == 2);
    CHECK(Offset{1, 90}.dcol() == 0);
    CHECK(Offset{1, 135}.dcol() == -1);
    const auto o = parse_offsets("1:0, 2:135");
    REQUIRE(o.size() == 2);
    CHECK(o[1] == Offset{2, 135});
    CHECK(format_offsets(all_angles(1)) == "1:0,1:45,1:90,1:135");
    CHECK_ERRC(parse_offsets("1:30"), Errc::invalid_argument);
    CHECK_ERRC(parse_offsets("0:0"), Errc::invalid_argument);
    CHECK_THROWS_AS(parse_offsets("x"), Error);
}

TEST_CASE("build_glcm examples") {
    const auto img = test::grid<Level>(2, 2, {0, 0, 1, 1});
    const auto m = build_glcm(img, 2, Region::whole(2, 2), {1, 0});
    CHECK(m(0, 0) == 0.5);
    CHECK(m(1, 1) == 0.5);
    CHECK(m(0, 1) == 0.0);
    CHECK(m.is_normalized());
    CHECK(m.is_symmetric());

    const auto c = build_glcm(Grid<Level>(4, 4, 2), 4, Region::whole(4, 4), {1, 45});
    CHECK(c(2, 2) == 1.0);
    CHECK(c.nonzero_count() == 1);

    CHECK_ERRC(build_glcm(img, 2, Region::rect({0, 0, 1, 1}), {1, 0}), Errc::no_valid_pairs);
}

TEST_CASE("pair_signature_glcm examples") {
    const std::vector<Level> a{0, 1}, b{1, 1};
    auto m = pair_signature_glcm(a, b, 2);
    CHECK(m(0, 1) == 1.0);
    CHECK(m(1, 1) == 1.0);
    CHECK(m.sum() == 2.0);
    const std::vector<Level> c{3, 3, 3};
    CHECK(pair_signature_glcm(c, c, 4)(3, 3) == 3.0);
    const std::vector<Level> d{0, 1, 2}, e{2, 1, 0};
    m = pair_signature_glcm(d, e, 3);
    CHECK(m(0, 2) == 1.0);
    CHECK(m(1, 1) == 1.0);
    CHECK(m(2, 0) == 1.0);
    CHECK(m.sum() == 3.0);
    CHECK_ERRC(pair_signature_glcm(a, c, 4), Errc::invalid_argument);
}

TEST_CASE("build_tscm examples") {
    const auto q = from_levels({test::grid<Level>(2, 1, {0, 1}), test::grid<Level>(2, 1, {1, 1})}, 2);
    const auto m = build_tscm(q, Region::whole(2, 1), {1, 0});
    CHECK(m(0, 1) == 0.25);
    CHECK(m(1, 0) == 0.25);
    CHECK(m(1, 1) == 0.5);

    const auto c = from_levels({Grid<Level>(3, 3, 2), Grid<Level>(3, 3, 2), Grid<Level>(3, 3, 2)}, 4);
    CHECK(build_tscm(c, Region::whole(3, 3), {1, 90})(2, 2) == 1.0);
}

TEST_CASE("build_tsrm examples and errors") {
    const std::vector<Level> s{2, 5, 5, 7};
    const auto m = build_tsrm(s, 1, 8);
    CHECK(m(2, 5) == 1.0);
    CHECK(m(5, 5) == 1.0);
    CHECK(m(5, 7) == 1.0);
    CHECK(m.sum() == 3.0);
    const std::vector<Level> c{4, 4, 4};
    CHECK(build_tsrm(c, 1, 8)(4, 4) == 2.0);
    const std::vector<Level> alt{0, 1, 0, 1};
    const auto a = build_tsrm(alt, 2, 2);
    CHECK(a(0, 0) == 1.0);
    CHECK(a(1, 1) == 1.0);
    CHECK(a.sum() == 2.0);
    CHECK_ERRC(build_tsrm(alt, 0, 2), Errc::out_of_range);
    CHECK_ERRC(build_tsrm(alt, 4, 2), Errc::out_of_range);
}

TEST_CASE("builders match brute-force enumeration") {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> side(2, 5), chans(1, 3), lev(2, 4), dist(1, 2), ang(0, 3);
    for (int trial = 0; trial < 80; ++trial) {
        const int w = side(rng), h = side(rng), g = lev(rng);
        const auto q = oracle::random_stack(rng, w, h, chans(rng), g);
        const Offset o{dist(rng), 45 * ang(rng)};
        const Rect r{0, 0, h, w};
        const auto raw = oracle::tscm_counts(q, r, o);
        if (oracle::total(raw) == 0) {
            CHECK_ERRC(build_tscm(q, Region::rect(r), o), Errc::no_valid_pairs);
            continue;
        }
        check_counts(build_tscm(q, Region::rect(r), o), oracle::symmetrize(raw));
        check_counts(build_tscm(q, Region::rect(r), o, false), raw);
        check_counts(build_glcm(q.channel(0), g, Region::rect(r), o), oracle::symmetrize(oracle::glcm_counts(q.channel(0), g, r, o)));

        std::vector<int> sig;
        for (int k = 0; k < q.channel_count(); ++k) sig.push_back(q.channel(k)(0, 0));
        if (q.channel_count() >= 2) {
            const auto tsrm = build_tsrm(signature_at(q, {0, 0}).values, 1, g);
            const auto expect = oracle::tsrm_counts(sig, 1, g);
            for (int i = 0; i < g; ++i) {
                for (int j = 0; j < g; ++j) CHECK(tsrm(i, j) == static_cast<double>(expect[i][j]));
            }
        }
    }
}

TEST_CASE("N=1 TSCM equals GLCM exactly") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 50; ++trial) {
        const auto q = oracle::random_stack(rng, 8, 8, 1, 8);
        for (const Offset& o : all_angles(1 + trial % 2)) {
            CHECK(build_tscm(q, Region::whole(8, 8), o) == build_glcm(q.channel(0), 8, Region::whole(8, 8), o));
        }
    }
}

TEST_CASE("unnormalized TSCM sum is N x pairs x 2") {
    std::mt19937_64 rng(23);
    const auto q = oracle::random_stack(rng, 6, 5, 3, 4);
    // 0 degrees, d=1: 5 rows x 5 pairs
    const auto raw = oracle::tscm_counts(q, {0, 0, 5, 6}, {1, 0});
    CHECK(oracle::total(oracle::symmetrize(raw)) == 3 * 25 * 2);
}

TEST_CASE("haralick hand examples") {
    const auto one = haralick(matrix(4, {{2, 2, 1.0}}));
    CHECK(one[F::entropy] == 0.0);
    CHECK(one[F::energy] == 1.0);
    CHECK(one[F::contrast] == 0.0);
    CHECK(one[F::maximum_probability] == 1.0);
    CHECK(one[F::correlation] == 1.0);
    CHECK(one[F::imc1] == 0.0);
    CHECK(one[F::imc2] == 0.0);

    const auto diag = haralick(matrix(2, {{0, 0, 1}, {1, 1, 1}}));
    CHECK(diag[F::entropy] == doctest::Approx(1.0));
    CHECK(diag[F::contrast] == 0.0);
    CHECK(diag[F::correlation] == doctest::Approx(1.0));

    const auto anti = haralick(matrix(2, {{0, 1, 1}, {1, 0, 1}}));
    CHECK(anti[F::contrast] == doctest::Approx(1.0));
    CHECK(anti[F::correlation] == doctest::Approx(-1.0));
    CHECK(anti[F::entropy] == doctest::Approx(1.0));
}

TEST_CASE("haralick matches the definition oracle on random matrices") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 200; ++trial) {
        const int g = 1 + trial % 8;
        const auto m = random_normalized(rng, g, trial % 3 == 0 ? 0.2 : 0.7);
        const auto f = haralick(m);
        const auto expect = oracle::haralick(std::vector<double>(m.cells().begin(), m.cells().end()), g);
        for (std::size_t i = 0; i < kHaralickCount; ++i) {
            INFO("feature " << haralick_names()[i] << " G=" << g);
            CHECK(f.values[i] == doctest::Approx(expect[i]).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("haralick invariants") {
    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 100; ++trial) {
        const int g = 2 + trial % 7;
        CooccurrenceMatrix raw(g);
        std::uniform_int_distribution<int> count(0, 9);
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) raw(i, j) = count(rng);
        }
        raw(0, 0) += 1;
        const auto m = raw.symmetrized().normalized();
        CHECK(m.is_symmetric());
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) CHECK(m(i, j) == m(j, i));
        }
        const auto f = haralick(m);
        CHECK(f[F::correlation] >= -1.0);
        CHECK(f[F::correlation] <= 1.0);
        CHECK(f[F::energy] > 0.0);
        CHECK(f[F::energy] <= 1.0);
        CHECK(f[F::entropy] >= 0.0);
        double sp2 = 0.0;
        for (double p : m.cells()) sp2 += p * p;
        CHECK(f[F::energy] == doctest::Approx(sp2));

        CooccurrenceMatrix rev(g);
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) rev(g - 1 - i, g - 1 - j) = raw(i, j);
        }
        const auto fr = haralick(rev.symmetrized().normalized());
        for (F k : {F::entropy, F::energy, F::contrast, F::maximum_probability}) {
            CHECK(fr[k] == doctest::Approx(f[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("haralick rejects unnormalized input; names round-trip") {
    CooccurrenceMatrix m(3);
    m(0, 0) = 2.0;
    CHECK_ERRC(haralick(m), Errc::not_normalized);
    CHECK_ERRC(CooccurrenceMatrix(3).normalized(), Errc::no_valid_pairs);
    for (std::size_t i = 0; i < kHaralickCount; ++i) {
        CHECK(haralick_feature_from_name(haralick_names()[i]) == static_cast<F>(i));
    }
    CHECK_FALSE(haralick_feature_from_name("nope").has_value());
}

TEST_CASE("matrix CSV dump") {
    const auto m = matrix(2, {{0, 1, 1}, {1, 1, 3}});
    CHECK(m.to_csv() == "0,0.25\n0,0.75\n");
}
