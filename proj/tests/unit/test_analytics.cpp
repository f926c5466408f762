#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mprad/analytics.hpp"
#include "mprad/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mprad;
using namespace mprad::analytics;

namespace {

struct WelchCase {
    const char* name;
    std::vector<double> a, b;
    double t, dof, p;
};

// Reference values computed independently at 50 significant digits.
const std::vector<WelchCase> welch_reference = {
    {"shifted", {1, 2, 3}, {11, 12, 13}, -12.247448713915890491, 4.0, 0.0002552167494419267413},
    {"unequal_var", {1.1, 2.3, 2.9, 4.2, 5.0}, {2.0, 2.1, 2.2, 2.4},
     1.3319467231965868949, 4.1224543432413894783, 0.25174791473759269355},
    {"moderate", {10, 12, 9, 11, 13, 8}, {7, 9, 8, 6, 10, 5, 8},
     2.9211290495042953546, 10.339732823900202681, 0.014773111643371963372},
    {"small_group", {0.5, 0.7}, {0.1, 0.9, 0.4, 0.6, 0.2, 0.8, 0.3},
     0.84416228929897526163, 4.1705182617012373722, 0.44428541959921204235},
    {"near_null", {100, 102, 98, 101}, {100.5, 99.5, 101.5, 98.5, 100},
     0.25264557631995568584, 4.9714928732183045761, 0.81065531566782961004},
};

std::vector<int> random_labels(std::mt19937_64& rng, int n) {
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) y[i] = i % 2;
    std::shuffle(y.begin(), y.end(), rng);
    return y;
}

}  // namespace

TEST_CASE("welch: reference table") {
    for (const auto& c : welch_reference) {
        CAPTURE(c.name);
        const auto r = welch_t_test(c.a, c.b);
        CHECK(r.t == doctest::Approx(c.t).epsilon(1e-12));
        CHECK(r.dof == doctest::Approx(c.dof).epsilon(1e-12));
        CHECK(std::abs(r.p - c.p) < 1e-12);
    }
}

TEST_CASE("welch: identical groups, swapping, degenerate input") {
    const std::vector<double> a{1, 2, 3, 4}, b{1, 2, 3, 4};
    const auto same = welch_t_test(a, b);
    CHECK(same.t == 0.0);
    CHECK(same.p == doctest::Approx(1.0));
    const std::vector<double> c{11, 12, 13, 14};
    CHECK(welch_t_test(a, c).p < 0.01);
    CHECK(welch_t_test(a, c).t == -welch_t_test(c, a).t);
    CHECK(welch_t_test(a, c).p == welch_t_test(c, a).p);

    const std::vector<double> z{0, 0};
    CHECK_ERRC(welch_t_test(z, z), Errc::degenerate);
    const std::vector<double> one{1};
    CHECK_ERRC(welch_t_test(one, a), Errc::invalid_argument);
    const std::vector<double> bad{1, NAN};
    CHECK_ERRC(welch_t_test(bad, a), Errc::invalid_argument);
}

TEST_CASE("student t tail") {
    CHECK(student_t_two_sided(0.0, 5) == doctest::Approx(1.0));
    CHECK(student_t_two_sided(12.706204736174707, 1) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(student_t_two_sided(-2.0, 10) == student_t_two_sided(2.0, 10));
}

TEST_CASE("auc: worked examples") {
    const std::vector<double> s1{1, 2, 3, 4};
    const std::vector<int> y1{0, 0, 1, 1};
    CHECK(roc_auc(s1, y1).auc == 1.0);
    const std::vector<double> ties{5, 5, 5, 5};
    CHECK(roc_auc(ties, y1).auc == 0.5);
    const std::vector<double> s2{1, 3, 2, 4};
    const std::vector<int> y2{0, 1, 0, 1};
    CHECK(roc_auc(s2, y2).auc == 1.0);
    const std::vector<int> y3{0, 1, 1, 0};
    CHECK(roc_auc(s2, y3).auc == 0.5);
    const std::vector<double> s4{1, 3, 2, 4};
    const std::vector<int> y4{1, 0, 0, 1};
    CHECK(roc_auc(s4, y4).auc == 0.5);
    const std::vector<double> s5{0.1, 0.4, 0.35, 0.8};
    const std::vector<int> y5{0, 0, 1, 1};
    CHECK(roc_auc(s5, y5).auc == 0.75);

    const std::vector<int> only_pos{1, 1, 1, 1};
    CHECK_ERRC(roc_auc(s1, only_pos), Errc::invalid_argument);
}

TEST_CASE("auc: equals pairwise count and ignores monotone transforms") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 4 + static_cast<int>(rng() % 30);
        auto y = random_labels(rng, n);
        std::vector<double> s(n);
        for (auto& v : s) v = static_cast<double>(rng() % 7);  // plenty of ties
        const double auc = roc_auc(s, y).auc;
        CHECK(auc == doctest::Approx(oracle::pairwise_auc(s, y)).epsilon(1e-14));
        std::vector<double> t(n), neg(n);
        for (int i = 0; i < n; ++i) {
            t[i] = std::exp(0.3 * s[i]) - 4;
            neg[i] = -s[i];
        }
        CHECK(roc_auc(t, y).auc == auc);
        CHECK(roc_auc(neg, y).auc == doctest::Approx(1.0 - auc).epsilon(1e-14));
    }
}

TEST_CASE("roc curve runs from corner to corner and Youden is optimal") {
    const std::vector<double> s{0.1, 0.4, 0.35, 0.8, 0.7, 0.2};
    const std::vector<int> y{0, 0, 1, 1, 1, 0};
    const auto roc = roc_auc(s, y);
    REQUIRE(roc.points.size() >= 2);
    CHECK(roc.points.front().fpr == 0.0);
    CHECK(roc.points.front().tpr == 0.0);
    CHECK(roc.points.back().fpr == 1.0);
    CHECK(roc.points.back().tpr == 1.0);
    double best = -1;
    for (const auto& p : roc.points) best = std::max(best, p.tpr - p.fpr);
    CHECK(roc.sensitivity + roc.specificity - 1.0 == doctest::Approx(best));
}

TEST_CASE("logistic: separation, independence and rank relation") {
    const std::vector<double> ind{0, 0, 0, 1, 1, 1};
    const std::vector<int> y{0, 0, 0, 1, 1, 1};
    const auto sep = univariate_logistic(ind, y);
    CHECK(sep.separated);
    CHECK(std::isinf(sep.coef));
    CHECK(sep.coef > 0);
    CHECK(sep.auc == 1.0);

    // A shared value at the boundary: no finite optimum, but ranks are tied.
    const std::vector<double> touch{0, 1, 2, 2, 3, 4};
    const auto quasi = univariate_logistic(touch, y);
    CHECK(quasi.separated);
    CHECK(quasi.coef > 0);
    CHECK(quasi.auc == doctest::Approx(17.0 / 18.0).epsilon(1e-15));
    const std::vector<double> flipped{4, 3, 2, 2, 1, 0};
    CHECK(univariate_logistic(flipped, y).coef < 0);
    CHECK(univariate_logistic(flipped, y).auc == doctest::Approx(17.0 / 18.0).epsilon(1e-15));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    std::vector<double> x(400);
    std::vector<int> lab(400);
    for (int i = 0; i < 400; ++i) {
        x[i] = g(rng);
        lab[i] = i % 2;
    }
    const auto indep = univariate_logistic(x, lab);
    CHECK_FALSE(indep.separated);
    CHECK(std::abs(indep.coef) < 0.3);
    CHECK(std::abs(indep.auc - 0.5) < 0.08);

    for (int i = 0; i < 400; ++i) x[i] += lab[i] ? 1.0 : 0.0;
    const auto fit = univariate_logistic(x, lab);
    CHECK(fit.coef > 0);
    CHECK(fit.auc == roc_auc(x, lab).auc);
    std::vector<double> cubed(400);
    for (int i = 0; i < 400; ++i) cubed[i] = x[i] * x[i] * x[i];
    CHECK(univariate_logistic(cubed, lab).auc == fit.auc);
}

TEST_CASE("feature table: parse, columns and round trip") {
    const auto t = parse_feature_table("subject_id,label,a,b\ns1,1,0.5,2\ns2,negative,1.5,-3\ns3,pos,2.5,1e-3\n");
    CHECK(t.size() == 3);
    CHECK(t.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(t.labels == std::vector<int>{1, 0, 1});
    CHECK(t.column("b") == std::vector<double>{2, -3, 1e-3});
    CHECK(t.matrix()(1, 0) == 1.5);
    const auto again = parse_feature_table(feature_table_csv(t));
    CHECK(again.subject_ids == t.subject_ids);
    CHECK(again.rows == t.rows);
    CHECK(again.labels == t.labels);

    CHECK_THROWS_AS(parse_feature_table("label,a\n1,x\n"), Error);
    CHECK_THROWS_AS(parse_feature_table("a,b\n1,2\n"), Error);
    CHECK_THROWS_AS(parse_feature_table("label,a\n2,1\n"), Error);
    CHECK_THROWS_AS(t.column("zzz"), Error);
    CHECK(parse_feature_table("label,a\ntrue,1\nfalse,2\n").subject_ids.size() == 2);
}

TEST_CASE("isomap: points on a line keep their order") {
    Eigen::MatrixXd x(12, 3);
    for (int i = 0; i < 12; ++i) x.row(i) << i * 0.5, 1.0 + i * 0.5, 2.0 - i;
    const auto iso = isomap_fit(x, 3, 1);
    const double sign = iso.embedding(11, 0) > iso.embedding(0, 0) ? 1 : -1;
    for (int i = 1; i < 12; ++i) CHECK(sign * (iso.embedding(i, 0) - iso.embedding(i - 1, 0)) > 0);
    const double step = (x.row(1) - x.row(0)).norm();
    CHECK(std::abs(iso.embedding(11, 0) - iso.embedding(0, 0)) == doctest::Approx(11 * step).epsilon(1e-9));
}

TEST_CASE("isomap: circle geodesics follow the arc") {
    const int n = 24;
    Eigen::MatrixXd x(n, 2);
    for (int i = 0; i < n; ++i) {
        const double a = 2 * std::numbers::pi * i / n;
        x.row(i) << std::cos(a), std::sin(a);
    }
    const auto iso = isomap_fit(x, 2, 2);
    const double chord = (x.row(1) - x.row(0)).norm();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int hops = std::min(std::abs(i - j), n - std::abs(i - j));
            CHECK(iso.geodesic(i, j) == doctest::Approx(hops * chord).epsilon(1e-12));
        }
    }
}

TEST_CASE("isomap: plane in ten dimensions") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    Eigen::MatrixXd basis(10, 2);
    for (int i = 0; i < basis.size(); ++i) basis.data()[i] = g(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(10, 2);
    const int n = 300;
    Eigen::MatrixXd uv(n, 2);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < n; ++i) uv.row(i) << u(rng), u(rng);
    const Eigen::MatrixXd x = uv * q.transpose();
    const auto iso = isomap_fit(x, 20, 2);

    // Embedded pairwise distances reproduce the in-plane distances.
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double truth = (uv.row(i) - uv.row(j)).norm();
            const double got = (iso.embedding.row(i) - iso.embedding.row(j)).norm();
            num += (got - truth) * (got - truth);
            den += truth * truth;
        }
    }
    CHECK(std::sqrt(num / den) < 0.05);

    // Training points map onto their own embedding.
    for (int i = 0; i < n; i += 30) {
        const Eigen::VectorXd y = isomap_transform(iso, x.row(i).transpose());
        CHECK((y - iso.embedding.row(i).transpose()).norm() < 0.05);
    }
}

TEST_CASE("isomap: invalid k and disconnected graphs") {
    Eigen::MatrixXd x(6, 1);
    x << 0, 1, 2, 100, 101, 102;
    CHECK_ERRC(isomap_fit(x, 6, 1), Errc::invalid_argument);
    CHECK_ERRC(isomap_fit(x, 0, 1), Errc::invalid_argument);
    CHECK_ERRC(isomap_fit(x, 2, 1), Errc::disconnected_graph);
    CHECK(knn_components(x, 2) == std::vector<int>{3, 3});
    CHECK(knn_components(x, 3) == std::vector<int>{6});
    try {
        isomap_fit(x, 2, 1);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("k=2") != std::string::npos);
    }
}

TEST_CASE("svm: separable data and cost scaling") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    const int n = 60;
    Eigen::MatrixXd x(n, 2);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
        y[i] = i % 2;
        x.row(i) << g(rng) + (y[i] ? 2.0 : -2.0), g(rng);
    }
    SvmOptions opt;
    const auto svm = train_linear_svm(x, y, opt);
    CHECK(svm.kkt_gap <= opt.tolerance);
    int correct = 0;
    for (int i = 0; i < n; ++i) correct += (svm.decision(x.row(i).transpose()) >= 0) == (y[i] == 1);
    CHECK(correct >= n - 3);
    CHECK(svm.w(0) > 0);

    // Scaling both costs and the data scale leaves decision signs unchanged
    // for a hard-margin-like regime.
    SvmOptions big = opt;
    big.c_positive = 1e4;
    const auto hard = train_linear_svm(x, y, big);
    big.c_positive = 4e4;
    const auto hard4 = train_linear_svm(x * 0.5, y, big);
    for (int i = 0; i < n; ++i) {
        const double d1 = hard.decision(x.row(i).transpose());
        const double d2 = hard4.decision(0.5 * x.row(i).transpose());
        CHECK((d1 >= 0) == (d2 >= 0));
    }
    std::vector<int> one_class(n, 1);
    CHECK_THROWS_AS(train_linear_svm(x, one_class, opt), Error);
}

TEST_CASE("standardizer") {
    Eigen::MatrixXd x(4, 2);
    x << 1, 5, 2, 5, 3, 5, 4, 5;
    const auto s = Standardizer::fit(x);
    const Eigen::MatrixXd z = s.apply(x);
    CHECK(z.col(0).mean() == doctest::Approx(0.0));
    CHECK(z.col(1).cwiseAbs().maxCoeff() == 0.0);
    CHECK(std::isfinite(z(0, 1)));
}

TEST_CASE("loocv: deterministic across thread counts and k clamp") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    const int n = 30;
    Eigen::MatrixXd x(n, 3);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
        y[i] = i % 2;
        x.row(i) << g(rng) + y[i] * 1.5, g(rng), g(rng);
    }
    IsoSvmOptions opt;
    opt.k = 8;
    const auto a = loocv(x, y, opt, 1);
    const auto b = loocv(x, y, opt, 4);
    CHECK(a.scores == b.scores);
    CHECK(a.predicted == b.predicted);
    CHECK(a.roc.auc >= 0.0);
    CHECK(a.roc.auc <= 1.0);
    CHECK(a.warnings.empty());
    CHECK(a.k_used == 8);

    opt.k = 40;
    const auto c = loocv(x, y, opt, 2);
    CHECK(c.k_used == n - 2);
    CHECK(c.warnings.size() == 1);

    const auto lin1 = loocv_linear(x, y, {}, true, 1);
    const auto lin3 = loocv_linear(x, y, {}, true, 3);
    CHECK(lin1.scores == lin3.scores);
    CHECK(lin1.roc.auc > 0.7);

    std::vector<int> lopsided(n, 0);
    lopsided[0] = 1;
    CHECK_THROWS_AS(loocv(x, lopsided, opt, 1), Error);
}
