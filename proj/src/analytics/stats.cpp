#include "mprad/analytics.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mprad/error.hpp"

namespace mprad::analytics {

namespace {

struct Moments {
    double mean = 0.0;
    double var = 0.0;  // unbiased
};

Moments moments(std::span<const double> v) {
    Moments m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    for (double x : v) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(v.size() - 1);
    return m;
}

void check_labels(std::size_t n, std::span<const int> labels) {
    if (labels.size() != n) {
        throw Error(Errc::dimension_mismatch, std::to_string(n) + " scores but " +
                                                  std::to_string(labels.size()) + " labels");
    }
    bool pos = false, neg = false;
    for (int l : labels) {
        if (l == 1) pos = true;
        else if (l == 0) neg = true;
        else throw Error(Errc::invalid_argument, "labels must be 0 or 1, got " + std::to_string(l));
    }
    if (!pos || !neg) throw Error(Errc::invalid_argument, "both classes must be present");
}

}  // namespace

double student_t_two_sided(double t, double dof) {
    if (std::isnan(t) || !(dof > 0.0)) throw Error(Errc::invalid_argument, "invalid t statistic or dof");
    if (std::isinf(t)) return 0.0;
    const boost::math::students_t dist(dof);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

TTest welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw Error(Errc::invalid_argument, "t-test needs at least 2 values per group (got " +
                                                std::to_string(a.size()) + " and " + std::to_string(b.size()) + ")");
    }
    for (auto group : {a, b}) {
        for (double x : group) {
            if (!std::isfinite(x)) throw Error(Errc::invalid_argument, "t-test input is not finite");
        }
    }
    const Moments ma = moments(a), mb = moments(b);
    const double sa = ma.var / static_cast<double>(a.size());
    const double sb = mb.var / static_cast<double>(b.size());
    if (sa + sb == 0.0) throw Error(Errc::degenerate, "both groups have zero variance");
    TTest r;
    r.t = (ma.mean - mb.mean) / std::sqrt(sa + sb);
    r.dof = (sa + sb) * (sa + sb) /
            (sa * sa / static_cast<double>(a.size() - 1) + sb * sb / static_cast<double>(b.size() - 1));
    r.p = student_t_two_sided(r.t, r.dof);
    return r;
}

Roc roc_auc(std::span<const double> scores, std::span<const int> labels) {
    check_labels(scores.size(), labels);
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return scores[i] < scores[j]; });

    double n_pos = 0.0, rank_sum = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t m = i; m < j; ++m) {
            if (labels[order[m]] == 1) {
                rank_sum += midrank;
                n_pos += 1.0;
            }
        }
        i = j;
    }
    const double n_neg = static_cast<double>(n) - n_pos;
    Roc roc;
    roc.auc = (rank_sum - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);

    // Sweep thresholds from high to low.
    roc.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    double tp = 0.0, fp = 0.0, best_j = -1.0;
    for (std::size_t i = n; i > 0;) {
        std::size_t j = i;
        const double s = scores[order[i - 1]];
        while (j > 0 && scores[order[j - 1]] == s) {
            (labels[order[j - 1]] == 1 ? tp : fp) += 1.0;
            --j;
        }
        const RocPoint pt{s, fp / n_neg, tp / n_pos};
        roc.points.push_back(pt);
        if (pt.tpr - pt.fpr > best_j) {
            best_j = pt.tpr - pt.fpr;
            roc.best_threshold = s;
            roc.sensitivity = pt.tpr;
            roc.specificity = 1.0 - pt.fpr;
        }
        i = j;
    }
    return roc;
}

Logistic univariate_logistic(std::span<const double> x, std::span<const int> labels) {
    check_labels(x.size(), labels);
    const std::size_t n = x.size();
    double lo_pos = std::numeric_limits<double>::infinity(), hi_pos = -lo_pos;
    double lo_neg = lo_pos, hi_neg = -lo_pos;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(x[i])) throw Error(Errc::invalid_argument, "logistic input is not finite");
        mean += x[i];
        if (labels[i] == 1) {
            lo_pos = std::min(lo_pos, x[i]);
            hi_pos = std::max(hi_pos, x[i]);
        } else {
            lo_neg = std::min(lo_neg, x[i]);
            hi_neg = std::max(hi_neg, x[i]);
        }
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 0.0)) throw Error(Errc::degenerate, "feature is constant");

    Logistic out;
    if (hi_neg <= lo_pos || hi_pos <= lo_neg) {
        out.separated = true;
        const double sign = hi_neg <= lo_pos ? 1.0 : -1.0;
        out.coef = sign * std::numeric_limits<double>::infinity();
        out.intercept = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> oriented(x.begin(), x.end());
        if (sign < 0.0) {
            for (double& v : oriented) v = -v;
        }
        out.auc = roc_auc(oriented, labels).auc;
        return out;
    }

    // Newton-Raphson (IRLS) on the standardised feature.
    double pos = 0.0;
    for (int l : labels) pos += l;
    const double prior = pos / static_cast<double>(n);
    double b0 = std::log(prior / (1.0 - prior)), b1 = 0.0;
    for (out.iterations = 0; out.iterations < 100; ++out.iterations) {
        double g0 = 0.0, g1 = 0.0, h00 = 0.0, h01 = 0.0, h11 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = (x[i] - mean) / sd;
            const double p = 1.0 / (1.0 + std::exp(-(b0 + b1 * z)));
            const double r = labels[i] - p;
            const double w = p * (1.0 - p);
            g0 += r;
            g1 += r * z;
            h00 += w;
            h01 += w * z;
            h11 += w * z * z;
        }
        if (std::hypot(g0, g1) < 1e-8) break;
        const double det = h00 * h11 - h01 * h01;
        if (!(det > 0.0)) break;
        b0 += (h11 * g0 - h01 * g1) / det;
        b1 += (h00 * g1 - h01 * g0) / det;
    }
    out.coef = b1 / sd;
    out.intercept = b0 - b1 * mean / sd;
    if (out.coef == 0.0) {
        out.auc = 0.5;
    } else {
        std::vector<double> oriented(x.begin(), x.end());
        if (out.coef < 0.0) {
            for (double& v : oriented) v = -v;
        }
        out.auc = roc_auc(oriented, labels).auc;
    }
    return out;
}

}  // namespace mprad::analytics
