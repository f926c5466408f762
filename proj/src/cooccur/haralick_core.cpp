#include "haralick_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mprad::detail {

namespace {

constexpr double kDegenerateSigma = 1e-10;

double neg_p_log2_p(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double clean_zero(double v) { return v == 0.0 ? 0.0 : v; }

}  // namespace

void HaralickScratch::resize(int levels) {
    levels_ = levels;
    const auto g = static_cast<std::size_t>(std::max(levels, 0));
    px_.assign(g, 0.0);
    py_.assign(g, 0.0);
    psum_.assign(g == 0 ? 0 : 2 * g - 1, 0.0);
    pdiff_.assign(g, 0.0);
}

HaralickFeatures HaralickScratch::evaluate(std::span<const CellProbability> cells) {
    const int g = levels_;
    for (const auto& c : cells) {
        px_[static_cast<std::size_t>(c.row)] += c.p;
        py_[static_cast<std::size_t>(c.col)] += c.p;
        psum_[static_cast<std::size_t>(c.row + c.col)] += c.p;
        pdiff_[static_cast<std::size_t>(std::abs(c.row - c.col))] += c.p;
    }

    double mu_x = 0.0, mu_y = 0.0, hx = 0.0, hy = 0.0;
    for (int i = 0; i < g; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        mu_x += (i + 1) * px_[ui];
        mu_y += (i + 1) * py_[ui];
        hx += neg_p_log2_p(px_[ui]);
        hy += neg_p_log2_p(py_[ui]);
    }
    double var_x = 0.0, var_y = 0.0;
    for (int i = 0; i < g; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        var_x += (i + 1 - mu_x) * (i + 1 - mu_x) * px_[ui];
        var_y += (i + 1 - mu_y) * (i + 1 - mu_y) * py_[ui];
    }

    using F = HaralickFeature;
    HaralickFeatures f;
    const double gd = static_cast<double>(g);
    double hxy1 = 0.0;
    double max_p = 0.0;
    for (const auto& c : cells) {
        const double p = c.p;
        const double i = c.row + 1;
        const double j = c.col + 1;
        const double diff = std::abs(i - j);
        const double t = i + j - mu_x - mu_y;
        f[F::autocorrelation] += i * j * p;
        f[F::cluster_prominence] += t * t * t * t * p;
        f[F::cluster_shade] += t * t * t * p;
        f[F::cluster_tendency] += t * t * p;
        f[F::contrast] += diff * diff * p;
        f[F::dissimilarity] += diff * p;
        f[F::energy] += p * p;
        f[F::entropy] += neg_p_log2_p(p);
        f[F::homogeneity1] += p / (1.0 + diff);
        f[F::homogeneity2] += p / (1.0 + diff * diff);
        f[F::idmn] += p / (1.0 + diff * diff / (gd * gd));
        f[F::idn] += p / (1.0 + diff / gd);
        f[F::variance] += (i - mu_x) * (i - mu_x) * p;
        max_p = std::max(max_p, p);
        hxy1 -= p * std::log2(px_[static_cast<std::size_t>(c.row)] * py_[static_cast<std::size_t>(c.col)]);
    }
    f[F::maximum_probability] = max_p;

    const double sigma_x = std::sqrt(var_x);
    const double sigma_y = std::sqrt(var_y);
    if (sigma_x < kDegenerateSigma || sigma_y < kDegenerateSigma) {
        f[F::correlation] = 1.0;
    } else {
        const double r = (f[F::autocorrelation] - mu_x * mu_y) / (sigma_x * sigma_y);
        f[F::correlation] = std::clamp(r, -1.0, 1.0);
    }

    double sum_avg = 0.0;
    double sum_ent = 0.0;
    for (std::size_t k = 0; k < psum_.size(); ++k) {
        sum_avg += static_cast<double>(k + 2) * psum_[k];
        sum_ent += neg_p_log2_p(psum_[k]);
    }
    double sum_var = 0.0;
    for (std::size_t k = 0; k < psum_.size(); ++k) {
        const double d = static_cast<double>(k + 2) - sum_avg;
        sum_var += d * d * psum_[k];
    }
    f[F::sum_average] = sum_avg;
    f[F::sum_entropy] = clean_zero(sum_ent);
    f[F::sum_variance] = sum_var;

    double diff_ent = 0.0;
    double inv_var = 0.0;
    for (std::size_t k = 0; k < pdiff_.size(); ++k) {
        diff_ent += neg_p_log2_p(pdiff_[k]);
        if (k > 0) inv_var += pdiff_[k] / static_cast<double>(k * k);
    }
    f[F::difference_entropy] = clean_zero(diff_ent);
    f[F::inverse_variance] = inv_var;
    f[F::entropy] = clean_zero(f[F::entropy]);

    // HXY2 = -sum_ij px(i) py(j) log2(px(i) py(j)) collapses to HX + HY.
    const double hxy = f[F::entropy];
    const double hxy2 = hx + hy;
    const double hmax = std::max(hx, hy);
    if (hmax > 0.0) {
        f[F::imc1] = (hxy - hxy1) / hmax;
        const double arg = 1.0 - std::exp(-2.0 * std::numbers::ln2 * (hxy2 - hxy));
        f[F::imc2] = std::sqrt(std::max(0.0, arg));
    }

    std::fill(px_.begin(), px_.end(), 0.0);
    std::fill(py_.begin(), py_.end(), 0.0);
    std::fill(psum_.begin(), psum_.end(), 0.0);
    std::fill(pdiff_.begin(), pdiff_.end(), 0.0);
    return f;
}

void CooccurrenceAccumulator::resize(int levels) {
    levels_ = levels;
    const auto g = static_cast<std::size_t>(std::max(levels, 0));
    counts_.assign(g * g, 0);
    touched_.clear();
    total_ = 0;
}

void CooccurrenceAccumulator::drain(std::vector<CellProbability>& out) {
    out.clear();
    std::sort(touched_.begin(), touched_.end());
    const double total = static_cast<double>(total_);
    const auto g = static_cast<std::uint32_t>(levels_);
    for (std::uint32_t idx : touched_) {
        out.push_back({static_cast<int>(idx / g), static_cast<int>(idx % g),
                       static_cast<double>(counts_[idx]) / total});
        counts_[idx] = 0;
    }
    touched_.clear();
    total_ = 0;
}

void collect_cells(const CooccurrenceMatrix& m, std::vector<CellProbability>& out) {
    out.clear();
    const int g = m.levels();
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            const double p = m(i, j);
            if (p > 0.0) out.push_back({i, j, p});
        }
    }
}

}  // namespace mprad::detail
