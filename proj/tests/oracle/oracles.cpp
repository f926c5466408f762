#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

using mprad::Level;
using mprad::QuantizedStack;
using mprad::Rect;

namespace {

std::vector<std::vector<int>> all_tuples(int levels, int length) {
    std::vector<std::vector<int>> out{{}};
    for (int k = 0; k < length; ++k) {
        std::vector<std::vector<int>> next;
        for (const auto& t : out) {
            for (int v = 0; v < levels; ++v) {
                auto u = t;
                u.push_back(v);
                next.push_back(std::move(u));
            }
        }
        out = std::move(next);
    }
    return out;
}

Counts zeros(int levels) {
    return Counts(static_cast<std::size_t>(levels), std::vector<long long>(static_cast<std::size_t>(levels), 0));
}

double plog2p(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

std::map<std::vector<int>, long long> tspm_counts(const QuantizedStack& q, const Rect& rect,
                                                  const std::vector<int>& subset) {
    std::map<std::vector<int>, long long> h;
    for (const auto& tuple : all_tuples(q.levels(), static_cast<int>(subset.size()))) {
        long long n = 0;
        for (int r = rect.row0; r < rect.row1; ++r) {
            for (int c = rect.col0; c < rect.col1; ++c) {
                bool match = true;
                for (std::size_t k = 0; k < subset.size(); ++k) {
                    if (q.channel(subset[k])(r, c) != tuple[k]) match = false;
                }
                if (match) ++n;
            }
        }
        if (n > 0) h[tuple] = n;
    }
    return h;
}

Counts glcm_counts(const mprad::Grid<Level>& img, int levels, const Rect& rect, mprad::Offset offset) {
    // Unit direction vectors written out per angle, independent of Offset's accessors.
    int ur = 0, uc = 0;
    switch (offset.angle) {
        case 0: ur = 0; uc = 1; break;
        case 45: ur = -1; uc = 1; break;
        case 90: ur = -1; uc = 0; break;
        case 135: ur = -1; uc = -1; break;
    }
    Counts c = zeros(levels);
    for (int r1 = rect.row0; r1 < rect.row1; ++r1) {
        for (int c1 = rect.col0; c1 < rect.col1; ++c1) {
            for (int r2 = rect.row0; r2 < rect.row1; ++r2) {
                for (int c2 = rect.col0; c2 < rect.col1; ++c2) {
                    if (r2 - r1 == ur * offset.distance && c2 - c1 == uc * offset.distance) {
                        ++c[img(r1, c1)][img(r2, c2)];
                    }
                }
            }
        }
    }
    return c;
}

Counts tscm_counts(const QuantizedStack& q, const Rect& rect, mprad::Offset offset) {
    Counts sum = zeros(q.levels());
    for (int k = 0; k < q.channel_count(); ++k) {
        const Counts one = glcm_counts(q.channel(k), q.levels(), rect, offset);
        for (int i = 0; i < q.levels(); ++i) {
            for (int j = 0; j < q.levels(); ++j) sum[i][j] += one[i][j];
        }
    }
    return sum;
}

Counts tsrm_counts(const std::vector<int>& signature, int d, int levels) {
    Counts c = zeros(levels);
    const int n = static_cast<int>(signature.size());
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            if (l - k == d) ++c[signature[k]][signature[l]];
        }
    }
    return c;
}

Counts symmetrize(const Counts& c) {
    Counts s = c;
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = 0; j < c.size(); ++j) s[i][j] = c[i][j] + c[j][i];
    }
    return s;
}

long long total(const Counts& c) {
    long long t = 0;
    for (const auto& row : c) {
        for (long long v : row) t += v;
    }
    return t;
}

std::vector<double> haralick(const std::vector<double>& p, int g) {
    auto P = [&](int i, int j) { return p[static_cast<std::size_t>((i - 1) * g + (j - 1))]; };
    std::vector<double> px(g + 1, 0.0), py(g + 1, 0.0);
    for (int i = 1; i <= g; ++i) {
        for (int j = 1; j <= g; ++j) {
            px[i] += P(i, j);
            py[j] += P(i, j);
        }
    }
    double mux = 0, muy = 0;
    for (int i = 1; i <= g; ++i) {
        mux += i * px[i];
        muy += i * py[i];
    }
    double sx = 0, sy = 0;
    for (int i = 1; i <= g; ++i) {
        sx += (i - mux) * (i - mux) * px[i];
        sy += (i - muy) * (i - muy) * py[i];
    }
    sx = std::sqrt(sx);
    sy = std::sqrt(sy);

    std::vector<double> psum(2 * g + 1, 0.0), pdiff(g, 0.0);
    for (int i = 1; i <= g; ++i) {
        for (int j = 1; j <= g; ++j) {
            psum[i + j] += P(i, j);
            pdiff[std::abs(i - j)] += P(i, j);
        }
    }

    double autoc = 0, prom = 0, shade = 0, tend = 0, contrast = 0, dissim = 0, energy = 0, ent = 0, hom1 = 0,
           hom2 = 0, idmn = 0, idn = 0, invvar = 0, maxp = 0, var = 0, hxy1 = 0;
    for (int i = 1; i <= g; ++i) {
        for (int j = 1; j <= g; ++j) {
            const double v = P(i, j);
            const double s = i + j - mux - muy;
            autoc += i * j * v;
            prom += std::pow(s, 4) * v;
            shade += std::pow(s, 3) * v;
            tend += s * s * v;
            contrast += (i - j) * (i - j) * v;
            dissim += std::abs(i - j) * v;
            energy += v * v;
            ent -= plog2p(v);
            hom1 += v / (1.0 + std::abs(i - j));
            hom2 += v / (1.0 + (i - j) * (i - j));
            idmn += v / (1.0 + static_cast<double>((i - j) * (i - j)) / (g * g));
            idn += v / (1.0 + static_cast<double>(std::abs(i - j)) / g);
            if (i != j) invvar += v / ((i - j) * (i - j));
            maxp = std::max(maxp, v);
            var += (i - mux) * (i - mux) * v;
            if (v > 0) hxy1 -= v * std::log2(px[i] * py[j]);
        }
    }
    double corr = 1.0;
    if (sx >= 1e-10 && sy >= 1e-10) corr = std::clamp((autoc - mux * muy) / (sx * sy), -1.0, 1.0);

    double sum_avg = 0, sum_ent = 0;
    for (int k = 2; k <= 2 * g; ++k) {
        sum_avg += k * psum[k];
        sum_ent -= plog2p(psum[k]);
    }
    double sum_var = 0;
    for (int k = 2; k <= 2 * g; ++k) sum_var += (k - sum_avg) * (k - sum_avg) * psum[k];
    double diff_ent = 0;
    for (int k = 0; k < g; ++k) diff_ent -= plog2p(pdiff[k]);

    double hx = 0, hy = 0;
    for (int i = 1; i <= g; ++i) {
        hx -= plog2p(px[i]);
        hy -= plog2p(py[i]);
    }
    // IMC2 in natural units, straight from the double sum.
    double hxy_nat = 0, hxy2_nat = 0;
    for (int i = 1; i <= g; ++i) {
        for (int j = 1; j <= g; ++j) {
            if (P(i, j) > 0) hxy_nat -= P(i, j) * std::log(P(i, j));
            const double q = px[i] * py[j];
            if (q > 0) hxy2_nat -= q * std::log(q);
        }
    }
    double imc1 = 0, imc2 = 0;
    if (std::max(hx, hy) > 0) {
        imc1 = (ent - hxy1) / std::max(hx, hy);
        imc2 = std::sqrt(std::max(0.0, 1.0 - std::exp(-2.0 * (hxy2_nat - hxy_nat))));
    }
    return {autoc, prom,   shade, tend,   contrast, corr, diff_ent, dissim,  energy,  ent,     hom1,
            hom2,  imc1,   imc2,  idmn,   idn,      invvar, maxp,   sum_avg, sum_ent, sum_var, var};
}

double entropy_bits(const std::map<std::vector<int>, long long>& h) {
    long long n = 0;
    for (const auto& [_, c] : h) n += c;
    double e = 0;
    for (const auto& [_, c] : h) e -= plog2p(static_cast<double>(c) / static_cast<double>(n));
    return e;
}

double mutual_information_2(const QuantizedStack& q, const Rect& rect, int a, int b) {
    const auto joint = tspm_counts(q, rect, {a, b});
    const auto ma = tspm_counts(q, rect, {a});
    const auto mb = tspm_counts(q, rect, {b});
    const double n = static_cast<double>(rect.area());
    double mi = 0;
    for (const auto& [t, c] : joint) {
        const double pxy = c / n;
        const double pa = ma.at({t[0]}) / n;
        const double pb = mb.at({t[1]}) / n;
        mi += pxy * std::log2(pxy / (pa * pb));
    }
    return mi;
}

double mutual_information_3(const QuantizedStack& q, const Rect& rect) {
    // I(X;Y|Z) = sum p(x,y,z) log p(z) p(x,y,z) / (p(x,z) p(y,z))
    const auto xyz = tspm_counts(q, rect, {0, 1, 2});
    const auto xz = tspm_counts(q, rect, {0, 2});
    const auto yz = tspm_counts(q, rect, {1, 2});
    const auto z = tspm_counts(q, rect, {2});
    const double n = static_cast<double>(rect.area());
    double cond = 0;
    for (const auto& [t, c] : xyz) {
        const double p = c / n;
        cond += p * std::log2(z.at({t[2]}) / n * p / (xz.at({t[0], t[2]}) / n * (yz.at({t[1], t[2]}) / n)));
    }
    return mutual_information_2(q, rect, 0, 1) - cond;
}

double pairwise_auc(const std::vector<double>& scores, const std::vector<int>& labels) {
    double wins = 0;
    double pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j] != 0) continue;
            pairs += 1;
            if (scores[i] > scores[j]) wins += 1;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / pairs;
}

mprad::MultiParametricStack random_raw_stack(std::mt19937_64& rng, int width, int height, int channels,
                                             int max_value) {
    std::uniform_int_distribution<int> dist(0, max_value);
    std::vector<mprad::Grid<double>> grids;
    for (int k = 0; k < channels; ++k) {
        mprad::Grid<double> g(width, height);
        for (double& v : g.values()) v = dist(rng);
        grids.push_back(std::move(g));
    }
    return mprad::MultiParametricStack(std::move(grids), {});
}

QuantizedStack random_stack(std::mt19937_64& rng, int width, int height, int channels, int levels) {
    return mprad::quantize(random_raw_stack(rng, width, height, channels, levels - 1), levels);
}

}  // namespace oracle
