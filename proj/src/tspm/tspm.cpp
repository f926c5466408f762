#include "mprad/tspm.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mprad/error.hpp"

namespace mprad {

void SparseJointHistogram::add(const Key& key, std::uint64_t count) {
    if (static_cast<int>(key.size()) != channels_) {
        throw Error(Errc::invalid_argument, "histogram key length differs from channel count");
    }
    for (Level v : key) {
        if (v >= levels_) throw Error(Errc::out_of_range, "histogram key entry exceeds G-1");
    }
    counts_[key] += count;
    total_ += count;
}

void SparseJointHistogram::merge(const SparseJointHistogram& other) {
    if (other.channels_ != channels_ || other.levels_ != levels_) {
        throw Error(Errc::invalid_argument, "cannot merge histograms of different shape");
    }
    for (const auto& [key, n] : other.counts_) counts_[key] += n;
    total_ += other.total_;
}

std::uint64_t SparseJointHistogram::count(const Key& key) const {
    auto it = counts_.find(key);
    return it == counts_.end() ? 0 : it->second;
}

std::vector<std::uint64_t> SparseJointHistogram::count_vector() const {
    std::vector<std::uint64_t> out;
    out.reserve(counts_.size());
    for (const auto& [key, n] : counts_) out.push_back(n);
    return out;
}

std::vector<int> resolve_channel_subset(std::span<const int> subset, int channel_count) {
    std::vector<int> out;
    if (subset.empty()) {
        for (int k = 0; k < channel_count; ++k) out.push_back(k);
        return out;
    }
    std::vector<bool> seen(static_cast<std::size_t>(channel_count), false);
    for (int k : subset) {
        if (k < 0 || k >= channel_count) {
            throw Error(Errc::out_of_range, "channel index " + std::to_string(k) +
                                                " outside [0, " + std::to_string(channel_count) + ")");
        }
        if (seen[static_cast<std::size_t>(k)]) {
            throw Error(Errc::invalid_argument, "channel index " + std::to_string(k) + " repeated");
        }
        seen[static_cast<std::size_t>(k)] = true;
        out.push_back(k);
    }
    return out;
}

SparseJointHistogram build_tspm(const QuantizedStack& q, const Region& region,
                                std::span<const int> channel_subset) {
    const std::vector<int> channels = resolve_channel_subset(channel_subset, q.channel_count());
    region.check_within(q.width(), q.height());
    SparseJointHistogram h(static_cast<int>(channels.size()), q.levels());
    SparseJointHistogram::Key key(channels.size());
    const Rect& b = region.bounds();
    for (int r = b.row0; r < b.row1; ++r) {
        for (int c = b.col0; c < b.col1; ++c) {
            if (!region.contains(r, c)) continue;
            for (std::size_t i = 0; i < channels.size(); ++i) key[i] = q.channel(channels[i])(r, c);
            h.add(key);
        }
    }
    if (h.total() == 0) throw Error(Errc::empty_region, "region selects no voxels");
    return h;
}

double entropy_bits(std::span<const std::uint64_t> counts, std::uint64_t total) {
    if (total == 0) throw Error(Errc::empty_region, "entropy of an empty histogram");
    const double t = static_cast<double>(total);
    double h = 0.0;
    for (std::uint64_t n : counts) {
        if (n == 0) continue;
        const double p = static_cast<double>(n) / t;
        h -= p * std::log2(p);
    }
    // -0.0 for single-cell histograms
    return h == 0.0 ? 0.0 : h;
}

double uniformity(std::span<const std::uint64_t> counts, std::uint64_t total) {
    if (total == 0) throw Error(Errc::empty_region, "uniformity of an empty histogram");
    const double t = static_cast<double>(total);
    double u = 0.0;
    for (std::uint64_t n : counts) {
        const double p = static_cast<double>(n) / t;
        u += p * p;
    }
    return u;
}

double tspm_entropy(const SparseJointHistogram& h) {
    const auto counts = h.count_vector();
    return entropy_bits(counts, h.total());
}

double tspm_uniformity(const SparseJointHistogram& h) {
    const auto counts = h.count_vector();
    return uniformity(counts, h.total());
}

double inclusion_exclusion(std::span<const double> subset_entropy) {
    double mi = 0.0;
    for (std::size_t mask = 1; mask < subset_entropy.size(); ++mask) {
        const int size = std::popcount(mask);
        mi += (size % 2 == 1 ? 1.0 : -1.0) * subset_entropy[mask];
    }
    return mi;
}

double tspm_mutual_information(const QuantizedStack& q, const Region& region,
                               std::span<const int> channel_subset) {
    const std::vector<int> channels = resolve_channel_subset(channel_subset, q.channel_count());
    if (channels.size() < 2) {
        throw Error(Errc::invalid_argument, "mutual information needs at least two channels");
    }
    if (channels.size() > 20) {
        throw Error(Errc::invalid_argument, "mutual information limited to 20 channels");
    }
    const std::size_t subsets = std::size_t{1} << channels.size();
    std::vector<double> entropy(subsets, 0.0);
    std::vector<int> sub;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        sub.clear();
        for (std::size_t i = 0; i < channels.size(); ++i) {
            if (mask & (std::size_t{1} << i)) sub.push_back(channels[i]);
        }
        entropy[mask] = tspm_entropy(build_tspm(q, region, sub));
    }
    return inclusion_exclusion(entropy);
}

namespace {

// Visits all k-combinations of {0..n-1} in lexicographic order.
template <class F>
void for_each_combination(int n, int k, F&& visit) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        visit(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace

std::vector<SubsetFeatureRow> subset_feature_sweep(const QuantizedStack& q, const Region& region,
                                                   int max_subset_size) {
    const int n = q.channel_count();
    if (max_subset_size < 1) throw Error(Errc::invalid_argument, "subset size cap must be >= 1");
    if (max_subset_size > n) {
        throw Error(Errc::invalid_argument, "subset size cap " + std::to_string(max_subset_size) +
                                                " exceeds channel count " + std::to_string(n));
    }
    std::vector<SubsetFeatureRow> rows;
    auto emit = [&](const std::vector<int>& subset) {
        const SparseJointHistogram h = build_tspm(q, region, subset);
        SubsetFeatureRow row{subset, tspm_entropy(h), tspm_uniformity(h), std::nullopt};
        if (subset.size() >= 2) row.mutual_information = tspm_mutual_information(q, region, subset);
        rows.push_back(std::move(row));
    };
    for (int k = 1; k <= max_subset_size; ++k) for_each_combination(n, k, emit);
    if (max_subset_size < n) {
        std::vector<int> all(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) all[static_cast<std::size_t>(k)] = k;
        emit(all);
    }
    return rows;
}

std::string subset_sweep_csv(const std::vector<SubsetFeatureRow>& rows,
                             const std::vector<std::string>& channel_names) {
    std::ostringstream out;
    out << "subset_id,channel_names,H_bits,U,MI_bits\n";
    char buf[64];
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        out << i << ',';
        for (std::size_t j = 0; j < row.subset.size(); ++j) {
            if (j) out << '+';
            out << channel_names.at(static_cast<std::size_t>(row.subset[j]));
        }
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g,", row.entropy, row.uniformity);
        out << buf;
        if (row.mutual_information) {
            std::snprintf(buf, sizeof buf, "%.17g", *row.mutual_information);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace mprad
