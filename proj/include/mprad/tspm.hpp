#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mprad/region.hpp"
#include "mprad/stack.hpp"

namespace mprad {

/// Sparse joint histogram of (possibly projected) tissue signatures.
///
/// Keys are level vectors of length `channels()` with entries < `levels()`.
/// Iteration order is lexicographic on the key, which fixes the order in
/// which the information measures accumulate.
class SparseJointHistogram {
public:
    using Key = std::vector<Level>;

    SparseJointHistogram(int channels, int levels) : channels_(channels), levels_(levels) {}

    void add(const Key& key, std::uint64_t count = 1);
    void merge(const SparseJointHistogram& other);

    int channels() const noexcept { return channels_; }
    int levels() const noexcept { return levels_; }
    std::uint64_t total() const noexcept { return total_; }
    std::size_t occupied() const noexcept { return counts_.size(); }
    const std::map<Key, std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t count(const Key& key) const;

    /// Counts in key order.
    std::vector<std::uint64_t> count_vector() const;

    friend bool operator==(const SparseJointHistogram&, const SparseJointHistogram&) = default;

private:
    int channels_;
    int levels_;
    std::uint64_t total_ = 0;
    std::map<Key, std::uint64_t> counts_;
};

/// Empty subset means "all channels". Throws Errc::empty_region,
/// Errc::out_of_range (bad channel index or region outside the grid).
SparseJointHistogram build_tspm(const QuantizedStack& q, const Region& region,
                                std::span<const int> channel_subset = {});

/// Shannon entropy (bits) and sum of squared probabilities of a count vector.
/// Zero counts contribute nothing. These are shared by every histogram path.
double entropy_bits(std::span<const std::uint64_t> counts, std::uint64_t total);
double uniformity(std::span<const std::uint64_t> counts, std::uint64_t total);

double tspm_entropy(const SparseJointHistogram& h);
double tspm_uniformity(const SparseJointHistogram& h);

/// Multivariate mutual information by inclusion-exclusion over every
/// non-empty sub-subset T of the chosen channels:
///   MI = sum_T (-1)^(|T|+1) H(T)
/// For two channels this is H(X1) + H(X2) - H(X1,X2). Requires >= 2 channels.
double tspm_mutual_information(const QuantizedStack& q, const Region& region,
                               std::span<const int> channel_subset = {});

/// Inclusion-exclusion given the joint entropy of every non-empty sub-subset,
/// indexed by bitmask (entry 0 unused).
double inclusion_exclusion(std::span<const double> subset_entropy);

struct SubsetFeatureRow {
    std::vector<int> subset;
    double entropy = 0.0;
    double uniformity = 0.0;
    std::optional<double> mutual_information;
};

/// All subsets of size 1..max_subset_size (in size-then-lexicographic order),
/// followed by the full channel set when it exceeds the cap.
std::vector<SubsetFeatureRow> subset_feature_sweep(const QuantizedStack& q, const Region& region,
                                                   int max_subset_size = 3);

/// CSV: subset_id,channel_names,H_bits,U,MI_bits (MI empty for singletons).
std::string subset_sweep_csv(const std::vector<SubsetFeatureRow>& rows,
                             const std::vector<std::string>& channel_names);

/// Resolve an empty subset to {0..N-1} and validate indices.
std::vector<int> resolve_channel_subset(std::span<const int> subset, int channel_count);

}  // namespace mprad
