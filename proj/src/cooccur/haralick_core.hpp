#pragma once

// Sparse evaluation of the Haralick battery, shared by the public
// `haralick()` and the sliding-window kernels so both produce identical bits
// for identical counts.

#include <cstdint>
#include <span>
#include <vector>

#include "mprad/cooccur.hpp"

namespace mprad::detail {

struct CellProbability {
    int row;
    int col;
    double p;
};

class HaralickScratch {
public:
    explicit HaralickScratch(int levels = 0) { resize(levels); }
    void resize(int levels);
    int levels() const noexcept { return levels_; }

    HaralickFeatures evaluate(std::span<const CellProbability> cells);

private:
    int levels_ = 0;
    std::vector<double> px_, py_, psum_, pdiff_;
};

/// Integer co-occurrence accumulator over a dense G x G array that only
/// clears the cells it touched. Cells are emitted in row-major order.
class CooccurrenceAccumulator {
public:
    explicit CooccurrenceAccumulator(int levels = 0) { resize(levels); }
    void resize(int levels);
    int levels() const noexcept { return levels_; }

    void add(int m, int n) {
        const std::size_t idx = static_cast<std::size_t>(m) * static_cast<std::size_t>(levels_) +
                                static_cast<std::size_t>(n);
        if (counts_[idx]++ == 0) touched_.push_back(static_cast<std::uint32_t>(idx));
        ++total_;
    }
    void add_symmetric(int m, int n) {
        add(m, n);
        add(n, m);
    }

    std::uint64_t total() const noexcept { return total_; }

    /// Normalized cells in row-major order; resets the accumulator.
    void drain(std::vector<CellProbability>& out);

private:
    int levels_ = 0;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint32_t> touched_;
    std::uint64_t total_ = 0;
};

/// Row-major non-zero cells of a normalized dense matrix.
void collect_cells(const CooccurrenceMatrix& m, std::vector<CellProbability>& out);

}  // namespace mprad::detail
