#pragma once

#include "mprad/grid.hpp"
#include "mprad/stack.hpp"

namespace mprad {

/// Half-open rectangle [row0,row1) x [col0,col1).
struct Rect {
    int row0 = 0;
    int col0 = 0;
    int row1 = 0;
    int col1 = 0;

    bool contains(int r, int c) const noexcept {
        return r >= row0 && r < row1 && c >= col0 && c < col1;
    }
    bool empty() const noexcept { return row1 <= row0 || col1 <= col0; }
    long long area() const noexcept {
        return empty() ? 0 : static_cast<long long>(row1 - row0) * (col1 - col0);
    }
};

/// A set of voxels: a rectangle, optionally restricted to one mask label.
/// A masked region keeps a non-owning pointer; the mask must outlive it.
class Region {
public:
    static Region rect(Rect r) { return Region(r, nullptr, 0); }
    static Region window(Position center, int window);
    static Region whole(int width, int height) { return rect({0, 0, height, width}); }
    static Region masked(const RoiMask& mask, int label);

    bool contains(int r, int c) const noexcept {
        return bounds_.contains(r, c) && (mask_ == nullptr || mask_->labels()(r, c) == label_);
    }
    const Rect& bounds() const noexcept { return bounds_; }
    bool is_rect() const noexcept { return mask_ == nullptr; }

    long long voxel_count() const;

    // Throws Errc::out_of_range when the bounds leave a width x height grid,
    // Errc::empty_region when no voxel is selected.
    void check_within(int width, int height) const;

private:
    Region(Rect r, const RoiMask* mask, int label) : bounds_(r), mask_(mask), label_(label) {}

    Rect bounds_;
    const RoiMask* mask_ = nullptr;
    int label_ = 0;
};

}  // namespace mprad
