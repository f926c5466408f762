#include "mprad/region.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "mprad/error.hpp"

namespace mprad {

Region Region::window(Position center, int window) {
    const int half = window / 2;
    return rect({center.row - half, center.col - half, center.row + half + 1,
                 center.col + half + 1});
}

Region Region::masked(const RoiMask& mask, int label) {
    Rect box{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(), 0, 0};
    const auto& labels = mask.labels();
    bool any = false;
    for (int r = 0; r < labels.height(); ++r) {
        for (int c = 0; c < labels.width(); ++c) {
            if (labels(r, c) != label) continue;
            any = true;
            box.row0 = std::min(box.row0, r);
            box.col0 = std::min(box.col0, c);
            box.row1 = std::max(box.row1, r + 1);
            box.col1 = std::max(box.col1, c + 1);
        }
    }
    if (!any) box = Rect{};
    return Region(box, &mask, label);
}

long long Region::voxel_count() const {
    if (mask_ == nullptr) return bounds_.area();
    long long n = 0;
    for (int r = bounds_.row0; r < bounds_.row1; ++r) {
        for (int c = bounds_.col0; c < bounds_.col1; ++c) n += contains(r, c) ? 1 : 0;
    }
    return n;
}

void Region::check_within(int width, int height) const {
    if (mask_ != nullptr && !mask_->labels().same_shape(width, height)) {
        throw Error(Errc::dimension_mismatch, "mask is " + std::to_string(mask_->width()) + "x" +
                                                  std::to_string(mask_->height()) +
                                                  ", stack is " + std::to_string(width) + "x" +
                                                  std::to_string(height));
    }
    if (bounds_.empty()) throw Error(Errc::empty_region, "region selects no voxels");
    if (bounds_.row0 < 0 || bounds_.col0 < 0 || bounds_.row1 > height || bounds_.col1 > width) {
        throw Error(Errc::out_of_range, "region extends outside the image");
    }
}

}  // namespace mprad
