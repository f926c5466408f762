#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mprad {

struct Position {
    int row = 0;
    int col = 0;

    friend bool operator==(const Position&, const Position&) = default;
};

/// Row-major 2D array with value semantics.
template <class T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    bool contains(int row, int col) const noexcept {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }
    bool contains(Position p) const noexcept { return contains(p.row, p.col); }

    T& operator()(int row, int col) noexcept { return data_[index(row, col)]; }
    const T& operator()(int row, int col) const noexcept { return data_[index(row, col)]; }
    T& operator[](Position p) noexcept { return (*this)(p.row, p.col); }
    const T& operator[](Position p) const noexcept { return (*this)(p.row, p.col); }

    std::span<T> row(int r) noexcept {
        return std::span<T>(data_).subspan(index(r, 0), static_cast<std::size_t>(width_));
    }
    std::span<const T> row(int r) const noexcept {
        return std::span<const T>(data_).subspan(index(r, 0), static_cast<std::size_t>(width_));
    }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    bool same_shape(int width, int height) const noexcept {
        return width_ == width && height_ == height;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    std::size_t index(int row, int col) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

}  // namespace mprad
