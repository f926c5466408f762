#pragma once

#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>

#include "mprad/error.hpp"
#include "mprad/grid.hpp"

namespace test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("mprad-test-" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

template <class T>
mprad::Grid<T> grid(int width, int height, std::initializer_list<T> values) {
    mprad::Grid<T> g(width, height);
    std::size_t i = 0;
    for (T v : values) g.values()[i++] = v;
    return g;
}

}  // namespace test

#define CHECK_ERRC(expr, errc)                                         \
    do {                                                               \
        try {                                                          \
            (void)(expr);                                              \
            FAIL("expected mprad::Error " #errc);                      \
        } catch (const mprad::Error& e) {                              \
            CHECK(e.code() == (errc));                                 \
        }                                                              \
    } while (0)
