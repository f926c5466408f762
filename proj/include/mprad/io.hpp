#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "mprad/grid.hpp"
#include "mprad/stack.hpp"

namespace mprad::io {

struct GrayImage {
    Grid<std::uint16_t> pixels;
    int bit_depth = 8;  // 8 or 16
};

/// Binary PGM (P5), maxval <= 65535. 16-bit samples are big-endian.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Grayscale PNG, 8 or 16 bit. Colour or palette images are rejected.
GrayImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const GrayImage& image);

/// Dispatch on file magic (P5 or PNG signature).
GrayImage read_gray_image(const std::filesystem::path& path);

/// Manifest: {"channels": [{"name": str, "path": str}, ...]}. Relative paths
/// resolve against the manifest's directory.
MultiParametricStack load_stack(const std::filesystem::path& manifest_path);

void write_manifest(const std::filesystem::path& manifest_path,
                    const std::vector<std::pair<std::string, std::string>>& channels);

/// Label image; names come from an optional "<stem>.labels.json" side file
/// ({"1": "lesion", ...}).
RoiMask load_mask(const std::filesystem::path& path, const MultiParametricStack& stack);
RoiMask load_mask(const std::filesystem::path& path, int width, int height);

std::filesystem::path label_names_path(const std::filesystem::path& mask_path);

/// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace mprad::io
