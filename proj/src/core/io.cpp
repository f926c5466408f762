#include "mprad/io.hpp"

#include <png.h>

#include <array>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mprad/error.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace mprad::io {

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::random_device rd;
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(Errc::io, "cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error(Errc::io, "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error(Errc::io, "cannot rename onto " + path.string() + ": " + ec.message());
    }
}

// ---------------------------------------------------------------------------
// PGM

namespace {

// Reads the next header token, skipping whitespace and '#' comments.
std::string pgm_token(const std::string& buf, std::size_t& pos) {
    while (pos < buf.size()) {
        if (buf[pos] == '#') {
            while (pos < buf.size() && buf[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(buf[pos]))) {
            ++pos;
        } else {
            break;
        }
    }
    const std::size_t start = pos;
    while (pos < buf.size() && !std::isspace(static_cast<unsigned char>(buf[pos]))) ++pos;
    return buf.substr(start, pos - start);
}

int pgm_int(const std::string& buf, std::size_t& pos, const fs::path& path) {
    const std::string tok = pgm_token(buf, pos);
    try {
        std::size_t used = 0;
        const int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw Error(Errc::parse, "bad PGM header in " + path.string());
    }
}

}  // namespace

GrayImage read_pgm(const fs::path& path) {
    const std::string buf = read_text_file(path);
    std::size_t pos = 0;
    const std::string magic = pgm_token(buf, pos);
    if (magic != "P5") {
        throw Error(Errc::unsupported_format, path.string() + ": only binary PGM (P5) is supported");
    }
    const int w = pgm_int(buf, pos, path);
    const int h = pgm_int(buf, pos, path);
    const int maxval = pgm_int(buf, pos, path);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) {
        throw Error(Errc::parse, "bad PGM dimensions or maxval in " + path.string());
    }
    ++pos;  // single whitespace before raster
    const int bytes = maxval > 255 ? 2 : 1;
    const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * bytes;
    if (pos + need > buf.size()) throw Error(Errc::parse, "truncated PGM raster in " + path.string());

    GrayImage img{Grid<std::uint16_t>(w, h), bytes == 2 ? 16 : 8};
    auto px = img.pixels.values();
    const auto* raw = reinterpret_cast<const unsigned char*>(buf.data() + pos);
    for (std::size_t i = 0; i < px.size(); ++i) {
        px[i] = bytes == 2 ? static_cast<std::uint16_t>((raw[2 * i] << 8) | raw[2 * i + 1])
                           : static_cast<std::uint16_t>(raw[i]);
    }
    return img;
}

void write_pgm(const fs::path& path, const GrayImage& image) {
    const int w = image.pixels.width();
    const int h = image.pixels.height();
    const bool wide = image.bit_depth > 8;
    std::string out = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n" +
                      (wide ? "65535" : "255") + "\n";
    for (std::uint16_t v : image.pixels.values()) {
        if (wide) {
            out.push_back(static_cast<char>(v >> 8));
            out.push_back(static_cast<char>(v & 0xff));
        } else {
            if (v > 255) throw Error(Errc::out_of_range, "8-bit PGM sample exceeds 255");
            out.push_back(static_cast<char>(v));
        }
    }
    write_file_atomic(path, out);
}

// ---------------------------------------------------------------------------
// PNG

namespace {

struct PngReadState {
    const std::string* data;
    std::size_t offset;
};

void png_read_mem(png_structp png, png_bytep out, png_size_t len) {
    auto* st = static_cast<PngReadState*>(png_get_io_ptr(png));
    if (st->offset + len > st->data->size()) png_error(png, "truncated PNG");
    std::memcpy(out, st->data->data() + st->offset, len);
    st->offset += len;
}

void png_write_mem(png_structp png, png_bytep data, png_size_t len) {
    auto* out = static_cast<std::string*>(png_get_io_ptr(png));
    out->append(reinterpret_cast<const char*>(data), len);
}

void png_flush_noop(png_structp) {}

}  // namespace

GrayImage read_png(const fs::path& path) {
    const std::string buf = read_text_file(path);
    if (buf.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(buf.data()), 0, 8) != 0) {
        throw Error(Errc::unsupported_format, path.string() + ": not a PNG file");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(Errc::io, "libpng initialisation failed");
    }
    GrayImage img;
    std::string failure;
    std::vector<unsigned char> row;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw Error(Errc::parse, path.string() + ": corrupt PNG");
    }
    PngReadState st{&buf, 0};
    png_set_read_fn(png, &st, png_read_mem);
    png_read_info(png, info);
    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color != PNG_COLOR_TYPE_GRAY) {
        failure = path.string() + ": PNG must be single-channel grayscale";
    } else {
        if (depth < 8) {
            png_set_expand_gray_1_2_4_to_8(png);
            depth = 8;
        }
        png_read_update_info(png, info);
        img.bit_depth = depth;
        img.pixels = Grid<std::uint16_t>(static_cast<int>(w), static_cast<int>(h));
        row.resize(png_get_rowbytes(png, info));
        for (png_uint_32 r = 0; r < h; ++r) {
            png_read_row(png, row.data(), nullptr);
            auto dst = img.pixels.row(static_cast<int>(r));
            for (png_uint_32 c = 0; c < w; ++c) {
                dst[c] = depth == 16
                             ? static_cast<std::uint16_t>((row[2 * c] << 8) | row[2 * c + 1])
                             : static_cast<std::uint16_t>(row[c]);
            }
        }
        png_read_end(png, nullptr);
    }
    png_destroy_read_struct(&png, &info, nullptr);
    if (!failure.empty()) throw Error(Errc::unsupported_format, failure);
    return img;
}

void write_png(const fs::path& path, const GrayImage& image) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        png_destroy_write_struct(&png, &info);
        throw Error(Errc::io, "libpng initialisation failed");
    }
    std::string out;
    std::vector<unsigned char> row;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw Error(Errc::io, "PNG encoding failed for " + path.string());
    }
    const int depth = image.bit_depth > 8 ? 16 : 8;
    const int w = image.pixels.width();
    const int h = image.pixels.height();
    png_set_write_fn(png, &out, png_write_mem, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), depth,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    row.resize(static_cast<std::size_t>(w) * (depth / 8));
    for (int r = 0; r < h; ++r) {
        auto src = image.pixels.row(r);
        for (int c = 0; c < w; ++c) {
            if (depth == 16) {
                row[2 * c] = static_cast<unsigned char>(src[c] >> 8);
                row[2 * c + 1] = static_cast<unsigned char>(src[c] & 0xff);
            } else {
                row[c] = static_cast<unsigned char>(std::min<std::uint16_t>(src[c], 255));
            }
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    write_file_atomic(path, out);
}

GrayImage read_gray_image(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path.string());
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (in.gcount() >= 2 && magic[0] == 'P' && magic[1] == '5') return read_pgm(path);
    if (in.gcount() == 8 && png_sig_cmp(reinterpret_cast<png_const_bytep>(magic.data()), 0, 8) == 0) {
        return read_png(path);
    }
    throw Error(Errc::unsupported_format, path.string() + ": expected binary PGM or grayscale PNG");
}

// ---------------------------------------------------------------------------
// Manifest and masks

MultiParametricStack load_stack(const fs::path& manifest_path) {
    json doc;
    try {
        doc = json::parse(read_text_file(manifest_path));
    } catch (const json::exception& e) {
        throw Error(Errc::parse, manifest_path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("channels") || !doc["channels"].is_array() ||
        doc["channels"].empty()) {
        throw Error(Errc::parse, manifest_path.string() + ": manifest must list at least one channel");
    }
    const fs::path base = manifest_path.parent_path();
    std::vector<Grid<double>> channels;
    std::vector<std::string> names;
    for (const auto& entry : doc["channels"]) {
        if (!entry.is_object() || !entry.contains("path") || !entry["path"].is_string()) {
            throw Error(Errc::parse, manifest_path.string() + ": channel entry needs a \"path\"");
        }
        fs::path p = entry["path"].get<std::string>();
        if (p.is_relative()) p = base / p;
        if (!fs::exists(p)) throw Error(Errc::io, "missing channel image " + p.string());
        const GrayImage img = read_gray_image(p);
        Grid<double> ch(img.pixels.width(), img.pixels.height());
        std::copy(img.pixels.values().begin(), img.pixels.values().end(), ch.values().begin());
        if (!channels.empty() &&
            !ch.same_shape(channels.front().width(), channels.front().height())) {
            throw Error(Errc::dimension_mismatch,
                        p.string() + " is " + std::to_string(ch.width()) + "x" +
                            std::to_string(ch.height()) + ", first channel is " +
                            std::to_string(channels.front().width()) + "x" +
                            std::to_string(channels.front().height()));
        }
        names.push_back(entry.value("name", p.stem().string()));
        channels.push_back(std::move(ch));
    }
    return MultiParametricStack(std::move(channels), std::move(names));
}

void write_manifest(const fs::path& manifest_path,
                    const std::vector<std::pair<std::string, std::string>>& channels) {
    json doc;
    doc["channels"] = json::array();
    for (const auto& [name, path] : channels) doc["channels"].push_back({{"name", name}, {"path", path}});
    write_file_atomic(manifest_path, doc.dump(2) + "\n");
}

fs::path label_names_path(const fs::path& mask_path) {
    fs::path p = mask_path;
    p.replace_extension(".labels.json");
    return p;
}

RoiMask load_mask(const fs::path& path, int width, int height) {
    const GrayImage img = read_gray_image(path);
    if (!img.pixels.same_shape(width, height)) {
        throw Error(Errc::dimension_mismatch,
                    "mask " + path.string() + " is " + std::to_string(img.pixels.width()) + "x" +
                        std::to_string(img.pixels.height()) + ", stack is " +
                        std::to_string(width) + "x" + std::to_string(height));
    }
    Grid<int> labels(width, height);
    std::copy(img.pixels.values().begin(), img.pixels.values().end(), labels.values().begin());

    std::map<int, std::string> names;
    const fs::path side = label_names_path(path);
    if (fs::exists(side)) {
        try {
            const json doc = json::parse(read_text_file(side));
            for (const auto& [key, value] : doc.items()) names[std::stoi(key)] = value.get<std::string>();
        } catch (const std::exception& e) {
            throw Error(Errc::parse, side.string() + ": " + e.what());
        }
    }
    return RoiMask(std::move(labels), std::move(names));
}

RoiMask load_mask(const fs::path& path, const MultiParametricStack& stack) {
    return load_mask(path, stack.width(), stack.height());
}

}  // namespace mprad::io
