#include "maskrefine/cli/image_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace maskrefine::cli {

namespace {

std::vector<std::uint8_t> read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string &path, const std::vector<std::uint8_t> &bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("short write to " + path);
}

bool has_suffix(const std::string &path, const std::string &suffix) {
    if (path.size() < suffix.size()) return false;
    std::string tail = path.substr(path.size() - suffix.size());
    std::transform(tail.begin(), tail.end(), tail.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return tail == suffix;
}

// ---- PNG ----------------------------------------------------------------

constexpr std::uint8_t kPngSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

std::uint32_t be32(const std::uint8_t *p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) | (std::uint32_t(p[2]) << 8) |
           std::uint32_t(p[3]);
}

void push_be32(std::vector<std::uint8_t> &out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

struct DecodedPng {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> pixels; // interleaved, unfiltered
};

std::uint8_t paeth(int a, int b, int c) {
    const int p = a + b - c;
    const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return static_cast<std::uint8_t>(a);
    if (pb <= pc) return static_cast<std::uint8_t>(b);
    return static_cast<std::uint8_t>(c);
}

DecodedPng decode_png(const std::vector<std::uint8_t> &bytes, const std::string &path) {
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0)
        throw std::runtime_error(path + ": not a PNG file");

    DecodedPng png;
    int bit_depth = 0, color_type = 0;
    std::vector<std::uint8_t> idat;
    std::size_t pos = 8;
    bool saw_end = false;
    while (pos + 8 <= bytes.size() && !saw_end) {
        const std::uint32_t length = be32(&bytes[pos]);
        if (pos + 12 + length > bytes.size()) throw std::runtime_error(path + ": truncated PNG");
        const char *type = reinterpret_cast<const char *>(&bytes[pos + 4]);
        const std::uint8_t *data = &bytes[pos + 8];
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (length != 13) throw std::runtime_error(path + ": bad IHDR");
            png.width = static_cast<int>(be32(data));
            png.height = static_cast<int>(be32(data + 4));
            bit_depth = data[8];
            color_type = data[9];
            if (data[12] != 0) throw std::runtime_error(path + ": interlaced PNG unsupported");
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), data, data + length);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            saw_end = true;
        }
        pos += 12 + length;
    }
    if (png.width <= 0 || png.height <= 0 || idat.empty())
        throw std::runtime_error(path + ": malformed PNG");
    if (bit_depth != 8) throw std::runtime_error(path + ": only 8-bit PNG supported");
    switch (color_type) {
    case 0: png.channels = 1; break;
    case 2: png.channels = 3; break;
    case 4: png.channels = 2; break;
    case 6: png.channels = 4; break;
    default: throw std::runtime_error(path + ": unsupported PNG color type");
    }

    const std::size_t stride = static_cast<std::size_t>(png.width) * png.channels;
    std::vector<std::uint8_t> raw(static_cast<std::size_t>(png.height) * (stride + 1));
    uLongf raw_len = static_cast<uLongf>(raw.size());
    if (uncompress(raw.data(), &raw_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
        raw_len != raw.size())
        throw std::runtime_error(path + ": PNG inflate failed");

    png.pixels.resize(static_cast<std::size_t>(png.height) * stride);
    const int bpp = png.channels;
    for (int y = 0; y < png.height; ++y) {
        const std::uint8_t *src = &raw[static_cast<std::size_t>(y) * (stride + 1)];
        const std::uint8_t filter = src[0];
        std::uint8_t *cur = &png.pixels[static_cast<std::size_t>(y) * stride];
        const std::uint8_t *up = y > 0 ? cur - stride : nullptr;
        for (std::size_t x = 0; x < stride; ++x) {
            const int a = x >= static_cast<std::size_t>(bpp) ? cur[x - bpp] : 0;
            const int b = up ? up[x] : 0;
            const int c = (up && x >= static_cast<std::size_t>(bpp)) ? up[x - bpp] : 0;
            int v = src[1 + x];
            switch (filter) {
            case 0: break;
            case 1: v += a; break;
            case 2: v += b; break;
            case 3: v += (a + b) / 2; break;
            case 4: v += paeth(a, b, c); break;
            default: throw std::runtime_error(path + ": bad PNG filter type");
            }
            cur[x] = static_cast<std::uint8_t>(v & 0xff);
        }
    }
    return png;
}

void append_chunk(std::vector<std::uint8_t> &out, const char type[4],
                  const std::vector<std::uint8_t> &data) {
    push_be32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t type_at = out.size();
    out.insert(out.end(), type, type + 4);
    out.insert(out.end(), data.begin(), data.end());
    const uLong crc =
        crc32(0, out.data() + type_at, static_cast<uInt>(4 + data.size()));
    push_be32(out, static_cast<std::uint32_t>(crc));
}

void encode_png(const std::string &path, int width, int height, int channels,
                const std::vector<std::uint8_t> &pixels) {
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(height) * (stride + 1));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0); // filter: none
        const std::uint8_t *row = &pixels[static_cast<std::size_t>(y) * stride];
        raw.insert(raw.end(), row, row + stride);
    }
    std::vector<std::uint8_t> compressed(compressBound(static_cast<uLong>(raw.size())));
    uLongf comp_len = static_cast<uLongf>(compressed.size());
    if (compress2(compressed.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw std::runtime_error(path + ": PNG deflate failed");
    compressed.resize(comp_len);

    std::vector<std::uint8_t> out(kPngSignature, kPngSignature + 8);
    std::vector<std::uint8_t> ihdr;
    push_be32(ihdr, static_cast<std::uint32_t>(width));
    push_be32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);
    ihdr.push_back(channels == 1 ? 0 : 2);
    ihdr.push_back(0);
    ihdr.push_back(0);
    ihdr.push_back(0);
    append_chunk(out, "IHDR", ihdr);
    append_chunk(out, "IDAT", compressed);
    append_chunk(out, "IEND", {});
    write_file(path, out);
}

// ---- PGM ----------------------------------------------------------------

struct DecodedPgm {
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint8_t> pixels;
};

DecodedPgm decode_pgm(const std::vector<std::uint8_t> &bytes, const std::string &path) {
    std::size_t pos = 0;
    auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    };
    auto read_int = [&] {
        skip_space();
        int v = 0;
        bool any = false;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos] - '0');
            ++pos;
            any = true;
        }
        if (!any) throw std::runtime_error(path + ": malformed PGM header");
        return v;
    };

    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw std::runtime_error(path + ": not a binary PGM file");
    pos = 2;
    DecodedPgm pgm;
    pgm.width = read_int();
    pgm.height = read_int();
    pgm.maxval = read_int();
    if (pgm.width <= 0 || pgm.height <= 0 || pgm.maxval <= 0 || pgm.maxval > 255)
        throw std::runtime_error(path + ": unsupported PGM header");
    ++pos; // single whitespace after maxval
    const std::size_t need = static_cast<std::size_t>(pgm.width) * pgm.height;
    if (bytes.size() < pos + need) throw std::runtime_error(path + ": truncated PGM");
    pgm.pixels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
                      bytes.begin() + static_cast<std::ptrdiff_t>(pos + need));
    return pgm;
}

void encode_pgm(const std::string &path, int width, int height,
                const std::vector<std::uint8_t> &pixels) {
    std::vector<std::uint8_t> out;
    const std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), pixels.begin(), pixels.end());
    write_file(path, out);
}

// luminance bytes in [0,255] regardless of source format
std::vector<std::uint8_t> read_luminance(const std::string &path, int &width, int &height) {
    if (has_suffix(path, ".pgm")) {
        const DecodedPgm pgm = decode_pgm(read_file(path), path);
        width = pgm.width;
        height = pgm.height;
        if (pgm.maxval == 255) return pgm.pixels;
        std::vector<std::uint8_t> out(pgm.pixels.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = static_cast<std::uint8_t>(pgm.pixels[i] * 255 / pgm.maxval);
        return out;
    }
    const DecodedPng png = decode_png(read_file(path), path);
    width = png.width;
    height = png.height;
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * height);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const std::uint8_t *px = &png.pixels[i * png.channels];
        if (png.channels <= 2) {
            out[i] = px[0];
        } else {
            const double y = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
            out[i] = static_cast<std::uint8_t>(std::lround(y));
        }
    }
    return out;
}

} // namespace

GrayImage read_gray(const std::string &path) {
    int w = 0, h = 0;
    const std::vector<std::uint8_t> lum = read_luminance(path, w, h);
    GrayImage img(w, h);
    for (std::size_t i = 0; i < lum.size(); ++i) img.data[i] = static_cast<float>(lum[i]) / 255.0f;
    return img;
}

BinaryMask read_mask(const std::string &path) {
    int w = 0, h = 0;
    const std::vector<std::uint8_t> lum = read_luminance(path, w, h);
    BinaryMask mask(w, h);
    for (std::size_t i = 0; i < lum.size(); ++i) mask.data[i] = lum[i] >= 128 ? 1 : 0;
    return mask;
}

void write_mask(const std::string &path, const BinaryMask &mask) {
    std::vector<std::uint8_t> bytes(mask.data.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.data[i] ? 255 : 0;
    if (has_suffix(path, ".pgm"))
        encode_pgm(path, mask.width, mask.height, bytes);
    else
        encode_png(path, mask.width, mask.height, 1, bytes);
}

void write_gray_png(const std::string &path, const GrayImage &image) {
    std::vector<std::uint8_t> bytes(image.data.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const float v = std::clamp(image.data[i], 0.0f, 1.0f);
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
    }
    encode_png(path, image.width, image.height, 1, bytes);
}

void write_rgb_png(const std::string &path, int width, int height,
                   const std::vector<std::uint8_t> &rgb) {
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
        throw std::invalid_argument(path + ": RGB buffer size mismatch");
    encode_png(path, width, height, 3, rgb);
}

} // namespace maskrefine::cli
