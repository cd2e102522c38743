#ifndef MASKREFINE_CLI_IMAGE_IO_HPP
#define MASKREFINE_CLI_IMAGE_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "maskrefine/raster.hpp"

namespace maskrefine::cli {

/// Load a PNG (8-bit gray, gray+alpha, RGB or RGBA, non-interlaced) or
/// binary PGM as luminance in [0,1]. Color converts via 0.299R+0.587G+0.114B.
GrayImage read_gray(const std::string &path);

/// Load a mask file: luminance >= 128/255 is foreground.
BinaryMask read_mask(const std::string &path);

/// Write a mask as 0/255, PNG or PGM by file extension.
void write_mask(const std::string &path, const BinaryMask &mask);

void write_gray_png(const std::string &path, const GrayImage &image);

/// Interleaved 8-bit RGB.
void write_rgb_png(const std::string &path, int width, int height,
                   const std::vector<std::uint8_t> &rgb);

} // namespace maskrefine::cli

#endif
