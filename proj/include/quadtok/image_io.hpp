#pragma once

// PNG and JPEG decoding, PNG encoding. Requires linking libpng and libjpeg.

#include <png.h>

#include <algorithm>
#include <array>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <string>
#include <vector>

// jpeglib.h expects FILE and size_t to be declared first.
#include <jpeglib.h>

#include "quadtok/error.hpp"
#include "quadtok/raster.hpp"

namespace quadtok {

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("cannot read '" + path.string() + "'");
  }
  return bytes;
}

inline bool has_png_magic(const std::vector<std::uint8_t>& b) {
  static constexpr std::array<std::uint8_t, 8> kMagic = {0x89, 'P', 'N', 'G',
                                                         0x0D, 0x0A, 0x1A, 0x0A};
  return b.size() >= kMagic.size() && std::equal(kMagic.begin(), kMagic.end(), b.begin());
}

inline bool has_jpeg_magic(const std::vector<std::uint8_t>& b) {
  return b.size() >= 3 && b[0] == 0xFF && b[1] == 0xD8 && b[2] == 0xFF;
}

inline RgbImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    std::string msg = image.message;
    png_image_free(&image);
    throw DecodeError("'" + name + "': " + msg);
  }
  // 8-bit RGBA output is not premultiplied, so dropping the fourth channel
  // discards alpha without compositing.
  image.format = PNG_FORMAT_RGBA;
  if (image.width < 1 || image.height < 1) {
    png_image_free(&image);
    throw DecodeError("'" + name + "': empty PNG");
  }
  std::vector<std::uint8_t> rgba(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, rgba.data(), 0, nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw DecodeError("'" + name + "': " + msg);
  }
  const std::size_t n = std::size_t{image.width} * image.height;
  std::vector<std::uint8_t> pixels(3 * n);
  for (std::size_t i = 0; i < n; ++i) {
    pixels[3 * i] = rgba[4 * i];
    pixels[3 * i + 1] = rgba[4 * i + 1];
    pixels[3 * i + 2] = rgba[4 * i + 2];
  }
  return RgbImage(static_cast<int>(image.width), static_cast<int>(image.height),
                  std::move(pixels));
}

struct JpegErrorManager {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
  bool corrupt;
};

extern "C" inline void quadtok_jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

// Warnings (level -1) flag corrupt data such as a premature end of stream.
extern "C" inline void quadtok_jpeg_emit(j_common_ptr cinfo, int level) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  if (level < 0 && !err->corrupt) {
    (*cinfo->err->format_message)(cinfo, err->message);
    err->corrupt = true;
  }
}

struct JpegDecodeState {
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  std::vector<std::uint8_t> pixels;
  int width = 0;
  int height = 0;
};

// Kept free of objects with non-trivial destructors between setjmp and longjmp.
inline bool decode_jpeg_into(JpegDecodeState& st, const std::vector<std::uint8_t>& bytes) {
  st.cinfo.err = jpeg_std_error(&st.err.pub);
  st.err.pub.error_exit = quadtok_jpeg_error_exit;
  st.err.pub.emit_message = quadtok_jpeg_emit;
  st.err.corrupt = false;
  if (setjmp(st.err.jump)) {
    jpeg_destroy_decompress(&st.cinfo);
    return false;
  }
  jpeg_create_decompress(&st.cinfo);
  jpeg_mem_src(&st.cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&st.cinfo, TRUE);
  st.cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&st.cinfo);
  st.width = static_cast<int>(st.cinfo.output_width);
  st.height = static_cast<int>(st.cinfo.output_height);
  st.pixels.resize(std::size_t{3} * st.cinfo.output_width * st.cinfo.output_height);
  while (st.cinfo.output_scanline < st.cinfo.output_height) {
    JSAMPROW row = st.pixels.data() + std::size_t{3} * st.cinfo.output_width *
                                          st.cinfo.output_scanline;
    jpeg_read_scanlines(&st.cinfo, &row, 1);
  }
  jpeg_finish_decompress(&st.cinfo);
  jpeg_destroy_decompress(&st.cinfo);
  return !st.err.corrupt;
}

inline RgbImage decode_jpeg(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  auto st = std::make_unique<JpegDecodeState>();
  if (!decode_jpeg_into(*st, bytes)) {
    throw DecodeError("'" + name + "': " + st->err.message);
  }
  if (st->width < 1 || st->height < 1) {
    throw DecodeError("'" + name + "': empty JPEG");
  }
  return RgbImage(st->width, st->height, std::move(st->pixels));
}

}  // namespace detail

/// Decodes a PNG or JPEG file to 8-bit RGB. Format is sniffed from the content.
inline RgbImage load_image(const std::filesystem::path& path) {
  const auto bytes = detail::read_file_bytes(path);
  const std::string name = path.string();
  if (detail::has_png_magic(bytes)) {
    return detail::decode_png(bytes, name);
  }
  if (detail::has_jpeg_magic(bytes)) {
    return detail::decode_jpeg(bytes, name);
  }
  throw DecodeError("'" + name + "': not a PNG or JPEG file");
}

inline void save_png(const RgbImage& img, const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.pixels().data(), 0,
                               nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot write '" + path.string() + "': " + msg);
  }
}

inline void save_png(const GrayImage& img, const std::filesystem::path& path) {
  RgbImage rgb(img.width(), img.height());
  auto src = img.pixels();
  auto dst = rgb.pixels();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  }
  save_png(rgb, path);
}

/// Writes a baseline JPEG. Used by tests to exercise the JPEG decode path.
inline void save_jpeg(const RgbImage& img, const std::filesystem::path& path, int quality = 95) {
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) {
    throw IoError("cannot write '" + path.string() + "'");
  }
  jpeg_compress_struct cinfo{};
  jpeg_error_mgr jerr{};
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  jpeg_stdio_dest(&cinfo, fp);
  cinfo.image_width = static_cast<JDIMENSION>(img.width());
  cinfo.image_height = static_cast<JDIMENSION>(img.height());
  cinfo.input_components = 3;
  cinfo.in_color_space = JCS_RGB;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  jpeg_start_compress(&cinfo, TRUE);
  while (cinfo.next_scanline < cinfo.image_height) {
    auto* row = const_cast<JSAMPLE*>(img.at(0, static_cast<int>(cinfo.next_scanline)));
    jpeg_write_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::fclose(fp);
}

}  // namespace quadtok
