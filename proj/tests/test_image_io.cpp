#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "quadtok/image_io.hpp"

using namespace quadtok;
namespace fs = std::filesystem;

namespace {

class ImageIoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("quadtok_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

void write_rgba_png(const fs::path& p, int w, int h, const std::vector<std::uint8_t>& rgba) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(w);
  image.height = static_cast<png_uint_32>(h);
  image.format = PNG_FORMAT_RGBA;
  ASSERT_TRUE(png_image_write_to_file(&image, p.string().c_str(), 0, rgba.data(), 0, nullptr));
}

}  // namespace

TEST_F(ImageIoTest, OnePixelWhitePng) {
  RgbImage img(1, 1);
  img.set(0, 0, 255, 255, 255);
  save_png(img, path("white.png"));
  const auto back = load_image(path("white.png"));
  EXPECT_EQ(back.width(), 1);
  EXPECT_EQ(back.height(), 1);
  EXPECT_EQ(std::vector<std::uint8_t>(back.pixels().begin(), back.pixels().end()),
            (std::vector<std::uint8_t>{255, 255, 255}));
}

TEST_F(ImageIoTest, SmallPngRoundTripsExactly) {
  RgbImage img(2, 3);
  std::uint8_t v = 0;
  for (auto& p : img.pixels()) p = v += 13;
  save_png(img, path("known.png"));
  EXPECT_EQ(load_image(path("known.png")), img);
}

TEST_F(ImageIoTest, AlphaChannelIsDropped) {
  // Semi-transparent and fully transparent pixels keep their color channels.
  write_rgba_png(path("rgba.png"), 2, 1, {10, 20, 30, 0, 200, 100, 50, 128});
  const auto img = load_image(path("rgba.png"));
  EXPECT_EQ(std::vector<std::uint8_t>(img.pixels().begin(), img.pixels().end()),
            (std::vector<std::uint8_t>{10, 20, 30, 200, 100, 50}));
}

TEST_F(ImageIoTest, GrayPngExpandsToRgb) {
  GrayImage g(3, 2, 0);
  g.at(2, 1) = 99;
  save_png(g, path("gray.png"));
  const auto img = load_image(path("gray.png"));
  EXPECT_EQ(img.at(2, 1)[0], 99);
  EXPECT_EQ(img.at(2, 1)[1], 99);
  EXPECT_EQ(img.at(2, 1)[2], 99);
}

TEST_F(ImageIoTest, TruncatedPngIsDecodeError) {
  RgbImage img(40, 40);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(std::rand() & 0xFF);
  save_png(img, path("full.png"));
  std::ifstream in(path("full.png"), std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::ofstream(path("cut.png"), std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  EXPECT_THROW(load_image(path("cut.png")), DecodeError);
}

TEST_F(ImageIoTest, JpegDecodes) {
  RgbImage img(32, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 32; ++x) img.set(x, y, 200, 60, 30);
  save_jpeg(img, path("flat.jpg"));
  const auto back = load_image(path("flat.jpg"));
  ASSERT_EQ(back.width(), 32);
  ASSERT_EQ(back.height(), 16);
  // Lossy, but a flat color survives within a few levels.
  EXPECT_NEAR(back.at(5, 5)[0], 200, 4);
  EXPECT_NEAR(back.at(5, 5)[1], 60, 4);
  EXPECT_NEAR(back.at(5, 5)[2], 30, 4);
}

TEST_F(ImageIoTest, TruncatedJpegIsDecodeError) {
  std::ofstream(path("bad.jpg"), std::ios::binary) << std::string("\xFF\xD8\xFF\xE0\x00\x10JFIF", 10);
  EXPECT_THROW(load_image(path("bad.jpg")), DecodeError);
}

TEST_F(ImageIoTest, JpegCutMidScanIsDecodeError) {
  RgbImage img(64, 64);
  for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(std::rand() & 0xFF);
  save_jpeg(img, path("noise.jpg"));
  std::ifstream in(path("noise.jpg"), std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::ofstream(path("cut.jpg"), std::ios::binary) << bytes.substr(0, bytes.size() * 2 / 3);
  EXPECT_THROW(load_image(path("cut.jpg")), DecodeError);
}

TEST_F(ImageIoTest, UnknownFormatIsDecodeError) {
  std::ofstream(path("x.png")) << "GIF89a not really";
  EXPECT_THROW(load_image(path("x.png")), DecodeError);
}

TEST_F(ImageIoTest, MissingFileIsIoError) {
  EXPECT_THROW(load_image(path("does_not_exist.png")), IoError);
}
