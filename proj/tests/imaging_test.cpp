#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include <unistd.h>

#include "gtest/gtest.h"
#include "test_util.hpp"
#include "trpca/imaging.hpp"

namespace trpca {
namespace {

using testing::random_tensor;
using testing::rank3_image;

class ImageFileTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("trpca_img_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path write_bytes(const std::string& name, const std::string& bytes) {
    const auto p = dir_ / name;
    std::ofstream(p, std::ios::binary) << bytes;
    return p;
  }
  static std::string read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  std::filesystem::path dir_;
};

// 2 x 2 image, rows top to bottom, RGB triples.
const std::string kTiny = std::string("P6\n2 2\n255\n") +
                          std::string("\xff\x00\x00" "\x00\xff\x00"
                                      "\x00\x00\xff" "\x33\x66\x99", 12);

TEST_F(ImageFileTest, HandWrittenFixtureValues) {
  const ImageTensor img = load_image(write_bytes("tiny.ppm", kTiny));
  ASSERT_EQ(img.height(), 2u);
  ASSERT_EQ(img.width(), 2u);
  EXPECT_EQ(img.maxval, 255u);
  EXPECT_EQ(img.tensor(0, 0, 0), 1.0);
  EXPECT_EQ(img.tensor(0, 0, 1), 0.0);
  EXPECT_EQ(img.tensor(0, 1, 1), 1.0);
  EXPECT_EQ(img.tensor(1, 0, 2), 1.0);
  EXPECT_EQ(img.tensor(1, 1, 0), 0x33 / 255.0);
  EXPECT_EQ(img.tensor(1, 1, 1), 0x66 / 255.0);
  EXPECT_EQ(img.tensor(1, 1, 2), 0x99 / 255.0);
}

TEST_F(ImageFileTest, SaveLoadIsByteIdentical) {
  const auto src = write_bytes("tiny.ppm", kTiny);
  const auto copy = dir_ / "copy.ppm";
  save_image(load_image(src), copy);
  EXPECT_EQ(read_bytes(copy), kTiny);

  // A larger 16-bit fixture as well.
  ImageTensor wide = make_image(rank3_image(7, 5), 65535);
  const auto a = dir_ / "a.ppm", b = dir_ / "b.ppm";
  save_image(wide, a);
  save_image(load_image(a), b);
  EXPECT_EQ(read_bytes(a), read_bytes(b));
  EXPECT_EQ(load_image(a).maxval, 65535u);
}

TEST_F(ImageFileTest, HeaderCommentsAreSkipped) {
  const std::string with_comment = "P6\n# made by hand\n2 2\n255\n" + kTiny.substr(11);
  const ImageTensor img = load_image(write_bytes("c.ppm", with_comment));
  EXPECT_EQ(img.tensor(1, 1, 2), 0x99 / 255.0);
}

TEST_F(ImageFileTest, RejectsGreyscaleAndJunk) {
  try {
    load_image(write_bytes("g.pgm", std::string("P5\n2 2\n255\n\x01\x02\x03\x04", 15)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnsupportedFormat);
    EXPECT_NE(std::string(e.what()).find("3 colour channels"), std::string::npos);
  }
  EXPECT_THROW(load_image(write_bytes("j.ppm", "GIF89a")), Error);
  EXPECT_THROW(load_image(write_bytes("t.ppm", kTiny.substr(0, 15))), Error);
  EXPECT_THROW(load_image(dir_ / "missing.ppm"), Error);
  EXPECT_THROW(make_image(Tensor3(2, 2, 1)), Error);
}

TEST(Corrupt, FractionZeroAndOne) {
  const ImageTensor img = make_image(rank3_image(12, 9));
  const CorruptedImage none = corrupt(img, 0.0, 1);
  EXPECT_EQ(none.pixels, 0u);
  EXPECT_EQ(none.image.tensor, img.tensor);
  EXPECT_EQ(none.mask.norm(), 0.0);

  const CorruptedImage all = corrupt(img, 1.0, 1);
  EXPECT_EQ(all.pixels, 12u * 9u);
  for (double m : all.mask.data()) EXPECT_EQ(m, 1.0);
  EXPECT_THROW(corrupt(img, 1.5, 1), Error);
  EXPECT_THROW(corrupt(img, -0.1, 1), Error);
}

TEST(Corrupt, ExactPixelCountAndMaskDiscipline) {
  const ImageTensor img = make_image(rank3_image(100, 100));
  const CorruptedImage c = corrupt(img, 0.1, 77);
  EXPECT_EQ(c.pixels, 1000u);
  std::size_t pixels = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    for (std::size_t j = 0; j < 100; ++j) {
      const double m = c.mask(i, j, 0);
      EXPECT_EQ(m, c.mask(i, j, 1));
      EXPECT_EQ(m, c.mask(i, j, 2));
      pixels += m == 1.0;
      for (std::size_t k = 0; k < 3; ++k) {
        const double v = c.image.tensor(i, j, k);
        if (m == 0.0) {
          EXPECT_EQ(v, img.tensor(i, j, k));
        } else {
          EXPECT_GE(v, 0.0);
          EXPECT_LE(v, 1.0);
          EXPECT_NEAR(v * 255.0, std::round(v * 255.0), 1e-9);
        }
      }
    }
  }
  EXPECT_EQ(pixels, 1000u);
  EXPECT_EQ(corrupt(img, 0.1, 77).image.tensor, c.image.tensor);
}

// Two-pass mean squared error, then the dB formula.
double naive_psnr(const Tensor3& est, const Tensor3& ref) {
  double peak = 0.0;
  for (double v : ref.data()) peak = std::max(peak, std::abs(v));
  long double sum = 0.0L;
  for (std::size_t n = 0; n < ref.size(); ++n) {
    const long double d = est.data()[n] - ref.data()[n];
    sum += d * d;
  }
  const long double mse = sum / ref.size();
  return static_cast<double>(10.0L * std::log10(peak * (long double)peak / mse));
}

TEST(Psnr, ClosedForms) {
  const Tensor3 ref = random_tensor(4, 5, 3, 2);
  EXPECT_EQ(psnr(ref, ref), std::numeric_limits<double>::infinity());
  Tensor3 ones(3, 3, 3);
  for (double& v : ones.data()) v = 1.0;
  EXPECT_NEAR(psnr(Tensor3(3, 3, 3), ones), 0.0, 1e-12);
  EXPECT_THROW(psnr(ones, Tensor3(3, 3, 3)), Error);
  EXPECT_THROW(psnr(ones, Tensor3(3, 3, 2)), Error);
}

TEST(Psnr, MatchesNaiveOracle) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Tensor3 a = random_tensor(6, 7, 3, seed);
    const Tensor3 b = random_tensor(6, 7, 3, seed + 100, 0.3);
    EXPECT_NEAR(psnr(a, b), naive_psnr(a, b), 1e-9);
  }
}

TEST(Psnr, SwappingArgumentsChangesOnlyThePeak) {
  const Tensor3 a = random_tensor(5, 5, 3, 1);
  const Tensor3 b = 3.0 * random_tensor(5, 5, 3, 2);
  const double diff = psnr(a, b) - psnr(b, a);
  const double expected = 20.0 * std::log10(b.norm(NormKind::kLinf) / a.norm(NormKind::kLinf));
  EXPECT_NEAR(diff, expected, 1e-10);
}

TEST(Denoise, CleanLowRankImageIsPreserved) {
  const ImageTensor img = make_image(rank3_image(40, 40));
  const DenoiseResult res = denoise(img, Transform::dct(3));
  EXPECT_GT(psnr(res.recovered, img), 40.0);
  // Feasibility before clamping.
  EXPECT_LE(max_abs_diff(res.solution.low_rank + res.solution.sparse, img.tensor), 1e-8);
}

TEST(Denoise, RecoversFromTenPercentCorruption) {
  const ImageTensor img = make_image(rank3_image(60, 50));
  const CorruptedImage c = corrupt(img, 0.1, 3);
  const double before = psnr(c.image, img);
  const double dct = psnr(denoise(c.image, Transform::dct(3)).recovered, img);
  const double rom = psnr(denoise(c.image, Transform::random_orthogonal(3, 3)).recovered, img);
  EXPECT_GE(dct - before, 5.0);
  EXPECT_GE(dct, rom - 0.5);
  for (double v : denoise(c.image, Transform::dct(3)).recovered.tensor.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

}  // namespace
}  // namespace trpca
