#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>

#include "trpca/solver.hpp"
#include "trpca/tensor3.hpp"
#include "trpca/transform.hpp"

namespace trpca {

// Colour image as a height x width x 3 tensor (channels are frontal slices),
// values scaled to [0, 1]. maxval is the source sample range (255 for 8-bit).
struct ImageTensor {
  Tensor3 tensor;
  unsigned maxval = 255;

  std::size_t height() const { return tensor.n1(); }
  std::size_t width() const { return tensor.n2(); }
};

// Binary PPM (P6) with maxval up to 65535. Greyscale PNM files are rejected
// with kUnsupportedFormat since the pipeline needs three channels.
ImageTensor load_image(const std::filesystem::path& path);
void save_image(const ImageTensor& img, const std::filesystem::path& path);

// Wraps a tensor with values in [0, 1]; throws unless n3 == 3.
ImageTensor make_image(Tensor3 tensor, unsigned maxval = 255);

struct CorruptedImage {
  ImageTensor image;
  Tensor3 mask;  // 1 at every corrupted entry, 0 elsewhere
  std::size_t pixels = 0;
};

// Replaces round(fraction * height * width) distinct pixels (all three
// channels) by independent uniform samples from {0, ..., maxval} / maxval.
CorruptedImage corrupt(const ImageTensor& img, double fraction,
                       std::uint64_t seed);

// 10 log10(peak^2 / mse) with peak = max|reference|. Returns +infinity when the
// two agree exactly. Note the asymmetry: only the reference sets the peak.
double psnr(const Tensor3& estimate, const Tensor3& reference);
double psnr(const ImageTensor& estimate, const ImageTensor& reference);

struct DenoiseResult {
  ImageTensor recovered;  // low-rank component clamped to [0, 1]
  TrpcaSolution solution;
};

DenoiseResult denoise(const ImageTensor& img, const Transform& t,
                      const SolverConfig& solver_cfg = {});

}  // namespace trpca
