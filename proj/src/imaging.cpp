#include "trpca/imaging.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "trpca/random.hpp"

namespace trpca {

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in) {
  std::string tok;
  int c = 0;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

unsigned header_number(std::istream& in, const std::filesystem::path& path) {
  const std::string tok = header_token(in);
  if (tok.empty() ||
      !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(c); }) ||
      tok.size() > 9) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": malformed PPM header");
  }
  return static_cast<unsigned>(std::stoul(tok));
}

}  // namespace

ImageTensor make_image(Tensor3 tensor, unsigned maxval) {
  if (tensor.n3() != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "image tensors need exactly 3 channels, got n3=" +
                    std::to_string(tensor.n3()));
  }
  if (maxval == 0 || maxval > 65535) {
    throw Error(ErrorCode::kInvalidArgument, "image maxval must be in 1..65535");
  }
  return ImageTensor{std::move(tensor), maxval};
}

ImageTensor load_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  const std::string magic = header_token(in);
  if (magic == "P5" || magic == "P2" || magic == "P1" || magic == "P4") {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": greyscale/bitmap image; 3 colour channels required");
  }
  if (magic != "P6") {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": unsupported image format (binary PPM P6 expected)");
  }
  const unsigned width = header_number(in, path);
  const unsigned height = header_number(in, path);
  const unsigned maxval = header_number(in, path);
  if (width == 0 || height == 0 || maxval == 0 || maxval > 65535) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": invalid PPM dimensions or maxval");
  }
  // header_token consumed exactly one whitespace byte after maxval.
  const std::size_t bytes_per_sample = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(std::size_t{width} * height * 3 * bytes_per_sample);
  if (!in.read(reinterpret_cast<char*>(raw.data()),
               static_cast<std::streamsize>(raw.size()))) {
    throw Error(ErrorCode::kIo, path.string() + ": truncated pixel data");
  }

  Tensor3 t(height, width, 3);
  const double scale = 1.0 / maxval;
  std::size_t p = 0;
  for (std::size_t row = 0; row < height; ++row) {
    for (std::size_t col = 0; col < width; ++col) {
      for (std::size_t ch = 0; ch < 3; ++ch) {
        unsigned v = raw[p++];
        if (bytes_per_sample == 2) v = (v << 8) | raw[p++];
        if (v > maxval) {
          throw Error(ErrorCode::kUnsupportedFormat,
                      path.string() + ": sample exceeds maxval");
        }
        t(row, col, ch) = v * scale;
      }
    }
  }
  return ImageTensor{std::move(t), maxval};
}

void save_image(const ImageTensor& img, const std::filesystem::path& path) {
  if (img.tensor.n3() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "save_image: tensor must have 3 channels");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  out << "P6\n" << img.width() << ' ' << img.height() << '\n' << img.maxval << '\n';
  const bool wide = img.maxval > 255;
  std::vector<unsigned char> raw;
  raw.reserve(img.tensor.size() * (wide ? 2 : 1));
  for (std::size_t row = 0; row < img.height(); ++row) {
    for (std::size_t col = 0; col < img.width(); ++col) {
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const double v = std::clamp(img.tensor(row, col, ch), 0.0, 1.0);
        const auto q = static_cast<unsigned>(std::lround(v * img.maxval));
        if (wide) raw.push_back(static_cast<unsigned char>(q >> 8));
        raw.push_back(static_cast<unsigned char>(q & 0xff));
      }
    }
  }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

CorruptedImage corrupt(const ImageTensor& img, double fraction,
                       std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "corrupt: fraction must be in [0,1]");
  }
  const std::size_t pixels = img.height() * img.width();
  const auto count = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(pixels)));

  Rng rng(derive_seed(seed, "imaging.corrupt"));
  std::vector<std::size_t> idx(pixels);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t n = 0; n < count; ++n) {
    std::uniform_int_distribution<std::size_t> pick(n, pixels - 1);
    std::swap(idx[n], idx[pick(rng)]);
  }

  CorruptedImage out{img, Tensor3(img.tensor.dims()), count};
  std::uniform_int_distribution<unsigned> level(0, img.maxval);
  const double scale = 1.0 / img.maxval;
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t row = idx[n] % img.height();
    const std::size_t col = idx[n] / img.height();
    for (std::size_t ch = 0; ch < 3; ++ch) {
      out.image.tensor(row, col, ch) = level(rng) * scale;
      out.mask(row, col, ch) = 1.0;
    }
  }
  return out;
}

double psnr(const Tensor3& estimate, const Tensor3& reference) {
  require_same_dims(estimate, reference, "psnr");
  const double peak = reference.norm(NormKind::kLinf);
  if (peak == 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "psnr: reference tensor is zero");
  }
  const double err = (estimate - reference).norm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = err * err / static_cast<double>(reference.size());
  return 10.0 * std::log10(peak * peak / mse);
}

double psnr(const ImageTensor& estimate, const ImageTensor& reference) {
  return psnr(estimate.tensor, reference.tensor);
}

DenoiseResult denoise(const ImageTensor& img, const Transform& t,
                      const SolverConfig& solver_cfg) {
  SolverConfig sc = solver_cfg;
  if (!sc.lambda) sc.lambda = default_lambda(img.height(), img.width(), t);
  TrpcaSolution sol = solve(img.tensor, t, sc);
  Tensor3 clamped = sol.low_rank;
  for (double& v : clamped.data()) v = std::clamp(v, 0.0, 1.0);
  return DenoiseResult{ImageTensor{std::move(clamped), img.maxval}, std::move(sol)};
}

}  // namespace trpca
