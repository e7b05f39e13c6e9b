#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "trpca/tensor3.hpp"

namespace trpca {

using Rng = std::mt19937_64;

// Derive an independent stream seed from a run seed and a component label,
// so adding a new consumer never shifts the streams of existing ones.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index);

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, double stddev,
                       Rng& rng);
Tensor3 gaussian_tensor(Dims dims, double stddev, Rng& rng);

}  // namespace trpca
