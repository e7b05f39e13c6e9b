#pragma once

#include <filesystem>
#include <string_view>

#include "trpca/tensor3.hpp"

namespace trpca {

// Binary tensor container, all fields little-endian:
//   bytes 0..7   magic "TRPCAT01"
//   bytes 8..31  n1, n2, n3 as uint64
//   then n1*n2*n3 IEEE-754 doubles in frontal-slice-major order
inline constexpr std::string_view kTensorMagic = "TRPCAT01";
inline constexpr int kTensorFormatVersion = 1;

void write_tensor(const Tensor3& t, const std::filesystem::path& path);
Tensor3 read_tensor(const std::filesystem::path& path);

// CSV fixture format: each frontal slice is n1 lines of n2 comma-separated
// values; slices are separated by one or more blank lines.
Tensor3 read_tensor_csv(const std::filesystem::path& path);
void write_tensor_csv(const Tensor3& t, const std::filesystem::path& path);

// Reads by extension: ".csv" goes through the CSV reader, anything else
// through the binary reader.
Tensor3 load_tensor(const std::filesystem::path& path);

Matrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace trpca
