#include "trpca/tensor_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace trpca {

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0x00000000000000ffULL) << 56) | ((v & 0x000000000000ff00ULL) << 40) |
        ((v & 0x0000000000ff0000ULL) << 24) | ((v & 0x00000000ff000000ULL) << 8) |
        ((v & 0x000000ff00000000ULL) >> 8) | ((v & 0x0000ff0000000000ULL) >> 24) |
        ((v & 0x00ff000000000000ULL) >> 40) | ((v & 0xff00000000000000ULL) >> 56);
  }
  return v;
}

void put_u64(std::ostream& os, std::uint64_t v) {
  v = to_little(v);
  std::array<char, 8> buf;
  std::memcpy(buf.data(), &v, 8);
  os.write(buf.data(), 8);
}

std::uint64_t get_u64(std::istream& is) {
  std::array<char, 8> buf;
  if (!is.read(buf.data(), 8)) {
    throw Error(ErrorCode::kIo, "truncated tensor file");
  }
  std::uint64_t v;
  std::memcpy(&v, buf.data(), 8);
  return to_little(v);
}

[[noreturn]] void fail_open(const std::filesystem::path& path) {
  throw Error(ErrorCode::kIo, "cannot open " + path.string());
}

std::vector<double> parse_csv_row(const std::string& line,
                                  const std::filesystem::path& path,
                                  std::size_t line_no) {
  std::vector<double> row;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || cell.find_first_not_of(" \t\r", used) != std::string::npos) {
      throw Error(ErrorCode::kIo, path.string() + ":" + std::to_string(line_no) +
                                      ": cannot parse '" + cell + "'");
    }
    row.push_back(v);
  }
  return row;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// Blocks of rows separated by blank lines.
std::vector<std::vector<std::vector<double>>> read_csv_blocks(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail_open(path);
  std::vector<std::vector<std::vector<double>>> blocks;
  std::vector<std::vector<double>> current;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
      continue;
    }
    auto row = parse_csv_row(line, path, line_no);
    if (!current.empty() && row.size() != current.front().size()) {
      throw Error(ErrorCode::kIo, path.string() + ":" + std::to_string(line_no) +
                                      ": ragged row");
    }
    current.push_back(std::move(row));
  }
  if (!current.empty()) blocks.push_back(std::move(current));
  return blocks;
}

}  // namespace

void write_tensor(const Tensor3& t, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail_open(path);
  out.write(kTensorMagic.data(), static_cast<std::streamsize>(kTensorMagic.size()));
  put_u64(out, t.n1());
  put_u64(out, t.n2());
  put_u64(out, t.n3());
  for (double v : t.data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

Tensor3 read_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_open(path);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), 8) ||
      std::string_view(magic.data(), 8) != kTensorMagic) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": not a tensor file (bad magic)");
  }
  Dims d{get_u64(in), get_u64(in), get_u64(in)};
  // Guard against absurd headers before allocating.
  const auto max_entries = std::uint64_t{1} << 34;
  if (d.n1 == 0 || d.n2 == 0 || d.n3 == 0 || d.n1 > max_entries ||
      d.n2 > max_entries || d.n3 > max_entries ||
      d.n1 * d.n2 > max_entries || d.size() > max_entries) {
    throw Error(ErrorCode::kUnsupportedFormat,
                path.string() + ": invalid tensor dimensions");
  }
  std::vector<double> data(d.size());
  for (double& v : data) v = std::bit_cast<double>(get_u64(in));
  return Tensor3(d, std::move(data));
}

Tensor3 read_tensor_csv(const std::filesystem::path& path) {
  auto blocks = read_csv_blocks(path);
  if (blocks.empty()) {
    throw Error(ErrorCode::kIo, path.string() + ": empty CSV tensor");
  }
  const std::size_t n1 = blocks.front().size();
  const std::size_t n2 = blocks.front().front().size();
  Tensor3 t(n1, n2, blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k].size() != n1 || blocks[k].front().size() != n2) {
      throw Error(ErrorCode::kIo, path.string() + ": slice " +
                                      std::to_string(k + 1) +
                                      " has a different shape");
    }
    for (std::size_t i = 0; i < n1; ++i) {
      for (std::size_t j = 0; j < n2; ++j) t(i, j, k) = blocks[k][i][j];
    }
  }
  if (!t.all_finite()) {
    throw Error(ErrorCode::kInvalidArgument, "tensor data contains NaN or Inf");
  }
  return t;
}

void write_tensor_csv(const Tensor3& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail_open(path);
  out << std::setprecision(17);
  for (std::size_t k = 0; k < t.n3(); ++k) {
    if (k > 0) out << '\n';
    for (std::size_t i = 0; i < t.n1(); ++i) {
      for (std::size_t j = 0; j < t.n2(); ++j) {
        if (j > 0) out << ',';
        out << t(i, j, k);
      }
      out << '\n';
    }
  }
}

Tensor3 load_tensor(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_tensor_csv(path);
  return read_tensor(path);
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  auto blocks = read_csv_blocks(path);
  if (blocks.size() != 1) {
    throw Error(ErrorCode::kIo,
                path.string() + ": expected exactly one CSV matrix block");
  }
  const auto& rows = blocks.front();
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": non-finite entry");
  }
  return m;
}

}  // namespace trpca
