#include "corcon/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace corcon {

namespace fs = std::filesystem;

namespace {

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::uint32_t load_u32(const std::string& bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(bytes[at + b]);
  return v;
}

void store_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

double load_f64(const std::string& bytes, std::size_t at) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | static_cast<unsigned char>(bytes[at + b]);
  return std::bit_cast<double>(v);
}

void store_f64(std::string& out, double value) {
  const auto v = std::bit_cast<std::uint64_t>(value);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

double parse_double(std::string_view text, const std::string& where) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
    text.remove_suffix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw IoError("malformed number '" + std::string(text) + "' " + where);
  }
  if (!std::isfinite(v)) throw IoError("non-finite value " + where);
  return v;
}

std::size_t parse_index(std::string_view text, const std::string& where) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw IoError("malformed index '" + std::string(text) + "' " + where);
  }
  return v;
}

DenseTensor3 decode_binary(const std::string& bytes, const fs::path& path) {
  if (bytes.size() < kTensorHeaderBytes) {
    throw IoError("malformed header in '" + path.string() + "': file has only " +
                  std::to_string(bytes.size()) + " bytes");
  }
  if (static_cast<unsigned char>(bytes[4]) != kTensorVersion) {
    throw IoError("malformed header in '" + path.string() + "': unsupported version " +
                  std::to_string(static_cast<unsigned char>(bytes[4])));
  }
  const Dims dims{load_u32(bytes, 5), load_u32(bytes, 9), load_u32(bytes, 13)};
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0) {
    throw IoError("malformed header in '" + path.string() + "': zero dimension in " +
                  to_string(dims));
  }
  const std::size_t count = dims[0] * dims[1] * dims[2];
  const std::size_t expected = 8 * count;
  const std::size_t actual = bytes.size() - kTensorHeaderBytes;
  if (actual < expected) {
    throw IoError("truncated payload in '" + path.string() + "': expected " +
                  std::to_string(expected) + " bytes, got " + std::to_string(actual));
  }
  if (actual > expected) {
    throw IoError("trailing data in '" + path.string() + "': expected " +
                  std::to_string(expected) + " payload bytes, got " + std::to_string(actual));
  }
  std::vector<double> values(count);
  for (std::size_t n = 0; n < count; ++n) {
    values[n] = load_f64(bytes, kTensorHeaderBytes + 8 * n);
    if (!std::isfinite(values[n])) {
      throw IoError("non-finite value at linear index " + std::to_string(n) + " in '" +
                    path.string() + "'");
    }
  }
  return DenseTensor3(dims, std::move(values));
}

DenseTensor3 decode_text(const std::string& contents, const fs::path& path) {
  std::istringstream in(contents);
  std::string line;
  if (!std::getline(in, line)) throw IoError("malformed header in '" + path.string() + "': empty");
  std::istringstream header(line);
  Dims dims{};
  std::string extra;
  if (!(header >> dims[0] >> dims[1] >> dims[2]) || (header >> extra) || dims[0] == 0 ||
      dims[1] == 0 || dims[2] == 0) {
    throw IoError("malformed header in '" + path.string() + "': expected \"I J K\", got \"" +
                  line + "\"");
  }
  const std::size_t count = dims[0] * dims[1] * dims[2];
  std::vector<double> values;
  values.reserve(count);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (values.size() == count) {
      throw IoError("trailing data in '" + path.string() + "' at line " + std::to_string(line_no));
    }
    values.push_back(parse_double(line, "at line " + std::to_string(line_no) + " of '" +
                                            path.string() + "'"));
  }
  if (values.size() != count) {
    throw IoError("truncated payload in '" + path.string() + "': expected " +
                  std::to_string(count) + " values, got " + std::to_string(values.size()));
  }
  return DenseTensor3(dims, std::move(values));
}

DenseTensor3 decode_csv(const std::string& contents, const fs::path& path,
                        std::optional<Dims> dims) {
  struct Entry {
    std::size_t i, j, k;
    double value;
  };
  std::vector<Entry> entries;
  std::istringstream in(contents);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const std::string where = "at line " + std::to_string(line_no) + " of '" + path.string() + "'";
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t comma; (comma = rest.find(',')) != std::string_view::npos;) {
      fields.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    fields.push_back(rest);
    if (fields.size() != 4) throw IoError("expected \"i,j,k,value\" " + where);
    const Entry e{parse_index(fields[0], where), parse_index(fields[1], where),
                  parse_index(fields[2], where), parse_double(fields[3], where)};
    if (e.i == 0 || e.j == 0 || e.k == 0) {
      throw IoError("triplet index out of range (indices are 1-based) " + where);
    }
    if (dims && (e.i > (*dims)[0] || e.j > (*dims)[1] || e.k > (*dims)[2])) {
      throw IoError("triplet index out of range for dims " + to_string(*dims) + " " + where);
    }
    entries.push_back(e);
  }
  if (!dims) {
    if (entries.empty()) throw IoError("csv tensor '" + path.string() + "' has no entries");
    Dims inferred{1, 1, 1};
    for (const Entry& e : entries) {
      inferred[0] = std::max(inferred[0], e.i);
      inferred[1] = std::max(inferred[1], e.j);
      inferred[2] = std::max(inferred[2], e.k);
    }
    dims = inferred;
  }
  const Dims d = *dims;
  std::vector<double> values(d[0] * d[1] * d[2], 0.0);
  for (const Entry& e : entries) values[(e.i - 1) + d[0] * ((e.j - 1) + d[1] * (e.k - 1))] = e.value;
  return DenseTensor3(d, std::move(values));
}

std::string encode(const DenseTensor3& x, TensorFormat format) {
  const Dims& d = x.dims();
  std::string out;
  switch (format) {
    case TensorFormat::binary: {
      for (std::size_t m = 0; m < 3; ++m) {
        if (d[m] > 0xffffffffULL) throw IoError("dimension too large for the binary format");
      }
      out.reserve(kTensorHeaderBytes + 8 * x.size());
      out.append(kTensorMagic, 4);
      out.push_back(static_cast<char>(kTensorVersion));
      for (std::size_t n : d) store_u32(out, static_cast<std::uint32_t>(n));
      for (double v : x.values()) store_f64(out, v);
      break;
    }
    case TensorFormat::text:
      out = std::to_string(d[0]) + " " + std::to_string(d[1]) + " " + std::to_string(d[2]) + "\n";
      for (double v : x.values()) out += format_double(v) + "\n";
      break;
    case TensorFormat::csv:
      for (std::size_t k = 0; k < d[2]; ++k)
        for (std::size_t j = 0; j < d[1]; ++j)
          for (std::size_t i = 0; i < d[0]; ++i)
            out += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                   std::to_string(k + 1) + "," + format_double(x(i, j, k)) + "\n";
      break;
  }
  return out;
}

}  // namespace

TensorFormat format_for_path(const fs::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".txt") return TensorFormat::text;
  if (ext == ".csv") return TensorFormat::csv;
  return TensorFormat::binary;
}

DenseTensor3 read_tensor(const fs::path& path, std::optional<Dims> csv_dims) {
  const std::string bytes = read_all(path);
  if (bytes.size() >= 4 && bytes.compare(0, 4, kTensorMagic, 4) == 0) {
    return decode_binary(bytes, path);
  }
  switch (format_for_path(path)) {
    case TensorFormat::csv:
      return decode_csv(bytes, path, csv_dims);
    case TensorFormat::text:
      return decode_text(bytes, path);
    case TensorFormat::binary:
      break;
  }
  // No magic: accept text regardless of extension, else report the header.
  try {
    return decode_text(bytes, path);
  } catch (const IoError&) {
    throw IoError("malformed header in '" + path.string() + "': missing TNS3 magic");
  }
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

void write_tensor(const DenseTensor3& x, const fs::path& path, std::optional<TensorFormat> format) {
  write_file_atomic(path, encode(x, format.value_or(format_for_path(path))));
}

std::string matrix_to_csv(const Matrix& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["rank"] = cfg.rank;
  j["schemes"] = nlohmann::json::array();
  for (Scheme s : cfg.schemes) j["schemes"].push_back(std::string(to_string(s)));
  j["ratios"] = cfg.ratios;
  j["samples_per_cell"] = nlohmann::json::object();
  for (const auto& [scheme, n] : cfg.samples_per_cell) {
    j["samples_per_cell"][std::string(to_string(scheme))] = n;
  }
  j["compressed_modes"] = to_string(cfg.compressed_modes);
  j["master_seed"] = cfg.master_seed;
  j["fit"] = {{"max_iterations", cfg.fit.max_iterations},
              {"rel_tolerance", cfg.fit.rel_tolerance},
              {"restarts", cfg.fit.restarts}};
  return j;
}

nlohmann::json to_json(const SummaryStats& s) {
  return {{"n", s.n},
          {"min", s.min},
          {"q1", s.q1},
          {"median", s.median},
          {"q3", s.q3},
          {"max", s.max},
          {"lower_whisker", s.lower_whisker},
          {"upper_whisker", s.upper_whisker},
          {"outliers", s.outliers},
          {"smoothed_mean", s.smoothed_mean}};
}

nlohmann::json to_json(const ExperimentResult& result) {
  nlohmann::json j;
  j["config"] = to_json(result.config);
  j["baseline"] = {{"rank", result.baseline.rank},
                   {"corcondia", result.baseline.value},
                   {"rank_deficient", result.baseline.rank_deficient}};
  j["cells"] = nlohmann::json::array();
  for (const CellResult& cell : result.cells) {
    j["cells"].push_back({{"scheme", std::string(to_string(cell.scheme))},
                          {"ratio", cell.ratio},
                          {"dims", cell.compressed_dims},
                          {"raw_samples", cell.raw_samples},
                          {"clamped_samples", cell.clamped_samples},
                          {"stats", to_json(cell.stats)}});
  }
  return j;
}

std::string stats_csv(const ExperimentResult& result) {
  std::string out = std::string(kStatsCsvHeader) + "\n";
  for (const CellResult& cell : result.cells) {
    const SummaryStats& s = cell.stats;
    out += std::string(to_string(cell.scheme)) + "," + format_double(cell.ratio) + "," +
           std::to_string(s.n) + "," + format_double(s.min) + "," + format_double(s.q1) + "," +
           format_double(s.median) + "," + format_double(s.q3) + "," + format_double(s.max) + "," +
           format_double(s.lower_whisker) + "," + format_double(s.upper_whisker) + "," +
           std::to_string(s.outliers.size()) + "," + format_double(s.smoothed_mean) + "\n";
  }
  return out;
}

}  // namespace corcon
