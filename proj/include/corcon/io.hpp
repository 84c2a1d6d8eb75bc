#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "corcon/harness.hpp"
#include "corcon/tensor.hpp"

namespace corcon {

/// On-disk tensor encodings.
///
/// binary: "TNS3", version byte (1), three u32-LE dims, then I*J*K f64-LE
///         values in mode-1-fastest order.
/// text:   first line "I J K", then one value per line in the same order.
/// csv:    lines "i,j,k,value" with 1-based indices; unlisted entries are 0.
enum class TensorFormat { binary, text, csv };

inline constexpr char kTensorMagic[4] = {'T', 'N', 'S', '3'};
inline constexpr unsigned char kTensorVersion = 1;
inline constexpr std::size_t kTensorHeaderBytes = 17;

/// Format chosen by extension when writing: .txt is text, .csv is csv,
/// anything else binary.
TensorFormat format_for_path(const std::filesystem::path& path);

/// Reads any of the three formats; a file starting with the magic bytes is
/// binary, otherwise the extension decides. `csv_dims` fixes the dims of a
/// csv file; without it they are the largest listed indices.
DenseTensor3 read_tensor(const std::filesystem::path& path,
                         std::optional<Dims> csv_dims = std::nullopt);

/// Writes atomically (temporary file, then rename).
void write_tensor(const DenseTensor3& x, const std::filesystem::path& path,
                  std::optional<TensorFormat> format = std::nullopt);

/// Writes `contents` to `path` through a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Comma-separated rows, full round-trip precision.
std::string matrix_to_csv(const Matrix& m);

nlohmann::json to_json(const ExperimentConfig& cfg);
nlohmann::json to_json(const SummaryStats& stats);
nlohmann::json to_json(const ExperimentResult& result);

inline constexpr const char* kStatsCsvHeader =
    "scheme,ratio,n,min,q1,median,q3,max,lower_whisker,upper_whisker,n_outliers,smoothed_mean";

/// One row per cell under kStatsCsvHeader.
std::string stats_csv(const ExperimentResult& result);

}  // namespace corcon
