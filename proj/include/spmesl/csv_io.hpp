#pragma once
#include <spmesl/matrix.hpp>

#include <filesystem>
#include <string>

namespace spmesl::io {

// Headerless CSV: one row per line, comma separated, '.' decimal, LF endings.
// Values are written with 17 significant digits so a round trip is exact.
Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);
std::string format_double(double v);

// Standardized data: the CSV holds the standardized values, the sidecar
// `<path>.json` holds n, p, col_means and col_scales.
void write_standardized(const std::filesystem::path& csv_path, const DataMatrix& data);
DataMatrix read_standardized(const std::filesystem::path& csv_path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Write `edges` table (header `j,k,value`) for every nonzero upper-triangle entry.
void write_edges_csv(const std::filesystem::path& path, const Matrix& omega);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

} // namespace spmesl::io
