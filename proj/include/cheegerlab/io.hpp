#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cheegerlab/eigensolver.hpp"
#include "cheegerlab/geometry.hpp"

namespace cheegerlab {

/// Shortest decimal that reads back to the same double; "inf"/"nan" otherwise.
std::string format_double(double v);

/// Plain graymap "P2" with maxval 1. The grid is recorded as comment lines
/// "# nx=...", "# ny=...", "# h=...", "# ox=...", "# oy=..." and the first
/// image row is the top row of the grid (j = ny - 1).
void write_mask_pgm(std::ostream& os, const DomainMask& mask, const Grid2D& grid);
void write_mask_pgm(const std::filesystem::path& path, const DomainMask& mask, const Grid2D& grid);

struct MaskFile {
  DomainMask mask;
  std::optional<Grid2D> grid;  // present when the header comments carry it
};

MaskFile read_mask_pgm(std::istream& is);
MaskFile read_mask_pgm(const std::filesystem::path& path);

/// Graymap with maxval 65535, linear between the recorded "# min=" and "# max=".
void write_field_pgm(std::ostream& os, const ScalarField& field);
void write_field_pgm(const std::filesystem::path& path, const ScalarField& field);

/// CSV with one row per mask cell: cell-center coordinates and value.
void write_field_csv(std::ostream& os, const ScalarField& field, const std::string& value_column = "value");
void write_field_csv(const std::filesystem::path& path, const ScalarField& field,
                     const std::string& value_column = "value");

/// Minimal CSV writer: comma separated, LF line endings, no quoting.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  explicit CsvWriter(std::ostream& os, const std::vector<std::string>& header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<std::string>& cells);

 private:
  std::ostream* os_;
  std::unique_ptr<std::ostream> owned_;
  std::size_t columns_;
};

/// Creates the directory (and parents); throws InvalidArgument when that fails.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace cheegerlab
