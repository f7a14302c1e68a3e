#include "cheegerlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path.string() + "'");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot read '" + path.string() + "'");
  return is;
}

void write_grid_comments(std::ostream& os, const Grid2D& grid) {
  os << "# nx=" << grid.nx << "\n# ny=" << grid.ny << "\n# h=" << format_double(grid.h)
     << "\n# ox=" << format_double(grid.ox) << "\n# oy=" << format_double(grid.oy) << "\n";
}

// Reads the next whitespace-separated token, collecting "key=value" comments.
class PnmReader {
 public:
  explicit PnmReader(std::istream& is) : is_(is) {}

  std::string token() {
    std::string tok;
    char c;
    while (is_.get(c)) {
      if (c == '#') {
        std::string line;
        std::getline(is_, line);
        comment(line);
        if (!tok.empty()) return tok;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(c);
    }
    return tok;
  }

  long integer() {
    const std::string t = token();
    long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
      throw InvalidArgument("malformed graymap value '" + t + "'");
    return v;
  }

  std::optional<double> value(const std::string& key) const {
    for (const auto& [k, v] : comments_)
      if (k == key) return v;
    return std::nullopt;
  }

 private:
  void comment(const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) return;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    double v = 0.0;
    const auto res = std::from_chars(val.data(), val.data() + val.size(), v);
    if (res.ec == std::errc() && res.ptr == val.data() + val.size()) comments_.emplace_back(key, v);
  }

  std::istream& is_;
  std::vector<std::pair<std::string, double>> comments_;
};

}  // namespace

void write_mask_pgm(std::ostream& os, const DomainMask& mask, const Grid2D& grid) {
  if (!mask.same_shape(grid)) throw InvalidArgument("mask does not match grid");
  os << "P2\n";
  write_grid_comments(os, grid);
  os << grid.nx << ' ' << grid.ny << "\n1\n";
  for (int j = grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (i > 0) os << ' ';
      os << (mask(i, j) ? '1' : '0');
    }
    os << '\n';
  }
}

void write_mask_pgm(const std::filesystem::path& path, const DomainMask& mask, const Grid2D& grid) {
  auto os = open_out(path);
  write_mask_pgm(os, mask, grid);
}

MaskFile read_mask_pgm(std::istream& is) {
  PnmReader in(is);
  if (in.token() != "P2") throw InvalidArgument("not a plain graymap (P2)");
  const long nx = in.integer(), ny = in.integer(), maxval = in.integer();
  if (nx < 1 || ny < 1 || nx > 1 << 16 || ny > 1 << 16) throw InvalidArgument("bad graymap size");
  if (maxval < 1) throw InvalidArgument("bad graymap maxval");
  MaskFile out;
  out.mask = DomainMask(static_cast<int>(nx), static_cast<int>(ny));
  for (long j = ny - 1; j >= 0; --j)
    for (long i = 0; i < nx; ++i) {
      const long v = in.integer();
      if (v < 0 || v > maxval) throw InvalidArgument("graymap value out of range");
      out.mask.set(static_cast<int>(i), static_cast<int>(j), v > 0);
    }
  const auto gnx = in.value("nx"), gny = in.value("ny"), h = in.value("h");
  if (gnx && gny && h) {
    if (*gnx != nx || *gny != ny) throw InvalidArgument("graymap header grid does not match its size");
    Grid2D g;
    g.nx = static_cast<int>(nx);
    g.ny = static_cast<int>(ny);
    g.h = *h;
    g.ox = in.value("ox").value_or(0.0);
    g.oy = in.value("oy").value_or(0.0);
    if (!(g.h > 0.0)) throw InvalidArgument("graymap header spacing must be positive");
    out.grid = g;
  }
  return out;
}

MaskFile read_mask_pgm(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_mask_pgm(is);
}

void write_field_pgm(std::ostream& os, const ScalarField& field) {
  check_field(field);
  const auto [lo_it, hi_it] = std::minmax_element(field.values.begin(), field.values.end());
  const double lo = *lo_it, hi = *hi_it;
  const double span = hi > lo ? hi - lo : 1.0;
  const Grid2D& g = field.grid;
  os << "P2\n";
  write_grid_comments(os, g);
  os << "# min=" << format_double(lo) << "\n# max=" << format_double(hi) << "\n";
  os << g.nx << ' ' << g.ny << "\n65535\n";
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i) {
      if (i > 0) os << ' ';
      os << std::lround((field(i, j) - lo) / span * 65535.0);
    }
    os << '\n';
  }
}

void write_field_pgm(const std::filesystem::path& path, const ScalarField& field) {
  auto os = open_out(path);
  write_field_pgm(os, field);
}

void write_field_csv(std::ostream& os, const ScalarField& field, const std::string& value_column) {
  check_field(field);
  CsvWriter csv(os, {"x_length", "y_length", value_column});
  const Grid2D& g = field.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!field.mask(i, j)) continue;
      const Point2 c = g.center(i, j);
      csv.row({format_double(c.x), format_double(c.y), format_double(field(i, j))});
    }
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& field, const std::string& value_column) {
  auto os = open_out(path);
  write_field_csv(os, field, value_column);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : os_(nullptr), columns_(header.size()) {
  owned_ = std::make_unique<std::ofstream>(open_out(path));
  os_ = owned_.get();
  row(header);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(&os), columns_(header.size()) {
  row(header);
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("CSV row has the wrong number of cells");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (cells[k].find_first_of(",\n\r\"") != std::string::npos) throw Error("CSV cell needs quoting: " + cells[k]);
    if (k > 0) *os_ << ',';
    *os_ << cells[k];
  }
  *os_ << '\n';
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw InvalidArgument("cannot create output directory '" + dir.string() + "'");
}

}  // namespace cheegerlab
