#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cheegerlab/error.hpp"
#include "cheegerlab/io.hpp"
#include "cheegerlab/ratio.hpp"

using namespace cheegerlab;

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, -2.5e-300, 5.783185962946784}) CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(kInfinity) == "inf");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("mask graymap round-trip keeps cells and grid") {
  const Grid2D g = make_grid(7, 5, {1.4, 1.0}, {-0.25, 0.5});
  DomainMask m(7, 5);
  m.set(0, 0, true);
  m.set(6, 4, true);
  m.set(3, 2, true);
  std::stringstream ss;
  write_mask_pgm(ss, m, g);
  const std::string text = ss.str();
  CHECK(text.rfind("P2\n", 0) == 0);
  CHECK(text.find("# h=") != std::string::npos);
  const MaskFile back = read_mask_pgm(ss);
  CHECK(back.mask == m);
  REQUIRE(back.grid.has_value());
  CHECK(*back.grid == g);

  // Top image row holds j = ny - 1.
  std::istringstream lines(text);
  std::string line, first_row;
  while (std::getline(lines, line))
    if (!line.empty() && line[0] != '#' && line != "P2" && line.find(' ') != std::string::npos &&
        line.size() == 13) {
      first_row = line;
      break;
    }
  CHECK(first_row == "0 0 0 0 0 0 1");
}

TEST_CASE("plain graymap without grid comments") {
  std::istringstream is("P2\n3 2\n1\n1 0 0\n0 0 1\n");
  const MaskFile f = read_mask_pgm(is);
  CHECK(!f.grid.has_value());
  CHECK(f.mask(0, 1));
  CHECK(f.mask(2, 0));
  CHECK(f.mask.count() == 2);

  std::istringstream bad("P5\n3 2\n1\n");
  CHECK_THROWS_AS(read_mask_pgm(bad), InvalidArgument);
  std::istringstream short_data("P2\n3 2\n1\n1 0\n");
  CHECK_THROWS_AS(read_mask_pgm(short_data), InvalidArgument);
}

TEST_CASE("field outputs") {
  const Grid2D g = make_grid(4, 4, {1, 1});
  DomainMask m(4, 4);
  m.set(1, 1, true);
  m.set(2, 1, true);
  ScalarField f = make_field(g, m);
  f.values[1 + 4 * 1] = 0.5;
  f.values[2 + 4 * 1] = 2.0;

  std::stringstream pgm;
  write_field_pgm(pgm, f);
  CHECK(pgm.str().find("65535") != std::string::npos);
  CHECK(pgm.str().find("# max=2") != std::string::npos);

  std::ostringstream csv;
  write_field_csv(csv, f, "u");
  CHECK(csv.str() == "x_length,y_length,u\n0.375,0.375,0.5\n0.625,0.375,2\n");
}

TEST_CASE("csv writer") {
  std::ostringstream os;
  {
    CsvWriter w(os, {"a", "b"});
    w.row({"1", "2"});
    CHECK_THROWS_AS(w.row({"1"}), Error);
    CHECK_THROWS_AS(w.row({"1,2", "3"}), Error);
  }
  CHECK(os.str() == "a,b\n1,2\n");

  const auto dir = std::filesystem::temp_directory_path() / "cheegerlab_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  ensure_directory(dir);
  {
    CsvWriter w(dir / "x.csv", {"k"});
    w.row({"v"});
  }
  CHECK(std::filesystem::file_size(dir / "x.csv") == 4);
  std::filesystem::remove_all(dir.parent_path());
}
