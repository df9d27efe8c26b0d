#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fracmap/field_io.hpp"
#include "fracmap/reports.hpp"
#include "fracmap/svg_plot.hpp"

using namespace fracmap;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fracmap_test_reports_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("content hash is the git blob id") {
  CHECK(content_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(content_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
}

TEST_CASE("json and csv writers") {
  const fs::path dir = scratch("io");
  write_json(dir / "a" / "r.json", Json{{"b", 1}, {"a", 0.5}});
  CHECK(slurp(dir / "a" / "r.json") == "{\n  \"b\": 1,\n  \"a\": 0.5\n}\n");
  write_csv(dir / "t.csv", {"x", "y"}, {{0.1, 2.0}, {1e-300, -3.0}});
  CHECK(slurp(dir / "t.csv") == "x,y\n0.10000000000000001,2\n1e-300,-3\n");
}

TEST_CASE("svg plot") {
  const fs::path dir = scratch("svg");
  write_line_plot(dir / "p.svg", {"t<1>", "x", "y", true, true}, {{"a&b", {1, 10, 100}, {1, 0.1, -1}}});
  const std::string s = slurp(dir / "p.svg");
  CHECK(s.find("<svg") == 0);
  CHECK(s.find("t&lt;1&gt;") != std::string::npos);
  CHECK(s.find("a&amp;b") != std::string::npos);
  CHECK(s.find("<polyline") != std::string::npos);
}

TEST_CASE("field files round trip") {
  const fs::path dir = scratch("field");
  const Grid g(2, 16, 3.0);
  const Field f = Field::stack(std::vector<Field>{random_band_limited(g, 4, 1), random_band_limited(g, 4, 2)});
  write_field(dir / "u", f);
  CHECK(fs::file_size(dir / "u.bin") == g.sites() * 2 * sizeof(double));
  const Json side = Json::parse(slurp(dir / "u.json"));
  CHECK(side["components"] == 2);
  CHECK(side["points_per_axis"] == 16);
  for (const char* name : {"u", "u.bin", "u.json"}) {
    const Field back = read_field(dir / name);
    CHECK(back.grid() == g);
    CHECK(max_abs(back - f) == 0.0);
  }
}

TEST_CASE("frame report keys") {
  const Json j = to_json(frame_bound_constants(2, 10000, 1), theta_dichotomy(2, 10000, 1));
  for (const char* key : {"N", "omega_count", "c_emp", "C_emp", "theta_emp", "paper_theta", "c_proof"})
    CHECK(j.contains(key));
  CHECK(j["omega_count"] == 3);
  CHECK(j["paper_theta"] == 0.25);
}
