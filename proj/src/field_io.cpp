#include "fracmap/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "fracmap/error.hpp"

namespace fracmap {
namespace {

std::filesystem::path with_ext(std::filesystem::path stem, const char* ext) {
  if (stem.extension() == ".bin" || stem.extension() == ".json") stem.replace_extension();
  stem += ext;
  return stem;
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out |= ((v >> (8 * i)) & 0xffULL) << (8 * (7 - i));
  return out;
}

}  // namespace

void write_field(const std::filesystem::path& stem, const Field& f) {
  const auto bin_path = with_ext(stem, ".bin");
  const auto json_path = with_ext(stem, ".json");
  if (bin_path.has_parent_path()) std::filesystem::create_directories(bin_path.parent_path());

  std::ofstream bin(bin_path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + bin_path.string());
  for (double v : f.values()) {
    std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }

  nlohmann::json meta{{"n", f.grid().dim()},
                      {"points_per_axis", f.grid().points()},
                      {"length", f.grid().length()},
                      {"components", f.components()}};
  std::ofstream(json_path) << meta.dump(2) << '\n';
}

Field read_field(const std::filesystem::path& stem) {
  const auto bin_path = with_ext(stem, ".bin");
  const auto json_path = with_ext(stem, ".json");
  std::ifstream meta_in(json_path);
  if (!meta_in) throw InvalidArgument("missing field sidecar " + json_path.string());
  const auto meta = nlohmann::json::parse(meta_in);
  const Grid grid(meta.at("n").get<int>(), meta.at("points_per_axis").get<int>(), meta.at("length").get<double>());
  const int components = meta.at("components").get<int>();

  std::ifstream bin(bin_path, std::ios::binary);
  if (!bin) throw InvalidArgument("missing field data " + bin_path.string());
  std::vector<double> values(grid.sites() * static_cast<std::size_t>(components));
  for (double& v : values) {
    std::uint64_t bits = 0;
    if (!bin.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw InvalidArgument("field data truncated");
    v = std::bit_cast<double>(to_little(bits));
  }
  return Field(grid, components, std::move(values));
}

void write_field_csv(const std::filesystem::path& path, const Field& f) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  out << std::setprecision(17);
  out << (f.grid().dim() == 1 ? "x" : "x,y");
  for (int c = 0; c < f.components(); ++c) out << ",u" << c;
  out << '\n';
  for (std::size_t s = 0; s < f.sites(); ++s) {
    const auto x = f.grid().coordinate(s);
    out << x[0];
    if (f.grid().dim() == 2) out << ',' << x[1];
    for (int c = 0; c < f.components(); ++c) out << ',' << f(s, c);
    out << '\n';
  }
}

}  // namespace fracmap
