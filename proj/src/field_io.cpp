#include "viab/field_io.hpp"

#include <bit>
#include <cstdio>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <vector>

namespace viab {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path with_suffix(fs::path stem, const char* ext) {
  stem += ext;
  return stem;
}

fs::path stem_of(const fs::path& path) {
  const auto ext = path.extension();
  if (ext == ".bin" || ext == ".json") {
    fs::path s = path;
    s.replace_extension();
    return s;
  }
  return path;
}

std::uint64_t to_little_endian(std::uint64_t bits) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t out = 0;
    for (int i = 0; i < 8; ++i) out |= ((bits >> (8 * i)) & 0xffU) << (8 * (7 - i));
    return out;
  }
  return bits;
}

}  // namespace

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::pair<fs::path, fs::path> write_field(const ScalarField& field, const fs::path& stem) {
  const fs::path bin = with_suffix(stem, ".bin");
  const fs::path meta = with_suffix(stem, ".json");
  if (stem.has_parent_path()) fs::create_directories(stem.parent_path());

  std::ofstream out(bin, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + bin.string() + " for writing");
  std::vector<std::uint64_t> words(field.values().size());
  for (std::size_t k = 0; k < words.size(); ++k)
    words[k] = to_little_endian(std::bit_cast<std::uint64_t>(field[k]));
  out.write(reinterpret_cast<const char*>(words.data()),
            static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
  if (!out) throw std::runtime_error("write failed: " + bin.string());

  const Grid& g = field.grid();
  json axes = json::array();
  for (std::size_t i = 0; i < g.dim(); ++i)
    axes.push_back({{"lower", g.lower(i)}, {"upper", g.upper(i)}, {"nodes", g.nodes(i)}});
  json doc = {{"axes", axes}, {"time_tag", field.time_tag()}};
  std::ofstream m(meta);
  if (!m) throw std::runtime_error("cannot open " + meta.string() + " for writing");
  m << doc.dump(2) << '\n';
  return {bin, meta};
}

ScalarField read_field(const fs::path& path) {
  const fs::path stem = stem_of(path);
  const fs::path bin = with_suffix(stem, ".bin");
  const fs::path meta = with_suffix(stem, ".json");

  std::ifstream m(meta);
  if (!m) throw std::runtime_error("cannot open " + meta.string());
  const json doc = json::parse(m);
  std::vector<double> lower, upper;
  std::vector<std::size_t> nodes;
  for (const auto& axis : doc.at("axes")) {
    lower.push_back(axis.at("lower").get<double>());
    upper.push_back(axis.at("upper").get<double>());
    nodes.push_back(axis.at("nodes").get<std::size_t>());
  }
  Grid grid(lower, upper, nodes);

  std::ifstream in(bin, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + bin.string());
  std::vector<std::uint64_t> words(grid.size());
  in.read(reinterpret_cast<char*>(words.data()),
          static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)));
  if (in.gcount() != static_cast<std::streamsize>(words.size() * sizeof(std::uint64_t)))
    throw std::runtime_error(bin.string() + ": truncated field file");
  std::vector<double> values(words.size());
  for (std::size_t k = 0; k < words.size(); ++k)
    values[k] = std::bit_cast<double>(to_little_endian(words[k]));
  return ScalarField(grid, std::move(values), doc.value("time_tag", 0.0));
}

void write_field_csv(const ScalarField& field, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const Grid& g = field.grid();
  for (std::size_t i = 0; i < g.dim(); ++i) out << 'i' << i << ',';
  out << "value\n";
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Index idx = g.unflatten(k);
    for (std::size_t i = 0; i < g.dim(); ++i) out << idx[i] << ',';
    out << format_real(field[k]) << '\n';
  }
}

}  // namespace viab
