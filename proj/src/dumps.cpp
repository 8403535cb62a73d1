#include "genspace/dumps.hpp"

#include <fmt/core.h>
#include <fmt/ostream.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "genspace/error.hpp"
#include "genspace/report.hpp"

namespace genspace {

namespace {

double parse_double(const std::string& s, const std::string& source, std::size_t line) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw_data(fmt::format("{}: line {}: '{}' is not a number", source, line, s));
  }
  return v;
}

bool getline_trimmed(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

void expect_header(std::istream& in, std::string_view expected, const std::string& source) {
  std::string line;
  if (!getline_trimmed(in, line)) throw_data(fmt::format("{}: file is empty", source));
  if (line != expected) throw_data(fmt::format("{}: expected header '{}', found '{}'", source, expected, line));
}

}  // namespace

std::vector<std::string> split_csv_record(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_projection_csv(std::ostream& out, const Projection& p) {
  out << "level_id,set_label,x,y,algorithm,seed\n";
  const std::string seed = p.seed ? std::to_string(*p.seed) : std::string();
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    fmt::print(out, "{},{},{},{},{},{}\n", csv_field(p.row_ids[i]),
               csv_field(i < p.set_labels.size() ? p.set_labels[i] : std::string()), p.coords(ii, 0),
               p.coords(ii, 1), to_string(p.algorithm), seed);
  }
}

Projection read_projection_csv(std::istream& in, const std::string& source) {
  expect_header(in, "level_id,set_label,x,y,algorithm,seed", source);
  Projection p;
  std::vector<std::pair<double, double>> xy;
  std::string line;
  std::size_t line_no = 1;
  std::optional<Algorithm> algorithm;
  while (getline_trimmed(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = split_csv_record(line);
    if (f.size() != 6) throw_data(fmt::format("{}: line {}: expected 6 fields, got {}", source, line_no, f.size()));
    auto a = parse_algorithm(f[4]);
    if (!a) throw_data(fmt::format("{}: line {}: unknown algorithm '{}'", source, line_no, f[4]));
    if (algorithm && *algorithm != *a) throw_data(fmt::format("{}: line {}: mixed algorithms", source, line_no));
    algorithm = a;
    if (!f[5].empty()) {
      std::uint64_t seed = 0;
      auto [ptr, ec] = std::from_chars(f[5].data(), f[5].data() + f[5].size(), seed);
      if (ec != std::errc() || ptr != f[5].data() + f[5].size()) {
        throw_data(fmt::format("{}: line {}: bad seed '{}'", source, line_no, f[5]));
      }
      p.seed = seed;
    }
    p.row_ids.push_back(std::move(f[0]));
    p.set_labels.push_back(std::move(f[1]));
    xy.emplace_back(parse_double(f[2], source, line_no), parse_double(f[3], source, line_no));
  }
  if (xy.empty()) throw_data(fmt::format("{}: projection has no rows", source));
  p.algorithm = *algorithm;
  p.coords.resize(static_cast<Eigen::Index>(xy.size()), 2);
  for (std::size_t i = 0; i < xy.size(); ++i) {
    p.coords(static_cast<Eigen::Index>(i), 0) = xy[i].first;
    p.coords(static_cast<Eigen::Index>(i), 1) = xy[i].second;
  }
  return p;
}

void save_projection(const std::filesystem::path& path, const Projection& p) {
  std::ostringstream ss;
  write_projection_csv(ss, p);
  write_text_file(path, ss.str());
}

Projection load_projection(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_data(fmt::format("cannot open projection dump '{}'", path.string()));
  return read_projection_csv(in, path.string());
}

void write_bc_csv(std::ostream& out, const std::vector<BcVector>& bcs) {
  out << "level_id,set_label,bc_name,value\n";
  for (const auto& b : bcs) {
    for (const auto& [bc, v] : b.values) {
      fmt::print(out, "{},{},{},{}\n", csv_field(b.level_id), csv_field(b.set_label), to_string(bc), v);
    }
  }
}

std::vector<BcVector> read_bc_csv(std::istream& in, const std::string& source) {
  expect_header(in, "level_id,set_label,bc_name,value", source);
  std::vector<BcVector> out;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 1;
  while (getline_trimmed(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto f = split_csv_record(line);
    if (f.size() != 4) throw_data(fmt::format("{}: line {}: expected 4 fields, got {}", source, line_no, f.size()));
    auto bc = parse_bc(f[2]);
    if (!bc) throw_data(fmt::format("{}: line {}: unknown BC '{}'", source, line_no, f[2]));
    auto [it, inserted] = index.try_emplace(f[0], out.size());
    if (inserted) out.push_back({f[0], f[1], {}});
    auto& entry = out[it->second];
    if (entry.get(*bc)) throw_data(fmt::format("{}: line {}: duplicate {} for '{}'", source, line_no, f[2], f[0]));
    entry.values.emplace_back(*bc, parse_double(f[3], source, line_no));
  }
  return out;
}

void save_bcs(const std::filesystem::path& path, const std::vector<BcVector>& bcs) {
  std::ostringstream ss;
  write_bc_csv(ss, bcs);
  write_text_file(path, ss.str());
}

std::vector<BcVector> load_bcs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_data(fmt::format("cannot open BC dump '{}'", path.string()));
  return read_bc_csv(in, path.string());
}

}  // namespace genspace
