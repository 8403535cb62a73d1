#include "genspace/corpus.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "genspace/error.hpp"
#include "genspace/rng.hpp"

namespace fs = std::filesystem;

namespace genspace {

namespace {

constexpr std::array<std::string_view, 9> kRoleNames{
    "empty", "solid", "enemy", "pipe", "reward", "box", "goal", "player-spawn", "other"};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data(fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    auto line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string printable(char c) {
  if (c == ' ') return "' ' (space)";
  if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
    return fmt::format("byte 0x{:02x}", static_cast<unsigned char>(c));
  }
  return fmt::format("'{}'", c);
}

// Lines of the form  '<c>' = <value>  ; blank lines and lines starting with '#'
// are skipped.
std::vector<std::pair<char, std::string>> parse_quoted_pairs(std::string_view text,
                                                             std::string_view what) {
  std::vector<std::pair<char, std::string>> out;
  int line_no = 0;
  for (auto raw : split_lines(text)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (line.size() < 3 || line[0] != '\'' || line[2] != '\'') {
      throw_config(fmt::format("{} line {}: expected '<symbol>' = <value>", what, line_no));
    }
    auto rest = trim(line.substr(3));
    if (rest.empty() || rest.front() != '=') {
      throw_config(fmt::format("{} line {}: missing '='", what, line_no));
    }
    rest = trim(rest.substr(1));
    if (rest.empty()) throw_config(fmt::format("{} line {}: missing value", what, line_no));
    out.emplace_back(line[1], std::string(rest));
  }
  return out;
}

std::vector<fs::path> sorted_txt_files(const fs::path& dir, bool recursive) {
  std::vector<fs::path> files;
  auto accept = [&](const fs::directory_entry& e) {
    if (e.is_regular_file() && e.path().extension() == ".txt" &&
        e.path().filename().string().front() != '.') {
      files.push_back(e.path());
    }
  };
  if (recursive) {
    for (const auto& e : fs::recursive_directory_iterator(dir)) accept(e);
  } else {
    for (const auto& e : fs::directory_iterator(dir)) accept(e);
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<fs::path> sorted_subdirs(const fs::path& dir) {
  std::vector<fs::path> dirs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && e.path().filename().string().front() != '.') dirs.push_back(e.path());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

void require_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw_data(fmt::format("corpus path '{}' is not a directory", dir.string()));
}

std::string dir_label(const fs::path& dir) {
  auto p = dir;
  if (!p.has_filename()) p = p.parent_path();
  return fs::absolute(p).lexically_normal().filename().string();
}

// Relative path with the extension dropped, always using '/'.
std::string relative_stem(const fs::path& file, const fs::path& root) {
  auto rel = file.lexically_relative(root);
  rel.replace_extension();
  return rel.generic_string();
}

}  // namespace

std::string_view to_string(TileRole role) { return kRoleNames[static_cast<std::size_t>(role)]; }

std::optional<TileRole> parse_role(std::string_view name) {
  for (std::size_t i = 0; i < kRoleNames.size(); ++i) {
    if (kRoleNames[i] == name) return static_cast<TileRole>(i);
  }
  if (name == "player_spawn") return TileRole::player_spawn;
  return std::nullopt;
}

TileAlphabet::TileAlphabet(std::vector<char> symbols, std::vector<TileRole> roles)
    : symbols_(std::move(symbols)), roles_(std::move(roles)) {
  if (symbols_.size() != roles_.size()) {
    throw_config("tile alphabet: every symbol needs exactly one role");
  }
  if (symbols_.empty()) throw_config("tile alphabet is empty");
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    auto& slot = index_[static_cast<unsigned char>(symbols_[i])];
    if (slot >= 0) throw_config(fmt::format("tile alphabet: duplicate symbol {}", printable(symbols_[i])));
    slot = static_cast<int>(i);
  }
  if (!has_role(TileRole::empty)) throw_config("tile alphabet: no symbol has role 'empty'");
}

TileAlphabet TileAlphabet::parse(std::string_view text) {
  std::vector<char> symbols;
  std::vector<TileRole> roles;
  for (auto& [sym, value] : parse_quoted_pairs(text, "tile alphabet")) {
    auto role = parse_role(value);
    if (!role) throw_config(fmt::format("tile alphabet: unknown role '{}' for {}", value, printable(sym)));
    symbols.push_back(sym);
    roles.push_back(*role);
  }
  return {std::move(symbols), std::move(roles)};
}

TileAlphabet TileAlphabet::load(const fs::path& path) { return parse(read_file(path)); }

std::string TileAlphabet::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < symbols_.size(); ++i) {
    out += fmt::format("'{}' = {}\n", symbols_[i], to_string(roles_[i]));
  }
  return out;
}

TileRole TileAlphabet::role_of(char symbol) const {
  const int idx = index_of(symbol);
  if (idx < 0) throw_data(fmt::format("symbol {} is not in the tile alphabet", printable(symbol)));
  return roles_[static_cast<std::size_t>(idx)];
}

bool TileAlphabet::has_role(TileRole role) const noexcept {
  return std::find(roles_.begin(), roles_.end(), role) != roles_.end();
}

LevelCorpus::LevelCorpus(TileAlphabet alphabet, std::vector<LevelGrid> levels)
    : alphabet_(std::move(alphabet)), levels_(std::move(levels)) {
  if (!levels_.empty()) {
    height_ = levels_.front().height;
    width_ = levels_.front().width;
  }
  std::unordered_set<std::string> ids;
  std::map<std::string, std::size_t> counts;
  for (const auto& level : levels_) {
    if (level.height != height_ || level.width != width_) {
      throw_data(fmt::format("level '{}' is {}x{} but the corpus is {}x{}", level.level_id,
                             level.height, level.width, height_, width_));
    }
    if (level.cells.size() != static_cast<std::size_t>(level.height) * static_cast<std::size_t>(level.width)) {
      throw_data(fmt::format("level '{}' has {} cells for a {}x{} grid", level.level_id,
                             level.cells.size(), level.height, level.width));
    }
    for (std::size_t k = 0; k < level.cells.size(); ++k) {
      if (!alphabet_.contains(level.cells[k])) {
        throw_data(fmt::format("level '{}': unknown symbol {} at row {}, col {}", level.level_id,
                               printable(level.cells[k]), k / static_cast<std::size_t>(level.width),
                               k % static_cast<std::size_t>(level.width)));
      }
    }
    if (!ids.insert(level.level_id).second) throw_data(fmt::format("duplicate level id '{}'", level.level_id));
    ++counts[level.set_label];
  }
  for (auto& [label, count] : counts) sets_.push_back({label, count});
}

LevelGrid parse_level_text(std::string_view text, const TileAlphabet& alphabet, std::string level_id,
                           std::string set_label, const std::string& source_name) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw_data(fmt::format("{}: empty level", source_name));
  LevelGrid level;
  level.level_id = std::move(level_id);
  level.set_label = std::move(set_label);
  level.height = static_cast<int>(lines.size());
  level.width = static_cast<int>(lines.front().size());
  if (level.width == 0) throw_data(fmt::format("{}: line 1 is empty", source_name));
  level.cells.reserve(lines.size() * lines.front().size());
  for (std::size_t r = 0; r < lines.size(); ++r) {
    if (lines[r].size() != lines.front().size()) {
      throw_data(fmt::format("{}: ragged row at line {} (length {}, expected {})", source_name, r + 1,
                             lines[r].size(), lines.front().size()));
    }
    for (std::size_t c = 0; c < lines[r].size(); ++c) {
      if (!alphabet.contains(lines[r][c])) {
        throw_data(fmt::format("{}: unknown symbol {} at line {}, column {}", source_name,
                               printable(lines[r][c]), r + 1, c + 1));
      }
    }
    level.cells.append(lines[r]);
  }
  return level;
}

std::string serialize_level(const LevelGrid& level) {
  std::string out;
  out.reserve(level.cells.size() + static_cast<std::size_t>(level.height));
  for (int r = 0; r < level.height; ++r) {
    out.append(level.cells, static_cast<std::size_t>(r) * static_cast<std::size_t>(level.width),
               static_cast<std::size_t>(level.width));
    out.push_back('\n');
  }
  return out;
}

LevelCorpus parse_vglc(const fs::path& dir, const TileAlphabet& alphabet) {
  require_dir(dir);
  const auto label = dir_label(dir);
  const auto files = sorted_txt_files(dir, false);
  if (files.empty()) throw_data(fmt::format("no level files (*.txt) in '{}'", dir.string()));

  std::vector<LevelGrid> levels;
  levels.reserve(files.size());
  for (const auto& file : files) {
    levels.push_back(parse_level_text(read_file(file), alphabet,
                                      label + "/" + file.stem().string(), label, file.string()));
  }

  std::map<std::pair<int, int>, std::size_t> size_counts;
  for (const auto& l : levels) ++size_counts[{l.height, l.width}];
  if (size_counts.size() > 1) {
    const auto majority = std::max_element(size_counts.begin(), size_counts.end(),
                                           [](auto& a, auto& b) { return a.second < b.second; })
                              ->first;
    std::string offenders;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      if (std::pair{levels[i].height, levels[i].width} != majority) {
        offenders += fmt::format("\n  {} ({}x{})", files[i].string(), levels[i].height, levels[i].width);
      }
    }
    throw_data(fmt::format("level size mismatch in '{}': most levels are {}x{}, but:{}", dir.string(),
                           majority.first, majority.second, offenders));
  }
  return {alphabet, std::move(levels)};
}

TileAlphabet MarioMapping::simplified_alphabet() {
  return {{'-', 'E', 'X', 'P', '?'},
          {TileRole::empty, TileRole::enemy, TileRole::solid, TileRole::pipe, TileRole::reward}};
}

namespace {

std::optional<char> simplified_symbol(std::string_view type_name) {
  static constexpr std::array<std::pair<std::string_view, char>, 5> kTypes{
      {{"Empty", '-'}, {"Enemy", 'E'}, {"Solid", 'X'}, {"Pipe", 'P'}, {"Reward", '?'}}};
  for (auto& [name, sym] : kTypes) {
    if (std::equal(name.begin(), name.end(), type_name.begin(), type_name.end(),
                   [](char a, char b) { return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b)); })) {
      return sym;
    }
  }
  return std::nullopt;
}

constexpr std::string_view kDefaultMarioMapping = R"(# Mario AI Framework tile symbols -> simplified types
'-' = Empty
'M' = Empty
'F' = Empty
'|' = Empty
'X' = Solid
'#' = Solid
'S' = Solid
'D' = Solid
'%' = Solid
'C' = Reward
'L' = Reward
'U' = Reward
'?' = Reward
'@' = Reward
'Q' = Reward
'!' = Reward
'1' = Reward
'2' = Reward
'o' = Reward
't' = Pipe
'T' = Pipe
'<' = Pipe
'>' = Pipe
'[' = Pipe
']' = Pipe
'*' = Pipe
'B' = Pipe
'b' = Pipe
'g' = Enemy
'G' = Enemy
'E' = Enemy
'k' = Enemy
'K' = Enemy
'r' = Enemy
'R' = Enemy
'y' = Enemy
'Y' = Enemy
)";

}  // namespace

MarioMapping MarioMapping::defaults() { return parse(kDefaultMarioMapping); }

MarioMapping MarioMapping::parse(std::string_view text) {
  MarioMapping m;
  for (auto& [raw, type_name] : parse_quoted_pairs(text, "mario mapping")) {
    auto sym = simplified_symbol(type_name);
    if (!sym) {
      throw_config(fmt::format("mario mapping: unknown type '{}' for {} (expected Empty, Enemy, Solid, Pipe or Reward)",
                               type_name, printable(raw)));
    }
    m.set(raw, *sym);
  }
  return m;
}

MarioMapping MarioMapping::load(const fs::path& path) { return parse(read_file(path)); }

void MarioMapping::set(char raw, char simplified) {
  if (!simplified_alphabet().contains(simplified)) {
    throw_config(fmt::format("mario mapping: {} is not a simplified symbol", printable(simplified)));
  }
  table_[static_cast<unsigned char>(raw)] = simplified;
}

std::optional<char> MarioMapping::map(char raw) const noexcept {
  const char s = table_[static_cast<unsigned char>(raw)];
  if (s == '\0') return std::nullopt;
  return s;
}

std::string MarioMapping::serialize() const {
  static constexpr std::array<std::pair<char, std::string_view>, 5> kNames{
      {{'-', "Empty"}, {'E', "Enemy"}, {'X', "Solid"}, {'P', "Pipe"}, {'?', "Reward"}}};
  std::string out;
  for (int c = 0; c < 256; ++c) {
    const char s = table_[static_cast<std::size_t>(c)];
    if (s == '\0') continue;
    for (auto& [sym, name] : kNames) {
      if (sym == s) out += fmt::format("'{}' = {}\n", static_cast<char>(c), name);
    }
  }
  return out;
}

LevelCorpus parse_mario(const fs::path& dir, const MarioMapping& mapping) {
  require_dir(dir);
  std::vector<std::pair<std::string, fs::path>> set_dirs;
  for (const auto& sub : sorted_subdirs(dir)) set_dirs.emplace_back(sub.filename().string(), sub);
  if (set_dirs.empty()) set_dirs.emplace_back(dir_label(dir), dir);

  const auto alphabet = MarioMapping::simplified_alphabet();
  std::vector<LevelGrid> levels;
  for (const auto& [label, set_dir] : set_dirs) {
    for (const auto& file : sorted_txt_files(set_dir, false)) {
      const auto text = read_file(file);
      const auto lines = split_lines(text);
      std::string mapped;
      mapped.reserve(text.size());
      for (std::size_t r = 0; r < lines.size(); ++r) {
        for (std::size_t c = 0; c < lines[r].size(); ++c) {
          auto s = mapping.map(lines[r][c]);
          if (!s) {
            throw_data(fmt::format("{}: unmapped raw symbol {} at line {}, column {}", file.string(),
                                   printable(lines[r][c]), r + 1, c + 1));
          }
          mapped.push_back(*s);
        }
        mapped.push_back('\n');
      }
      auto level = parse_level_text(mapped, alphabet, label + "/" + file.stem().string(), label,
                                    file.string());
      if (level.height != kMarioHeight || level.width != kMarioWidth) {
        throw_data(fmt::format("{}: level is {}x{}, expected {}x{}", file.string(), level.height,
                               level.width, kMarioHeight, kMarioWidth));
      }
      levels.push_back(std::move(level));
    }
  }
  if (levels.empty()) throw_data(fmt::format("no Mario level files in '{}'", dir.string()));
  return {alphabet, std::move(levels)};
}

TileAlphabet boxoban_alphabet() {
  return {{'#', ' ', '$', '.', '@'},
          {TileRole::solid, TileRole::empty, TileRole::box, TileRole::goal, TileRole::player_spawn}};
}

TileAlphabet loderunner_alphabet() {
  return {{'.', 'B', 'b', '-', '#', 'G', 'E', 'M'},
          {TileRole::empty, TileRole::solid, TileRole::solid, TileRole::other, TileRole::other,
           TileRole::reward, TileRole::enemy, TileRole::player_spawn}};
}

namespace {

constexpr int kBoxobanSide = 10;

void parse_boxoban_file(const fs::path& file, const std::string& label, const std::string& stem,
                        const TileAlphabet& alphabet, std::vector<LevelGrid>& out) {
  const auto text = read_file(file);
  const auto lines = split_lines(text);
  std::size_t i = 0;
  std::size_t block = 0;
  while (i < lines.size()) {
    if (trim(lines[i]).empty()) {
      ++i;
      continue;
    }
    if (lines[i].front() != ';') {
      throw_data(fmt::format("{}: line {}: expected ';' level id line", file.string(), i + 1));
    }
    const auto id_text = std::string(trim(lines[i].substr(1)));
    const std::size_t first = i + 1;
    std::size_t j = first;
    while (j < lines.size() && !trim(lines[j]).empty() && lines[j].front() != ';') ++j;
    if (j - first != kBoxobanSide) {
      throw_data(fmt::format("{}: level '{}' has {} rows, expected {}", file.string(), id_text,
                             j - first, kBoxobanSide));
    }
    std::string body;
    for (std::size_t r = first; r < j; ++r) {
      if (lines[r].size() != kBoxobanSide) {
        throw_data(fmt::format("{}: level '{}' line {} has {} columns, expected {}", file.string(),
                               id_text, r + 1, lines[r].size(), kBoxobanSide));
      }
      body.append(lines[r]);
      body.push_back('\n');
    }
    out.push_back(parse_level_text(body, alphabet, fmt::format("{}/{}#{}", label, stem, block), label,
                                   fmt::format("{} (level '{}')", file.string(), id_text)));
    ++block;
    i = j;
  }
}

}  // namespace

LevelCorpus parse_boxoban(const fs::path& dir) {
  require_dir(dir);
  const auto alphabet = boxoban_alphabet();
  std::vector<std::pair<std::string, fs::path>> set_dirs;
  if (!sorted_txt_files(dir, false).empty()) {
    set_dirs.emplace_back(dir_label(dir), dir);
  } else {
    for (const auto& sub : sorted_subdirs(dir)) set_dirs.emplace_back(sub.filename().string(), sub);
  }
  std::vector<LevelGrid> levels;
  for (const auto& [label, set_dir] : set_dirs) {
    const bool recursive = set_dir != dir;
    for (const auto& file : sorted_txt_files(set_dir, recursive)) {
      parse_boxoban_file(file, label, relative_stem(file, set_dir), alphabet, levels);
    }
  }
  if (levels.empty()) throw_data(fmt::format("no Boxoban levels in '{}'", dir.string()));
  return {alphabet, std::move(levels)};
}

std::vector<std::pair<std::string, std::size_t>> stratified_quotas(const LevelCorpus& corpus,
                                                                   std::size_t total) {
  const auto& sets = corpus.sets();
  if (sets.empty()) throw_config("cannot sample from an empty corpus");
  if (total > corpus.size()) {
    throw_config(fmt::format("sample size {} exceeds corpus size {}", total, corpus.size()));
  }
  const std::size_t base = total / sets.size();
  std::size_t remainder = total % sets.size();

  std::vector<std::size_t> order(sets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // sets() is sorted by label, so a stable sort by size keeps alphabetical ties
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sets[a].count > sets[b].count; });

  std::vector<std::pair<std::string, std::size_t>> quotas;
  quotas.reserve(sets.size());
  for (const auto& s : sets) quotas.emplace_back(s.label, base);
  for (std::size_t k = 0; k < remainder; ++k) ++quotas[order[k]].second;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (quotas[i].second > sets[i].count) {
      throw_data(fmt::format("set '{}' has {} levels, fewer than its quota of {}", sets[i].label,
                             sets[i].count, quotas[i].second));
    }
  }
  return quotas;
}

LevelCorpus sample_stratified(const LevelCorpus& corpus, std::size_t total, std::uint64_t seed) {
  const auto quotas = stratified_quotas(corpus, total);

  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < corpus.size(); ++i) members[corpus.levels()[i].set_label].push_back(i);

  std::vector<std::size_t> chosen;
  chosen.reserve(total);
  for (std::size_t s = 0; s < quotas.size(); ++s) {
    auto& pool = members[quotas[s].first];
    Rng rng(mix_seed(seed, s));
    const std::size_t want = quotas[s].second;
    // partial Fisher-Yates: the first `want` slots become a uniform sample
    for (std::size_t k = 0; k < want; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng.below(pool.size() - k));
      std::swap(pool[k], pool[pick]);
      chosen.push_back(pool[k]);
    }
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<LevelGrid> levels;
  levels.reserve(chosen.size());
  for (auto idx : chosen) levels.push_back(corpus.levels()[idx]);
  return {corpus.alphabet(), std::move(levels)};
}

}  // namespace genspace
