#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace genspace {

enum class TileRole : std::uint8_t {
  empty,
  solid,
  enemy,
  pipe,
  reward,
  box,
  goal,
  player_spawn,
  other,
};

inline constexpr std::array<TileRole, 9> kAllRoles{
    TileRole::empty, TileRole::solid,  TileRole::enemy,        TileRole::pipe, TileRole::reward,
    TileRole::box,   TileRole::goal,   TileRole::player_spawn, TileRole::other};

std::string_view to_string(TileRole role);
std::optional<TileRole> parse_role(std::string_view name);

/// Ordered set of tile symbols, each tagged with a semantic role. Declaration
/// order fixes the tile-type index used by every encoding.
class TileAlphabet {
 public:
  TileAlphabet() = default;
  TileAlphabet(std::vector<char> symbols, std::vector<TileRole> roles);

  /// Parses the `'<c>' = <role>` key-value format; `#` starts a comment line.
  static TileAlphabet parse(std::string_view text);
  static TileAlphabet load(const std::filesystem::path& path);
  [[nodiscard]] std::string serialize() const;

  [[nodiscard]] std::size_t size() const noexcept { return symbols_.size(); }
  [[nodiscard]] const std::vector<char>& symbols() const noexcept { return symbols_; }
  [[nodiscard]] const std::vector<TileRole>& roles() const noexcept { return roles_; }

  /// Index of `symbol` in declaration order, or -1 when not in the alphabet.
  [[nodiscard]] int index_of(char symbol) const noexcept {
    return index_[static_cast<unsigned char>(symbol)];
  }
  [[nodiscard]] bool contains(char symbol) const noexcept { return index_of(symbol) >= 0; }
  [[nodiscard]] TileRole role_of(char symbol) const;
  [[nodiscard]] bool has_role(TileRole role) const noexcept;

  friend bool operator==(const TileAlphabet& a, const TileAlphabet& b) {
    return a.symbols_ == b.symbols_ && a.roles_ == b.roles_;
  }

 private:
  std::vector<char> symbols_;
  std::vector<TileRole> roles_;
  std::array<int, 256> index_ = make_empty_index();

  static constexpr std::array<int, 256> make_empty_index() {
    std::array<int, 256> idx{};
    idx.fill(-1);
    return idx;
  }
};

/// One level: row-major H×W tile symbols.
struct LevelGrid {
  std::string level_id;
  std::string set_label;
  int height = 0;
  int width = 0;
  std::string cells;

  [[nodiscard]] char at(int row, int col) const {
    return cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
                 static_cast<std::size_t>(col)];
  }

  friend bool operator==(const LevelGrid&, const LevelGrid&) = default;
};

struct SetInfo {
  std::string label;
  std::size_t count = 0;

  friend bool operator==(const SetInfo&, const SetInfo&) = default;
};

/// Validated, immutable collection of equally sized levels over one alphabet.
class LevelCorpus {
 public:
  LevelCorpus() = default;
  /// Throws a data error when sizes differ, ids repeat or a cell symbol is not
  /// in the alphabet.
  LevelCorpus(TileAlphabet alphabet, std::vector<LevelGrid> levels);

  [[nodiscard]] const TileAlphabet& alphabet() const noexcept { return alphabet_; }
  [[nodiscard]] const std::vector<LevelGrid>& levels() const noexcept { return levels_; }
  /// Sets sorted by label.
  [[nodiscard]] const std::vector<SetInfo>& sets() const noexcept { return sets_; }
  [[nodiscard]] std::size_t size() const noexcept { return levels_.size(); }
  [[nodiscard]] bool empty() const noexcept { return levels_.empty(); }
  [[nodiscard]] int height() const noexcept { return height_; }
  [[nodiscard]] int width() const noexcept { return width_; }

 private:
  TileAlphabet alphabet_;
  std::vector<LevelGrid> levels_;
  std::vector<SetInfo> sets_;
  int height_ = 0;
  int width_ = 0;
};

// Level text: one row of symbols per line, all lines of equal length.
LevelGrid parse_level_text(std::string_view text, const TileAlphabet& alphabet,
                           std::string level_id, std::string set_label,
                           const std::string& source_name);
std::string serialize_level(const LevelGrid& level);

/// Directory of level text files (`*.txt`), one level per file, one set named
/// after the directory.
LevelCorpus parse_vglc(const std::filesystem::path& dir, const TileAlphabet& alphabet);

/// Raw Mario-framework symbol to simplified five-type mapping.
class MarioMapping {
 public:
  /// Symbols of the simplified alphabet: Empty, Enemy, Solid, Pipe, Reward.
  static TileAlphabet simplified_alphabet();
  static MarioMapping defaults();
  /// Parses `'<raw>' = Empty|Enemy|Solid|Pipe|Reward` lines.
  static MarioMapping parse(std::string_view text);
  static MarioMapping load(const std::filesystem::path& path);

  void set(char raw, char simplified);
  [[nodiscard]] std::optional<char> map(char raw) const noexcept;
  [[nodiscard]] std::string serialize() const;

 private:
  std::array<char, 256> table_{};
};

inline constexpr int kMarioHeight = 16;
inline constexpr int kMarioWidth = 200;

/// One set per generator subdirectory; every level must be 16×200.
LevelCorpus parse_mario(const std::filesystem::path& dir, const MarioMapping& mapping);

TileAlphabet boxoban_alphabet();
TileAlphabet loderunner_alphabet();

/// Multi-level Boxoban files: `;`-prefixed id line then 10 rows of 10 symbols.
/// Each top-level subdirectory is a set.
LevelCorpus parse_boxoban(const std::filesystem::path& dir);

/// Per-set quotas for a stratified sample of `total` levels: ⌊total/#sets⌋
/// each, remainder one apiece to the largest sets (ties by label).
std::vector<std::pair<std::string, std::size_t>> stratified_quotas(const LevelCorpus& corpus,
                                                                   std::size_t total);

/// Uniform sample without replacement within each set, in corpus order.
LevelCorpus sample_stratified(const LevelCorpus& corpus, std::size_t total, std::uint64_t seed);

}  // namespace genspace
