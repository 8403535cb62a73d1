#include "genspace/metrics.hpp"

#include <fmt/core.h>

#include <array>

#include "genspace/error.hpp"

namespace genspace {

namespace {

// role lookup per symbol byte, built once per call
struct RoleTable {
  std::array<TileRole, 256> roles{};

  explicit RoleTable(const TileAlphabet& alphabet) {
    roles.fill(TileRole::other);
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      roles[static_cast<unsigned char>(alphabet.symbols()[i])] = alphabet.roles()[i];
    }
  }

  TileRole operator()(char c) const noexcept { return roles[static_cast<unsigned char>(c)]; }
};

std::size_t count_role(const LevelGrid& level, const TileAlphabet& alphabet, TileRole role) {
  const RoleTable roles(alphabet);
  std::size_t n = 0;
  for (char c : level.cells) n += roles(c) == role ? 1 : 0;
  return n;
}

std::vector<char> solid_mask(const LevelGrid& level, const TileAlphabet& alphabet, SolidRule rule) {
  const RoleTable roles(alphabet);
  std::vector<char> mask(level.cells.size());
  for (std::size_t k = 0; k < level.cells.size(); ++k) mask[k] = rule.is_solid(roles(level.cells[k])) ? 1 : 0;
  return mask;
}

}  // namespace

std::string_view to_string(Bc bc) {
  switch (bc) {
    case Bc::empty_space:
      return "ES";
    case Bc::linearity:
      return "Lin";
    case Bc::enemy_count:
      return "EC";
    case Bc::contiguity:
      return "Contig";
  }
  return "?";
}

std::optional<Bc> parse_bc(std::string_view name) {
  for (auto bc : {Bc::empty_space, Bc::linearity, Bc::enemy_count, Bc::contiguity}) {
    if (name == to_string(bc)) return bc;
  }
  return std::nullopt;
}

std::size_t bc_empty_space(const LevelGrid& level, const TileAlphabet& alphabet) {
  return count_role(level, alphabet, TileRole::empty);
}

std::size_t bc_enemy_count(const LevelGrid& level, const TileAlphabet& alphabet) {
  if (!alphabet.has_role(TileRole::enemy)) {
    throw_data(fmt::format("enemy count is unsupported for level '{}': the alphabet has no enemy tiles",
                           level.level_id));
  }
  return count_role(level, alphabet, TileRole::enemy);
}

std::size_t bc_linearity(const LevelGrid& level, const TileAlphabet& alphabet, SolidRule rule) {
  const auto solid = solid_mask(level, alphabet, rule);
  const auto w = static_cast<std::size_t>(level.width);
  std::size_t n = 0;
  for (std::size_t r = 0; r < static_cast<std::size_t>(level.height); ++r) {
    for (std::size_t c = 0; c + 1 < w; ++c) n += solid[r * w + c] & solid[r * w + c + 1];
  }
  return n;
}

std::size_t bc_contiguity(const LevelGrid& level, const TileAlphabet& alphabet, SolidRule rule) {
  const auto solid = solid_mask(level, alphabet, rule);
  const auto w = static_cast<std::size_t>(level.width);
  const auto h = static_cast<std::size_t>(level.height);
  std::size_t n = 0;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (!solid[r * w + c]) continue;
      if (c + 1 < w) n += solid[r * w + c + 1];
      if (r + 1 < h) n += solid[(r + 1) * w + c];
    }
  }
  return n;
}

double compute_bc(Bc bc, const LevelGrid& level, const TileAlphabet& alphabet, SolidRule rule) {
  switch (bc) {
    case Bc::empty_space:
      return static_cast<double>(bc_empty_space(level, alphabet));
    case Bc::linearity:
      return static_cast<double>(bc_linearity(level, alphabet, rule));
    case Bc::enemy_count:
      return static_cast<double>(bc_enemy_count(level, alphabet));
    case Bc::contiguity:
      return static_cast<double>(bc_contiguity(level, alphabet, rule));
  }
  return 0.0;
}

std::vector<Bc> game_profile(std::string_view game) {
  if (game == "mario" || game == "loderunner") return {Bc::empty_space, Bc::linearity, Bc::enemy_count};
  if (game == "boxoban") return {Bc::empty_space, Bc::contiguity};
  if (game == "synthetic") return {Bc::empty_space, Bc::linearity, Bc::contiguity};
  throw_config(fmt::format("unknown game '{}'", game));
}

std::vector<BcVector> bc_profile(const LevelCorpus& corpus, const std::vector<Bc>& profile, SolidRule rule) {
  std::vector<BcVector> out;
  out.reserve(corpus.size());
  for (const auto& level : corpus.levels()) {
    BcVector v{level.level_id, level.set_label, {}};
    v.values.reserve(profile.size());
    for (auto bc : profile) v.values.emplace_back(bc, compute_bc(bc, level, corpus.alphabet(), rule));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace genspace
