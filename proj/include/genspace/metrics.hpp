#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genspace/corpus.hpp"

namespace genspace {

/// Behavioral characteristics computed directly from tiles.
enum class Bc { empty_space, linearity, enemy_count, contiguity };

std::string_view to_string(Bc bc);  // "ES", "Lin", "EC", "Contig"
std::optional<Bc> parse_bc(std::string_view name);

/// Which roles count as solid. Mario pipes block horizontal traversal, so by
/// default they count too.
struct SolidRule {
  bool pipe_is_solid = true;

  [[nodiscard]] bool is_solid(TileRole r) const noexcept {
    return r == TileRole::solid || (pipe_is_solid && r == TileRole::pipe);
  }
};

std::size_t bc_empty_space(const LevelGrid& level, const TileAlphabet& alphabet);
/// Throws a data error when the alphabet has no enemy role.
std::size_t bc_enemy_count(const LevelGrid& level, const TileAlphabet& alphabet);
/// Horizontally adjacent solid pairs.
std::size_t bc_linearity(const LevelGrid& level, const TileAlphabet& alphabet, SolidRule rule = {});
/// 4-neighbour adjacent solid pairs, each unordered pair once.
std::size_t bc_contiguity(const LevelGrid& level, const TileAlphabet& alphabet, SolidRule rule = {});

double compute_bc(Bc bc, const LevelGrid& level, const TileAlphabet& alphabet, SolidRule rule = {});

struct BcVector {
  std::string level_id;
  std::string set_label;
  std::vector<std::pair<Bc, double>> values;

  [[nodiscard]] std::optional<double> get(Bc bc) const noexcept {
    for (const auto& [k, v] : values) {
      if (k == bc) return v;
    }
    return std::nullopt;
  }
};

/// BC set per game: mario and loderunner {ES, Lin, EC}; boxoban {ES, Contig};
/// synthetic {ES, Lin, Contig}.
std::vector<Bc> game_profile(std::string_view game);

std::vector<BcVector> bc_profile(const LevelCorpus& corpus, const std::vector<Bc>& profile,
                                 SolidRule rule = {});

}  // namespace genspace
