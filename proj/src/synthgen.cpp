#include "genspace/synthgen.hpp"

#include <fmt/core.h>

#include "genspace/error.hpp"
#include "genspace/report.hpp"
#include "genspace/rng.hpp"

namespace genspace {

namespace {

void validate(const SynthSpec& spec) {
  if (spec.height < 1 || spec.width < 1) throw_config("synthetic levels need a positive size");
  if (spec.n_levels < 1) throw_config("synthetic corpus needs at least one level");
  if (!(spec.density_lo >= 0.0 && spec.density_lo <= spec.density_hi && spec.density_hi <= 1.0)) {
    throw_config("density range must satisfy 0 <= lo <= hi <= 1");
  }
}

char symbol_for(const TileAlphabet& alphabet, TileRole role) {
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (alphabet.roles()[i] == role) return alphabet.symbols()[i];
  }
  throw_config(fmt::format("synthetic alphabet has no '{}' symbol", to_string(role)));
}

}  // namespace

TileAlphabet synthetic_alphabet() { return {{'.', '#'}, {TileRole::empty, TileRole::solid}}; }

LevelCorpus generate_density_corpus(const SynthSpec& spec) {
  validate(spec);
  const char empty = symbol_for(spec.alphabet, TileRole::empty);
  const char solid = symbol_for(spec.alphabet, TileRole::solid);
  const auto cells = static_cast<std::size_t>(spec.height) * static_cast<std::size_t>(spec.width);

  std::vector<LevelGrid> levels(spec.n_levels);
  for (std::size_t k = 0; k < spec.n_levels; ++k) {
    Rng rng(mix_seed(spec.seed, k));
    const double density = spec.density_lo + (spec.density_hi - spec.density_lo) * rng.uniform();
    auto& level = levels[k];
    level.set_label = "synthetic-density";
    level.level_id = fmt::format("synthetic-density/level{:05}", k);
    level.height = spec.height;
    level.width = spec.width;
    level.cells.resize(cells);
    for (auto& c : level.cells) c = rng.uniform() < density ? solid : empty;
  }
  return {spec.alphabet, std::move(levels)};
}

LevelCorpus generate_cluster_corpus(const SynthSpec& spec) {
  validate(spec);
  if (spec.templates.empty()) throw_config("cluster corpus needs at least one template");
  if (!(spec.mutation_rate >= 0.0 && spec.mutation_rate <= 0.5)) {
    throw_config("mutation rate must be within [0, 0.5]");
  }
  for (const auto& t : spec.templates) {
    if (t.level.height != spec.height || t.level.width != spec.width) {
      throw_config(fmt::format("template '{}' is {}x{}, expected {}x{}", t.name, t.level.height, t.level.width,
                               spec.height, spec.width));
    }
  }
  const auto& symbols = spec.alphabet.symbols();
  const auto t_count = static_cast<std::uint64_t>(symbols.size());

  std::vector<LevelGrid> levels(spec.n_levels);
  for (std::size_t k = 0; k < spec.n_levels; ++k) {
    const auto& tmpl = spec.templates[k % spec.templates.size()];
    Rng rng(mix_seed(spec.seed, k));
    auto& level = levels[k];
    level.set_label = tmpl.name;
    level.level_id = fmt::format("{}/level{:05}", tmpl.name, k);
    level.height = spec.height;
    level.width = spec.width;
    level.cells = tmpl.level.cells;
    for (auto& c : level.cells) {
      if (rng.uniform() >= spec.mutation_rate || t_count < 2) continue;
      // uniform over the other T−1 symbols
      const int current = spec.alphabet.index_of(c);
      auto pick = static_cast<int>(rng.below(t_count - 1));
      if (pick >= current) ++pick;
      c = symbols[static_cast<std::size_t>(pick)];
    }
  }
  return {spec.alphabet, std::move(levels)};
}

void write_corpus_text(const LevelCorpus& corpus, const std::filesystem::path& dir) {
  for (const auto& level : corpus.levels()) {
    auto name = level.level_id;
    if (auto slash = name.rfind('/'); slash != std::string::npos) name = name.substr(slash + 1);
    for (auto& ch : name) {
      if (ch == '#' || ch == '/') ch = '_';
    }
    write_text_file(dir / (name + ".txt"), serialize_level(level));
  }
}

}  // namespace genspace
