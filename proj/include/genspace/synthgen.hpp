#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "genspace/corpus.hpp"

namespace genspace {

/// Two symbols: '.' empty and '#' solid.
TileAlphabet synthetic_alphabet();

struct ClusterTemplate {
  std::string name;
  LevelGrid level;  // only height, width and cells are used
};

struct SynthSpec {
  int height = 12;
  int width = 12;
  TileAlphabet alphabet = synthetic_alphabet();
  std::size_t n_levels = 300;
  double density_lo = 0.1;
  double density_hi = 0.9;
  std::vector<ClusterTemplate> templates;
  double mutation_rate = 0.05;
  std::uint64_t seed = 0;
};

/// Level k draws a solid density uniformly from [density_lo, density_hi], then
/// makes each cell solid with that probability. Set "synthetic-density".
LevelCorpus generate_density_corpus(const SynthSpec& spec);

/// Levels are assigned to templates round-robin; each copies its template and
/// replaces every cell, with probability mutation_rate, by a different symbol
/// chosen uniformly.
LevelCorpus generate_cluster_corpus(const SynthSpec& spec);

/// Writes one `<level>.txt` per level into `dir` (VGLC layout).
void write_corpus_text(const LevelCorpus& corpus, const std::filesystem::path& dir);

}  // namespace genspace
