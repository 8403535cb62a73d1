#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genspace/correlate.hpp"
#include "genspace/corpus.hpp"
#include "genspace/dimred.hpp"
#include "genspace/metrics.hpp"

namespace genspace {

/// Everything one experiment needs. Only corpus_path has no default.
struct ExperimentConfig {
  std::string game = "synthetic";  // mario | boxoban | loderunner | synthetic
  std::filesystem::path corpus_path;
  std::vector<Algorithm> algorithms{Algorithm::pca, Algorithm::svd, Algorithm::mca, Algorithm::tsne};
  std::size_t sample_size = 0;  // 0 = every level
  int runs = 10;
  std::uint64_t base_seed = 0;
  std::vector<Bc> bc_profile;   // empty = the game's default profile
  TsneConfig tsne;
  std::filesystem::path output_dir = "genspace-out";
  int workers = 1;
  std::size_t pair_cap = 10'000'000;
  std::filesystem::path alphabet_path;       // overrides the game's built-in alphabet
  std::filesystem::path mario_mapping_path;  // overrides the default raw-symbol mapping
  bool pipe_is_solid = true;
  bool write_plots = true;

  [[nodiscard]] std::vector<Bc> effective_profile() const;
};

inline constexpr std::string_view kOutputDirEnv = "GSC_OUTPUT_DIR";

/// JSON config; unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

/// Throws a config error when a field is out of range.
void validate(const ExperimentConfig& cfg);

LevelCorpus load_corpus(const ExperimentConfig& cfg);

/// The levels used by run k: a stratified sample seeded base_seed + k, or the
/// whole corpus when sample_size is 0.
LevelCorpus run_sample(const LevelCorpus& corpus, const ExperimentConfig& cfg, int run);

/// Reduces one run's sample with one algorithm; t-SNE is seeded base_seed + k.
Projection fit_run(const LevelCorpus& sample, Algorithm a, const ExperimentConfig& cfg, int run);

struct ExperimentResult {
  CorrelationReport report;
  std::vector<Projection> projections;  // run-major, algorithms in config order
  std::vector<std::filesystem::path> artifacts;
};

/// Sample → encode → reduce → BCs → correlate → aggregate → report, writing
/// every artifact under output_dir. On failure a manifest marking the output
/// incomplete is written before the error propagates.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Artifact stem `<game>_<algorithm>_run<k>`.
std::string artifact_stem(std::string_view game, Algorithm a, int run);

/// Reorders `bcs` to match the projection's level order. Throws a data error
/// for levels missing from the dump.
std::vector<BcVector> align_bcs(const Projection& p, const std::vector<BcVector>& bcs);

}  // namespace genspace
