#include "genspace/experiment.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "genspace/dumps.hpp"
#include "genspace/encode.hpp"
#include "genspace/error.hpp"
#include "genspace/report.hpp"
#include "genspace/synthgen.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace genspace {

namespace {

const std::vector<std::string> kGames{"mario", "boxoban", "loderunner", "synthetic"};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

template <class T>
T get_field(const json& j, const char* key, const T& fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw_config(fmt::format("config field '{}': {}", key, e.what()));
  }
}

json manifest_json(const ExperimentConfig& cfg, bool complete, const std::vector<fs::path>& artifacts,
                   const std::string& error) {
  json m;
  m["complete"] = complete;
  m["game"] = cfg.game;
  m["runs"] = cfg.runs;
  json algos = json::array();
  for (auto a : cfg.algorithms) algos.push_back(std::string(to_string(a)));
  m["algorithms"] = algos;
  json files = json::array();
  for (const auto& a : artifacts) files.push_back(a.lexically_relative(cfg.output_dir).generic_string());
  m["artifacts"] = files;
  if (!error.empty()) m["error"] = error;
  return m;
}

struct RunInputs {
  LevelCorpus sample;
  std::optional<DesignMatrix> onehot;
  std::optional<DesignMatrix> categorical;
  std::vector<BcVector> bcs;
};

struct TaskOutput {
  Projection projection;
  std::vector<SpearmanResult> correlations;
  std::vector<fs::path> artifacts;
};

TaskOutput run_task(const RunInputs& in, Algorithm a, const ExperimentConfig& cfg, int run,
                    const std::vector<Bc>& profile) {
  TaskOutput out;
  TsneConfig tsne = cfg.tsne;
  tsne.seed = cfg.base_seed + static_cast<std::uint64_t>(run);
  const auto& x = input_encoding(a) == EncodingKind::categorical ? *in.categorical : *in.onehot;
  out.projection = fit(a, x, tsne);
  out.correlations = correlate_projection(out.projection, in.bcs, profile);

  const auto stem = artifact_stem(cfg.game, a, run);
  const auto csv = cfg.output_dir / "projections" / (stem + ".csv");
  save_projection(csv, out.projection);
  out.artifacts.push_back(csv);
  if (cfg.write_plots) {
    const auto svg = cfg.output_dir / "plots" / (stem + ".svg");
    render_scatter(make_plot_spec(out.projection, fmt::format("{} {} run {}", cfg.game, to_string(a), run), svg));
    out.artifacts.push_back(svg);
    const auto extremes = find_extreme_pairs(out.projection);
    const auto palette = default_role_palette();
    const auto& levels = in.sample.levels();
    auto tile = [&](std::size_t idx, const std::string& suffix) {
      const auto path = cfg.output_dir / "plots" / (stem + suffix + ".svg");
      render_level_tilemap(levels[idx], in.sample.alphabet(), palette, path);
      out.artifacts.push_back(path);
    };
    tile(extremes.closest.first, "_closest_1");
    tile(extremes.closest.second, "_closest_2");
    tile(extremes.farthest.first, "_farthest_1");
    tile(extremes.farthest.second, "_farthest_2");
  }
  return out;
}

}  // namespace

std::vector<Bc> ExperimentConfig::effective_profile() const {
  return bc_profile.empty() ? game_profile(game) : bc_profile;
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw_config(fmt::format("config is not valid JSON: {}", e.what()));
  }
  if (!j.is_object()) throw_config("config must be a JSON object");
  static const std::vector<std::string> kKeys{
      "game",    "corpus_path", "algorithms",    "sample_size",   "runs",
      "base_seed", "bc_profile", "tsne",         "output_dir",    "workers",
      "pair_cap", "alphabet_path", "mario_mapping_path", "pipe_is_solid", "write_plots"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw_config(fmt::format("unknown config field '{}'", key));
    }
  }

  ExperimentConfig cfg;
  cfg.game = lower(get_field<std::string>(j, "game", cfg.game));
  cfg.corpus_path = get_field<std::string>(j, "corpus_path", "");
  if (j.contains("algorithms")) {
    cfg.algorithms.clear();
    for (const auto& name : get_field<std::vector<std::string>>(j, "algorithms", {})) {
      auto a = parse_algorithm(name);
      if (!a) throw_config(fmt::format("unknown algorithm '{}'", name));
      cfg.algorithms.push_back(*a);
    }
  }
  cfg.sample_size = get_field<std::size_t>(j, "sample_size", cfg.sample_size);
  cfg.runs = get_field<int>(j, "runs", cfg.runs);
  cfg.base_seed = get_field<std::uint64_t>(j, "base_seed", cfg.base_seed);
  for (const auto& name : get_field<std::vector<std::string>>(j, "bc_profile", {})) {
    auto bc = parse_bc(name);
    if (!bc) throw_config(fmt::format("unknown BC '{}' (expected ES, Lin, EC or Contig)", name));
    cfg.bc_profile.push_back(*bc);
  }
  if (j.contains("tsne")) {
    const auto& t = j.at("tsne");
    if (!t.is_object()) throw_config("config field 'tsne' must be an object");
    static const std::vector<std::string> kTsneKeys{"perplexity",         "iterations",       "learning_rate",
                                                    "early_exaggeration", "exaggeration_iters", "momentum_initial",
                                                    "momentum_final",     "momentum_switch_iter"};
    for (const auto& [key, _] : t.items()) {
      if (std::find(kTsneKeys.begin(), kTsneKeys.end(), key) == kTsneKeys.end()) {
        throw_config(fmt::format("unknown config field 'tsne.{}'", key));
      }
    }
    auto& c = cfg.tsne;
    c.perplexity = get_field<double>(t, "perplexity", c.perplexity);
    c.iterations = get_field<int>(t, "iterations", c.iterations);
    c.learning_rate = get_field<double>(t, "learning_rate", c.learning_rate);
    c.early_exaggeration = get_field<double>(t, "early_exaggeration", c.early_exaggeration);
    c.exaggeration_iters = get_field<int>(t, "exaggeration_iters", c.exaggeration_iters);
    c.momentum_initial = get_field<double>(t, "momentum_initial", c.momentum_initial);
    c.momentum_final = get_field<double>(t, "momentum_final", c.momentum_final);
    c.momentum_switch_iter = get_field<int>(t, "momentum_switch_iter", c.momentum_switch_iter);
  }
  cfg.output_dir = get_field<std::string>(j, "output_dir", cfg.output_dir.string());
  cfg.workers = get_field<int>(j, "workers", cfg.workers);
  cfg.pair_cap = get_field<std::size_t>(j, "pair_cap", cfg.pair_cap);
  cfg.alphabet_path = get_field<std::string>(j, "alphabet_path", "");
  cfg.mario_mapping_path = get_field<std::string>(j, "mario_mapping_path", "");
  cfg.pipe_is_solid = get_field<bool>(j, "pipe_is_solid", cfg.pipe_is_solid);
  cfg.write_plots = get_field<bool>(j, "write_plots", cfg.write_plots);
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw_config(fmt::format("cannot open config '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["game"] = cfg.game;
  j["corpus_path"] = cfg.corpus_path.string();
  json algos = json::array();
  for (auto a : cfg.algorithms) algos.push_back(std::string(to_string(a)));
  j["algorithms"] = algos;
  j["sample_size"] = cfg.sample_size;
  j["runs"] = cfg.runs;
  j["base_seed"] = cfg.base_seed;
  json bcs = json::array();
  for (auto bc : cfg.bc_profile) bcs.push_back(std::string(to_string(bc)));
  j["bc_profile"] = bcs;
  j["tsne"] = {{"perplexity", cfg.tsne.perplexity},
               {"iterations", cfg.tsne.iterations},
               {"learning_rate", cfg.tsne.learning_rate},
               {"early_exaggeration", cfg.tsne.early_exaggeration},
               {"exaggeration_iters", cfg.tsne.exaggeration_iters},
               {"momentum_initial", cfg.tsne.momentum_initial},
               {"momentum_final", cfg.tsne.momentum_final},
               {"momentum_switch_iter", cfg.tsne.momentum_switch_iter}};
  j["output_dir"] = cfg.output_dir.string();
  j["workers"] = cfg.workers;
  j["pair_cap"] = cfg.pair_cap;
  j["alphabet_path"] = cfg.alphabet_path.string();
  j["mario_mapping_path"] = cfg.mario_mapping_path.string();
  j["pipe_is_solid"] = cfg.pipe_is_solid;
  j["write_plots"] = cfg.write_plots;
  return j.dump(2);
}

void validate(const ExperimentConfig& cfg) {
  if (std::find(kGames.begin(), kGames.end(), cfg.game) == kGames.end()) {
    throw_config(fmt::format("unknown game '{}' (expected mario, boxoban, loderunner or synthetic)", cfg.game));
  }
  if (cfg.corpus_path.empty()) throw_config("corpus_path is required");
  if (cfg.algorithms.empty()) throw_config("at least one algorithm is required");
  if (cfg.runs < 1) throw_config("runs must be at least 1");
  if (cfg.workers < 1) throw_config("workers must be at least 1");
  if (cfg.output_dir.empty()) throw_config("output_dir must not be empty");
  validate(cfg.tsne);
}

LevelCorpus load_corpus(const ExperimentConfig& cfg) {
  std::error_code ec;
  if (!fs::exists(cfg.corpus_path, ec)) {
    throw_data(fmt::format("corpus path '{}' does not exist", cfg.corpus_path.string()));
  }
  if (cfg.game == "mario") {
    const auto mapping =
        cfg.mario_mapping_path.empty() ? MarioMapping::defaults() : MarioMapping::load(cfg.mario_mapping_path);
    return parse_mario(cfg.corpus_path, mapping);
  }
  if (cfg.game == "boxoban") return parse_boxoban(cfg.corpus_path);
  TileAlphabet alphabet;
  if (!cfg.alphabet_path.empty()) {
    alphabet = TileAlphabet::load(cfg.alphabet_path);
  } else {
    alphabet = cfg.game == "loderunner" ? loderunner_alphabet() : synthetic_alphabet();
  }
  return parse_vglc(cfg.corpus_path, alphabet);
}

LevelCorpus run_sample(const LevelCorpus& corpus, const ExperimentConfig& cfg, int run) {
  if (cfg.sample_size == 0) return corpus;
  return sample_stratified(corpus, cfg.sample_size, cfg.base_seed + static_cast<std::uint64_t>(run));
}

Projection fit_run(const LevelCorpus& sample, Algorithm a, const ExperimentConfig& cfg, int run) {
  TsneConfig tsne = cfg.tsne;
  tsne.seed = cfg.base_seed + static_cast<std::uint64_t>(run);
  const auto x = input_encoding(a) == EncodingKind::categorical ? encode_categorical(sample) : encode_onehot(sample);
  return fit(a, x, tsne);
}

std::string artifact_stem(std::string_view game, Algorithm a, int run) {
  return fmt::format("{}_{}_run{}", game, lower(to_string(a)), run);
}

std::vector<BcVector> align_bcs(const Projection& p, const std::vector<BcVector>& bcs) {
  std::map<std::string_view, const BcVector*> by_id;
  for (const auto& b : bcs) by_id.emplace(b.level_id, &b);
  std::vector<BcVector> out;
  out.reserve(p.size());
  for (const auto& id : p.row_ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw_data(fmt::format("BC dump has no entry for level '{}'", id));
    out.push_back(*it->second);
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult result;
  const auto manifest_path = cfg.output_dir / "manifest.json";
  try {
    const auto corpus = load_corpus(cfg);
    const auto profile = cfg.effective_profile();
    const SolidRule rule{cfg.pipe_is_solid};
    const bool need_onehot = std::any_of(cfg.algorithms.begin(), cfg.algorithms.end(),
                                         [](Algorithm a) { return input_encoding(a) == EncodingKind::onehot; });
    const bool need_categorical = std::any_of(cfg.algorithms.begin(), cfg.algorithms.end(), [](Algorithm a) {
      return input_encoding(a) == EncodingKind::categorical;
    });

    const auto n_algos = cfg.algorithms.size();
    std::vector<std::vector<SpearmanResult>> correlations(static_cast<std::size_t>(cfg.runs) * n_algos);
    result.projections.resize(correlations.size());

    for (int run = 0; run < cfg.runs; ++run) {
      RunInputs in{run_sample(corpus, cfg, run), std::nullopt, std::nullopt, {}};
      const auto pairs = pair_count(in.sample.size());
      if (pairs > cfg.pair_cap) {
        warn(fmt::format("run {}: {} level pairs exceed the budget of {}; this run will be slow", run, pairs,
                         cfg.pair_cap));
      }
      if (need_onehot) in.onehot = encode_onehot(in.sample);
      if (need_categorical) in.categorical = encode_categorical(in.sample);
      in.bcs = bc_profile(in.sample, profile, rule);
      const auto bc_path = cfg.output_dir / "bcs" / fmt::format("{}_run{}.csv", cfg.game, run);
      save_bcs(bc_path, in.bcs);
      result.artifacts.push_back(bc_path);

      // algorithms of one run share the encoded sample; each task owns its slot
      std::vector<std::optional<TaskOutput>> outputs(n_algos);
      std::vector<std::exception_ptr> errors(n_algos);
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t t = next++; t < n_algos; t = next++) {
          try {
            outputs[t] = run_task(in, cfg.algorithms[t], cfg, run, profile);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        }
      };
      const auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n_algos);
      if (n_threads <= 1) {
        worker();
      } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(worker);
      }
      for (std::size_t t = 0; t < n_algos; ++t) {
        if (outputs[t]) {
          for (auto& a : outputs[t]->artifacts) result.artifacts.push_back(std::move(a));
        }
      }
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
      for (std::size_t t = 0; t < n_algos; ++t) {
        const auto slot = static_cast<std::size_t>(run) * n_algos + t;
        result.projections[slot] = std::move(outputs[t]->projection);
        correlations[slot] = std::move(outputs[t]->correlations);
      }
    }

    auto& report = result.report;
    report.game = cfg.game;
    report.algorithms = cfg.algorithms;
    report.bcs = profile;
    for (std::size_t t = 0; t < n_algos; ++t) {
      for (std::size_t b = 0; b < profile.size(); ++b) {
        CorrelationCell cell;
        cell.algorithm = cfg.algorithms[t];
        cell.bc = profile[b];
        std::vector<std::pair<double, double>> pairs;
        for (int run = 0; run < cfg.runs; ++run) {
          const auto& r = correlations[static_cast<std::size_t>(run) * n_algos + t][b];
          cell.runs.push_back({run, r.rho, r.p});
          pairs.emplace_back(r.rho, r.p);
        }
        cell.aggregate = aggregate_runs(pairs);
        report.cells.push_back(std::move(cell));
      }
    }

    std::ostringstream csv;
    write_report_csv(csv, report);
    write_text_file(cfg.output_dir / "report.csv", csv.str());
    std::ostringstream table;
    write_report_table(table, report);
    write_text_file(cfg.output_dir / "report.txt", table.str());
    result.artifacts.push_back(cfg.output_dir / "report.csv");
    result.artifacts.push_back(cfg.output_dir / "report.txt");
    write_text_file(manifest_path, manifest_json(cfg, true, result.artifacts, "").dump(2) + "\n");
  } catch (const std::exception& e) {
    try {
      write_text_file(manifest_path, manifest_json(cfg, false, result.artifacts, e.what()).dump(2) + "\n");
    } catch (const std::exception&) {
      // output dir unwritable; the original error is the one worth reporting
    }
    throw;
  }
  return result;
}

}  // namespace genspace
