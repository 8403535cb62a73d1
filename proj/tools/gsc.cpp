// gsc: generative-space compression experiments from the command line.
#include <fmt/core.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "genspace/dumps.hpp"
#include "genspace/error.hpp"
#include "genspace/experiment.hpp"
#include "genspace/report.hpp"
#include "genspace/synthgen.hpp"

using namespace genspace;

namespace {

// Flags that mirror config fields. Unset flags leave the config untouched.
struct Overrides {
  std::string config;
  std::optional<std::string> game, corpus, output_dir, alphabet, mario_mapping;
  std::vector<std::string> algorithms, bcs;
  std::optional<std::size_t> sample_size, pair_cap;
  std::optional<int> runs, workers, iterations;
  std::optional<std::uint64_t> seed;
  std::optional<double> perplexity, learning_rate;
  bool pipe_not_solid = false;
  bool no_plots = false;

  void add_corpus_flags(CLI::App* app) {
    app->add_option("-c,--config", config, "JSON experiment config")->check(CLI::ExistingFile);
    app->add_option("--game", game, "mario, boxoban, loderunner or synthetic");
    app->add_option("--corpus", corpus, "corpus directory");
    app->add_option("--alphabet", alphabet, "tile alphabet file");
    app->add_option("--mario-mapping", mario_mapping, "raw Mario symbol mapping file");
  }

  void add_run_flags(CLI::App* app) {
    add_corpus_flags(app);
    app->add_option("--algorithms", algorithms, "subset of PCA,SVD,MCA,TSNE")->delimiter(',');
    app->add_option("--bcs", bcs, "BC profile, e.g. ES,Lin,EC")->delimiter(',');
    app->add_option("--sample-size", sample_size, "levels per run, 0 for all");
    app->add_option("--runs", runs);
    app->add_option("--seed", seed, "base seed; run k uses seed+k");
    app->add_option("--workers", workers);
    app->add_option("--pair-cap", pair_cap, "warn above this many level pairs");
    app->add_option("--perplexity", perplexity);
    app->add_option("--iterations", iterations);
    app->add_option("--learning-rate", learning_rate);
    app->add_option("-o,--output-dir", output_dir);
    app->add_flag("--pipe-not-solid", pipe_not_solid, "do not count pipes as solid");
    app->add_flag("--no-plots", no_plots);
  }

  [[nodiscard]] ExperimentConfig build() const {
    ExperimentConfig cfg = config.empty() ? ExperimentConfig{} : load_config(config);
    if (game) cfg.game = *game;
    if (corpus) cfg.corpus_path = *corpus;
    if (alphabet) cfg.alphabet_path = *alphabet;
    if (mario_mapping) cfg.mario_mapping_path = *mario_mapping;
    if (!algorithms.empty()) {
      cfg.algorithms.clear();
      for (const auto& name : algorithms) {
        auto a = parse_algorithm(name);
        if (!a) throw_config(fmt::format("unknown algorithm '{}'", name));
        cfg.algorithms.push_back(*a);
      }
    }
    if (!bcs.empty()) {
      cfg.bc_profile.clear();
      for (const auto& name : bcs) {
        auto bc = parse_bc(name);
        if (!bc) throw_config(fmt::format("unknown BC '{}'", name));
        cfg.bc_profile.push_back(*bc);
      }
    }
    if (sample_size) cfg.sample_size = *sample_size;
    if (runs) cfg.runs = *runs;
    if (seed) cfg.base_seed = *seed;
    if (workers) cfg.workers = *workers;
    if (pair_cap) cfg.pair_cap = *pair_cap;
    if (perplexity) cfg.tsne.perplexity = *perplexity;
    if (iterations) cfg.tsne.iterations = *iterations;
    if (learning_rate) cfg.tsne.learning_rate = *learning_rate;
    if (pipe_not_solid) cfg.pipe_is_solid = false;
    if (no_plots) cfg.write_plots = false;
    // flag beats environment beats config file
    if (output_dir) {
      cfg.output_dir = *output_dir;
    } else if (const char* env = std::getenv(std::string(kOutputDirEnv).c_str()); env && *env) {
      cfg.output_dir = env;
    }
    return cfg;
  }
};

int cmd_run(const Overrides& o) {
  const auto cfg = o.build();
  const auto result = run_experiment(cfg);
  write_report_table(std::cout, result.report);
  fmt::print("artifacts in {}\n", cfg.output_dir.string());
  return 0;
}

int cmd_ingest(const Overrides& o, const std::string& bc_out) {
  auto cfg = o.build();
  if (cfg.corpus_path.empty()) throw_config("--corpus is required");
  const auto corpus = load_corpus(cfg);
  fmt::print("{} levels, {}×{}, {} symbols\n", corpus.size(), corpus.height(), corpus.width(),
             corpus.alphabet().size());
  for (const auto& s : corpus.sets()) fmt::print("  {}: {}\n", s.label, s.count);
  if (!bc_out.empty()) {
    save_bcs(bc_out, bc_profile(corpus, cfg.effective_profile(), SolidRule{cfg.pipe_is_solid}));
  }
  return 0;
}

struct CompressArgs {
  std::string algorithm = "PCA";
  int run = 0;
  std::string out, svg, bc_out;
};

int cmd_compress(const Overrides& o, const CompressArgs& args) {
  auto cfg = o.build();
  auto a = parse_algorithm(args.algorithm);
  if (!a) throw_config(fmt::format("unknown algorithm '{}'", args.algorithm));
  if (args.run < 0) throw_config("--run must be non-negative");
  cfg.algorithms = {*a};
  validate(cfg);
  const auto corpus = load_corpus(cfg);
  const auto sample = run_sample(corpus, cfg, args.run);
  const auto projection = fit_run(sample, *a, cfg, args.run);
  save_projection(args.out, projection);
  if (!args.svg.empty()) {
    render_scatter(
        make_plot_spec(projection, fmt::format("{} {} run {}", cfg.game, to_string(*a), args.run), args.svg));
  }
  if (!args.bc_out.empty()) {
    save_bcs(args.bc_out, bc_profile(sample, cfg.effective_profile(), SolidRule{cfg.pipe_is_solid}));
  }
  if (projection.explained) {
    fmt::print("{} on {} levels; explained {} {}\n", to_string(*a), projection.size(), (*projection.explained)[0],
               (*projection.explained)[1]);
  } else {
    fmt::print("{} on {} levels\n", to_string(*a), projection.size());
  }
  return 0;
}

int cmd_evaluate(const std::string& projection_path, const std::string& bc_path, const std::vector<std::string>& names) {
  const auto projection = load_projection(projection_path);
  const auto bcs = align_bcs(projection, load_bcs(bc_path));
  std::vector<Bc> profile;
  if (names.empty()) {
    for (const auto& [bc, _] : bcs.front().values) profile.push_back(bc);
  } else {
    for (const auto& name : names) {
      auto bc = parse_bc(name);
      if (!bc) throw_config(fmt::format("unknown BC '{}'", name));
      profile.push_back(*bc);
    }
  }
  const auto results = correlate_projection(projection, bcs, profile);
  fmt::print("algorithm,bc,rho,p,pairs\n");
  for (std::size_t b = 0; b < profile.size(); ++b) {
    fmt::print("{},{},{},{},{}\n", to_string(projection.algorithm), to_string(profile[b]), results[b].rho,
               results[b].p, results[b].m);
  }
  return 0;
}

int cmd_plot(const std::string& projection_path, const std::string& out, std::string title, bool no_extremes) {
  auto projection = load_projection(projection_path);
  if (title.empty()) title = std::string(to_string(projection.algorithm));
  render_scatter(make_plot_spec(std::move(projection), title, out, !no_extremes));
  return 0;
}

struct SynthArgs {
  std::string mode = "density";
  std::string out;
  std::vector<std::string> templates;
  SynthSpec spec;
};

// Two contrasting layouts used when no template files are given.
std::vector<ClusterTemplate> default_templates(int h, int w) {
  ClusterTemplate floor{"floor", {"", "", h, w, std::string(static_cast<std::size_t>(h * w), '.')}};
  ClusterTemplate pillars{"pillars", {"", "", h, w, std::string(static_cast<std::size_t>(h * w), '.')}};
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const auto i = static_cast<std::size_t>(r * w + c);
      if (r >= h - h / 3) floor.level.cells[i] = '#';
      if (c % 3 == 0) pillars.level.cells[i] = '#';
    }
  }
  return {floor, pillars};
}

int cmd_synth(SynthArgs args) {
  auto& spec = args.spec;
  LevelCorpus corpus;
  if (args.mode == "density") {
    corpus = generate_density_corpus(spec);
  } else if (args.mode == "cluster") {
    if (args.templates.empty()) {
      spec.templates = default_templates(spec.height, spec.width);
    } else {
      for (const auto& path : args.templates) {
        std::ifstream in(path);
        if (!in) throw_data(fmt::format("cannot open template '{}'", path));
        std::ostringstream ss;
        ss << in.rdbuf();
        const auto name = std::filesystem::path(path).stem().string();
        spec.templates.push_back({name, parse_level_text(ss.str(), spec.alphabet, name, name, path)});
      }
      spec.height = spec.templates.front().level.height;
      spec.width = spec.templates.front().level.width;
    }
    corpus = generate_cluster_corpus(spec);
  } else {
    throw_config(fmt::format("unknown synth mode '{}' (expected density or cluster)", args.mode));
  }
  write_corpus_text(corpus, args.out);
  fmt::print("{} levels, {}×{}, written to {}\n", corpus.size(), corpus.height(), corpus.width(), args.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compress tile-based level corpora to 2D and correlate with behavioral characteristics"};
  app.require_subcommand(1);

  Overrides run_o;
  auto* run = app.add_subcommand("run", "full experiment from a config file and flag overrides");
  run_o.add_run_flags(run);

  Overrides ingest_o;
  std::string ingest_bc_out;
  auto* ingest = app.add_subcommand("ingest", "parse and validate a corpus, print its statistics");
  ingest_o.add_corpus_flags(ingest);
  ingest->add_option("--bc-out", ingest_bc_out, "also write the BC dump for every level");
  ingest->add_option("--bcs", ingest_o.bcs, "BC profile for --bc-out")->delimiter(',');
  ingest->add_flag("--pipe-not-solid", ingest_o.pipe_not_solid);

  Overrides compress_o;
  CompressArgs compress_args;
  auto* compress = app.add_subcommand("compress", "one projection of run k to a CSV dump");
  compress_o.add_run_flags(compress);
  compress->add_option("-a,--algorithm", compress_args.algorithm, "PCA, SVD, MCA or TSNE");
  compress->add_option("--run", compress_args.run, "run index k: sample and t-SNE seed are seed+k");
  compress->add_option("--out", compress_args.out, "projection CSV")->required();
  compress->add_option("--svg", compress_args.svg, "scatter plot");
  compress->add_option("--bc-out", compress_args.bc_out, "BC dump of the sampled levels");

  std::string eval_projection, eval_bcs;
  std::vector<std::string> eval_profile;
  auto* evaluate = app.add_subcommand("evaluate", "correlate a projection dump against a BC dump");
  evaluate->add_option("projection", eval_projection)->required()->check(CLI::ExistingFile);
  evaluate->add_option("bc_dump", eval_bcs)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--bcs", eval_profile, "BCs to correlate; default all in the dump")->delimiter(',');

  std::string plot_projection, plot_out, plot_title;
  bool plot_no_extremes = false;
  auto* plot = app.add_subcommand("plot", "render a projection dump as an SVG scatter");
  plot->add_option("projection", plot_projection)->required()->check(CLI::ExistingFile);
  plot->add_option("--out", plot_out)->required();
  plot->add_option("--title", plot_title);
  plot->add_flag("--no-extremes", plot_no_extremes, "omit closest/farthest callouts");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "write a synthetic level corpus");
  synth->add_option("--mode", synth_args.mode, "density or cluster");
  synth->add_option("--out", synth_args.out, "output directory")->required();
  synth->add_option("-n,--levels", synth_args.spec.n_levels);
  synth->add_option("--height", synth_args.spec.height);
  synth->add_option("--width", synth_args.spec.width);
  synth->add_option("--seed", synth_args.spec.seed);
  synth->add_option("--density-lo", synth_args.spec.density_lo);
  synth->add_option("--density-hi", synth_args.spec.density_hi);
  synth->add_option("--mutation-rate", synth_args.spec.mutation_rate);
  synth->add_option("--template", synth_args.templates, "template level file (cluster mode, repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::config);
  }

  try {
    if (*run) return cmd_run(run_o);
    if (*ingest) return cmd_ingest(ingest_o, ingest_bc_out);
    if (*compress) return cmd_compress(compress_o, compress_args);
    if (*evaluate) return cmd_evaluate(eval_projection, eval_bcs, eval_profile);
    if (*plot) return cmd_plot(plot_projection, plot_out, plot_title, plot_no_extremes);
    if (*synth) return cmd_synth(synth_args);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(ErrorKind::data);
  }
  return 0;
}
