// Command-line entry point for the semantic communication simulator.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "semcom/analysis.hpp"
#include "semcom/channel.hpp"
#include "semcom/config.hpp"
#include "semcom/context.hpp"
#include "semcom/dataset.hpp"
#include "semcom/encoder.hpp"
#include "semcom/experiments.hpp"
#include "semcom/plot.hpp"
#include "semcom/receiver.hpp"
#include "semcom/report.hpp"

namespace fs = std::filesystem;
using namespace semcom;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::string config_path;
  std::string out_dir = ".";
  bool quick = false;
};

ExperimentConfig resolve_config(const GlobalOptions& g) {
  ExperimentConfig cfg = g.config_path.empty() ? config_from_json(nlohmann::json::object()) : load_config(g.config_path);
  if (g.seed) cfg.seed = *g.seed;
  if (g.quick) cfg.quick = true;
  return cfg;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string out_path(const GlobalOptions& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return (fs::path(g.out_dir) / name).string();
}

void write_report(const GlobalOptions& g, const ExperimentConfig& cfg, const std::string& command,
                  const std::vector<std::string>& outputs, nlohmann::json summary) {
  const nlohmann::json echo = to_json(cfg);
  nlohmann::json report = {{"command", command},
                           {"config", echo},
                           {"config_hash", content_hash(echo.dump())},
                           {"outputs", outputs},
                           {"summary", std::move(summary)}};
  const auto path = out_path(g, "run_report_" + command + ".json");
  write_text(path, report.dump(2) + "\n");
  std::cout << "wrote " << path << "\n";
}

std::string save(const GlobalOptions& g, const CsvTable& table, const std::string& name) {
  const auto path = out_path(g, name);
  table.write(path);
  std::cout << "wrote " << path << "\n";
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OOD-robust semantic communication simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--config", g.config_path, "Experiment config JSON")->check(CLI::ExistingFile);
  app.add_option("--out-dir", g.out_dir, "Directory for experiment outputs");
  app.add_flag("--quick", g.quick, "Use the small dataset configuration");

  int exit_code = 0;
  auto run = [&](auto&& body) {
    return [&exit_code, body]() {
      try {
        body();
      } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        exit_code = kExitConfig;
      } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        exit_code = kExitConfig;
      } catch (const std::out_of_range& e) {
        std::cerr << "unknown entry: " << e.what() << "\n";
        exit_code = kExitConfig;
      } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        exit_code = kExitNumerical;
      } catch (const std::domain_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        exit_code = kExitNumerical;
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        exit_code = 1;
      }
    };
  };

  // taxonomy export
  auto* taxonomy_cmd = app.add_subcommand("taxonomy", "Label vocabulary");
  taxonomy_cmd->require_subcommand(1);
  std::string taxonomy_out = "taxonomy.json";
  auto* taxonomy_export = taxonomy_cmd->add_subcommand("export", "Write the taxonomy as JSON");
  taxonomy_export->add_option("--out", taxonomy_out);
  taxonomy_export->callback(run([&] {
    const auto cfg = resolve_config(g);
    write_text(taxonomy_out, to_json(cfg.taxonomy).dump(2) + "\n");
    std::cout << "wrote " << taxonomy_out << "\n";
  }));

  // dataset gen
  auto* dataset_cmd = app.add_subcommand("dataset", "Synthetic scene datasets");
  dataset_cmd->require_subcommand(1);
  auto* dataset_gen = dataset_cmd->add_subcommand("gen", "Generate a scene dataset");
  std::optional<int> dataset_scenes;
  std::optional<double> dataset_fraction;
  std::string dataset_out = "scenes.json";
  dataset_gen->add_option("--scenes", dataset_scenes, "Number of scenes");
  dataset_gen->add_option("--ood-fraction", dataset_fraction, "Target share of OOD objects");
  dataset_gen->add_option("--out", dataset_out);
  dataset_gen->callback(run([&] {
    const auto cfg = resolve_config(g);
    const auto scenes = generate_dataset(cfg.prior, cfg.taxonomy, dataset_scenes.value_or(cfg.dataset_scenes()),
                                         dataset_fraction.value_or(cfg.dataset.ood_fraction),
                                         Rng::derive_seed(cfg.seed, "dataset"));
    write_text(dataset_out, scenes_to_json(scenes).dump() + "\n");
    std::cout << "wrote " << dataset_out << " (" << scenes.size() << " scenes, OOD share "
              << ood_share(scenes, cfg.taxonomy) << ")\n";
  }));

  // encode
  auto* encode_cmd = app.add_subcommand("encode", "Plan A / Plan B semantic encoding of a scene file");
  std::string encode_scenes_path;
  std::string encode_out = "semvec.json";
  encode_cmd->add_option("--scenes", encode_scenes_path)->required()->check(CLI::ExistingFile);
  encode_cmd->add_option("--out", encode_out);
  encode_cmd->callback(run([&] {
    const auto cfg = resolve_config(g);
    const ExperimentEnv env(cfg);
    const auto scenes = scenes_from_json(read_json(encode_scenes_path));
    auto arr = nlohmann::json::array();
    for (std::size_t s = 0; s < scenes.size(); ++s)
      arr.push_back(to_json(encode_scene(scenes[s], env.models(), cfg.encoder, Rng::derive_seed(cfg.seed, "encode", s))));
    write_text(encode_out, nlohmann::json{{"scenes", arr}}.dump() + "\n");
    std::cout << "wrote " << encode_out << "\n";
  }));

  // embed inspect
  auto* embed_cmd = app.add_subcommand("embed", "Embedding providers");
  embed_cmd->require_subcommand(1);
  auto* embed_inspect = embed_cmd->add_subcommand("inspect", "Print a token vector and its nearest labels");
  std::string embed_provider = "cooccurrence";
  std::string embed_path;
  std::string embed_word;
  embed_inspect->add_option("--provider", embed_provider)->check(CLI::IsMember({"cooccurrence", "file"}));
  embed_inspect->add_option("--path", embed_path);
  embed_inspect->add_option("--word", embed_word)->required();
  embed_inspect->callback(run([&] {
    const auto cfg = resolve_config(g);
    const ExperimentEnv env(cfg);
    std::optional<FileEmbedding> file;
    if (embed_provider == "file") {
      if (embed_path.empty()) throw ConfigError("--path is required for the file provider");
      file = FileEmbedding::load(embed_path);
    }
    const EmbeddingProvider& provider = file ? static_cast<const EmbeddingProvider&>(*file) : env.embedding();
    const EmbeddingVector v = provider.token_vector(embed_word);
    std::cout << "provider " << provider.name() << ", dimension " << provider.dimension() << ", norm " << v.norm()
              << "\n";
    std::vector<std::pair<double, LabelIndex>> sims;
    for (LabelIndex j = 0; j < cfg.taxonomy.num_labels(); ++j) {
      try {
        sims.emplace_back(cosine_angle(v, provider.token_vector(cfg.taxonomy.name(j))), j);
      } catch (const std::out_of_range&) {
      }
    }
    std::stable_sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; i < std::min<std::size_t>(10, sims.size()); ++i)
      std::cout << "  " << cfg.taxonomy.name(sims[i].second) << "\t" << format_number(sims[i].first) << "\n";
  }));

  // codec train
  auto* codec_cmd = app.add_subcommand("codec", "Codebook channel codec");
  codec_cmd->require_subcommand(1);
  auto* codec_train = codec_cmd->add_subcommand("train", "Train a codebook codec over AWGN");
  std::optional<double> codec_snr, codec_lr;
  std::optional<int> codec_d, codec_epochs, codec_batch;
  std::string codec_out = "codec.json";
  codec_train->add_option("--snr", codec_snr, "Training SNR in dB");
  codec_train->add_option("--d", codec_d, "Complex symbols per token");
  codec_train->add_option("--epochs", codec_epochs);
  codec_train->add_option("--lr", codec_lr);
  codec_train->add_option("--batch", codec_batch);
  codec_train->add_option("--out", codec_out);
  codec_train->callback(run([&] {
    auto cfg = resolve_config(g);
    if (codec_snr) cfg.codec.train_snr_db = *codec_snr;
    if (codec_d) cfg.codec.dimension = *codec_d;
    if (codec_epochs) cfg.codec.epochs = *codec_epochs;
    if (codec_lr) cfg.codec.learning_rate = *codec_lr;
    if (codec_batch) cfg.codec.batch = *codec_batch;
    const auto trained = codebook_train(cfg.taxonomy.num_labels(), cfg.codec, Rng::derive_seed(cfg.seed, "codec"));
    write_text(codec_out, to_json(trained.codec).dump() + "\n");
    std::cout << "wrote " << codec_out << " (loss " << format_number(trained.loss_history.front()) << " -> "
              << format_number(trained.loss_history.back()) << ")\n";
  }));

  // channel sweep
  auto* channel_cmd = app.add_subcommand("channel", "Channel experiments");
  channel_cmd->require_subcommand(1);
  auto* channel_sweep = channel_cmd->add_subcommand("sweep", "Token accuracy versus SNR");
  std::string channel_codec;
  double snr_from = -20, snr_to = 5, snr_step = 1;
  int channel_tokens = 10000;
  channel_sweep->add_option("--codec", channel_codec)->required()->check(CLI::ExistingFile);
  channel_sweep->add_option("--snr-from", snr_from);
  channel_sweep->add_option("--snr-to", snr_to);
  channel_sweep->add_option("--step", snr_step);
  channel_sweep->add_option("--tokens", channel_tokens);
  channel_sweep->callback(run([&] {
    const auto cfg = resolve_config(g);
    if (!(snr_step > 0.0) || snr_to < snr_from || channel_tokens < 1) throw ConfigError("invalid sweep range");
    const CodebookCodec codec = codec_from_json(read_json(channel_codec));
    SnrSweepSettings s;
    s.snr_from = snr_from;
    s.snr_to = snr_to;
    s.snr_step = snr_step;
    s.reference_snr_db = snr_from;
    const auto table = exp_channel_sweep(codec, snr_grid(s), channel_tokens, codec.num_labels(), cfg.seed);
    save(g, table, "channel_sweep.csv");
  }));

  // critic sweep (standalone form)
  auto* critic_cmd = app.add_subcommand("critic", "Generate-criticize loop");
  critic_cmd->require_subcommand(1);
  auto* critic_sweep = critic_cmd->add_subcommand("sweep", "Loop accuracy versus iteration limit");
  std::optional<double> critic_q, critic_fa, critic_fr;
  std::optional<int> critic_kmax, critic_trials;
  std::string critic_out = "critic.csv";
  critic_sweep->add_option("--q", critic_q);
  critic_sweep->add_option("--fa", critic_fa);
  critic_sweep->add_option("--fr", critic_fr);
  critic_sweep->add_option("--k-max", critic_kmax);
  critic_sweep->add_option("--trials", critic_trials);
  critic_sweep->add_option("--out", critic_out);
  critic_sweep->callback(run([&] {
    auto cfg = resolve_config(g);
    auto& s = cfg.critic_sweep;
    if (critic_q) s.generator.success_prob = *critic_q;
    if (critic_fa) s.critic.false_accept = *critic_fa;
    if (critic_fr) s.critic.false_reject = *critic_fr;
    if (critic_kmax) s.k_max = *critic_kmax;
    if (critic_trials) s.trials = *critic_trials;
    validate(s.generator);
    validate(s.critic);
    if (s.k_max < 1 || s.trials < 1) throw ConfigError("k-max and trials must be >= 1");
    exp_critic_sweep(s, cfg.seed).write(critic_out);
    std::cout << "wrote " << critic_out << "\n";
  }));

  // exp ...
  auto* exp_cmd = app.add_subcommand("exp", "End-to-end experiments");
  exp_cmd->require_subcommand(1);

  exp_cmd->add_subcommand("ood-sweep", "Accuracy versus OOD proportion")->callback(run([&] {
    const auto cfg = resolve_config(g);
    const ExperimentEnv env(cfg);
    const auto sweep = exp_ood_sweep(env);
    const auto scenes = generate_dataset(cfg.prior, cfg.taxonomy, cfg.dataset_scenes(), cfg.dataset.ood_fraction,
                                         Rng::derive_seed(cfg.seed, "dataset"));
    std::vector<std::string> outputs{save(g, sweep.table, "ood_sweep.csv"), save(g, exp_prf(env, scenes), "prf.csv")};
    double lo = 1.0, hi = 0.0;
    for (const auto& p : sweep.points)
      if (p.fraction <= 0.5 + 1e-12) {
        lo = std::min(lo, p.hybrid_acc);
        hi = std::max(hi, p.hybrid_acc);
      }
    write_report(g, cfg, "ood-sweep", outputs, {{"hybrid_range_0_to_0.5", hi - lo}});
  }));

  exp_cmd->add_subcommand("tau-sweep", "Correction rates versus tau")->callback(run([&] {
    const auto cfg = resolve_config(g);
    const ExperimentEnv env(cfg);
    const auto sweep = exp_tau_sweep(env);
    nlohmann::json summary = nlohmann::json::object();
    for (const auto& c : sweep.curves)
      summary[c.provider] = {{"pool_size", c.pool_size}, {"eps_plus", c.eps.eps_plus}, {"eps_minus", c.eps.eps_minus}};
    write_report(g, cfg, "tau-sweep", {save(g, sweep.table, "tau_sweep.csv")}, summary);
  }));

  exp_cmd->add_subcommand("pareto", "Pareto frontier and tangent-optimal tau")->callback(run([&] {
    const auto cfg = resolve_config(g);
    const ExperimentEnv env(cfg);
    const auto result = exp_pareto(env);
    std::vector<std::string> outputs;
    nlohmann::json summary = nlohmann::json::object();
    for (std::size_t i = 0; i < result.sweep.curves.size(); ++i) {
      const auto& curve = result.sweep.curves[i];
      const std::string suffix = i == 0 ? "" : "_" + curve.provider;
      outputs.push_back(save(g, pareto_table(curve.points), "pareto" + suffix + ".csv"));
      outputs.push_back(save(g, pareto_table(result.frontiers[i]), "frontier" + suffix + ".csv"));
      const auto opt = optimum_json(result.optima[i], curve.eps);
      const auto opt_path = out_path(g, "optimum" + suffix + ".json");
      write_text(opt_path, opt.dump(2) + "\n");
      std::cout << "wrote " << opt_path << "\n";
      outputs.push_back(opt_path);
      summary[curve.provider] = opt;
      summary[curve.provider]["pool_size"] = curve.pool_size;
    }
    write_report(g, cfg, "pareto", outputs, summary);
  }));

  exp_cmd->add_subcommand("critic-sweep", "Generate-criticize accuracy versus iteration limit")->callback(run([&] {
    const auto cfg = resolve_config(g);
    const auto table = exp_critic_sweep(cfg.critic_sweep, cfg.seed);
    write_report(g, cfg, "critic-sweep", {save(g, table, "critic.csv")}, nlohmann::json::object());
  }));

  exp_cmd->add_subcommand("snr-sweep", "End-to-end semantic loss versus SNR")->callback(run([&] {
    const auto cfg = resolve_config(g);
    const ExperimentEnv env(cfg);
    const CodebookCodec codec = obtain_codec(env);
    const auto result = exp_snr_sweep(env, codec, snr_grid(cfg.snr_sweep));
    std::vector<std::string> outputs{save(g, result.table, "snr_sweep.csv")};
    if (!cfg.snr_sweep.codec_path) {
      const auto codec_path = out_path(g, "codec.json");
      write_text(codec_path, to_json(codec).dump() + "\n");
      outputs.push_back(codec_path);
    }
    write_report(g, cfg, "snr-sweep", outputs, {{"channel_free_loss", result.channel_free_loss}});
  }));

  // plot
  auto* plot_cmd = app.add_subcommand("plot", "Render experiment CSVs as SVG");
  std::vector<std::string> plot_inputs;
  plot_cmd->add_option("csv", plot_inputs, "CSV files")->required()->check(CLI::ExistingFile);
  plot_cmd->callback(run([&] {
    for (const auto& svg : emit_plots(plot_inputs)) std::cout << "wrote " << svg << "\n";
  }));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  return exit_code;
}
