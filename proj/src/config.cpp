#include "semcom/config.hpp"

#include <filesystem>
#include <fstream>

namespace semcom {

namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

void read_path(const nlohmann::json& j, const char* key, std::optional<std::string>& out) {
  if (!j.contains(key)) return;
  if (j[key].is_null()) {
    out.reset();
    return;
  }
  out = j[key].get<std::string>();
  if (!std::filesystem::exists(*out)) throw ConfigError(std::string(key) + ": file not found: " + *out);
}

nlohmann::json optional_path(const std::optional<std::string>& p) {
  return p ? nlohmann::json(*p) : nlohmann::json(nullptr);
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    read(j, "seed", cfg.seed);
    read(j, "quick", cfg.quick);
    if (j.contains("taxonomy") && !j["taxonomy"].is_null()) {
      const auto path = j["taxonomy"].get<std::string>();
      std::ifstream in(path);
      if (!in) throw ConfigError("taxonomy: file not found: " + path);
      cfg.taxonomy = taxonomy_from_json(nlohmann::json::parse(in));
    } else if (j.contains("vocab_size")) {
      cfg.taxonomy = build_default_taxonomy(j["vocab_size"].get<int>());
    }
    cfg.expert = expert_model_from_json(j.value("expert", nlohmann::json::object()), cfg.taxonomy,
                                        default_expert_model(cfg.taxonomy));
    cfg.general = general_model_from_json(j.value("general", nlohmann::json::object()), cfg.taxonomy,
                                          default_general_model(cfg.taxonomy));
    cfg.prior = default_scene_prior(cfg.taxonomy);

    const auto enc = j.value("encoder", nlohmann::json::object());
    read(enc, "rho", cfg.encoder.rho);
    read(enc, "tau", cfg.encoder.tau);
    read(enc, "bayes_enabled", cfg.encoder.bayes_enabled);
    validate(cfg.encoder);

    const auto prior = j.value("scene_prior", nlohmann::json::object());
    if (prior.contains("difficulty")) {
      cfg.prior.difficulty_a = prior["difficulty"].at(0).get<double>();
      cfg.prior.difficulty_b = prior["difficulty"].at(1).get<double>();
    }
    read(prior, "max_objects", cfg.prior.max_objects);
    validate(cfg.prior, cfg.taxonomy);

    const auto ds = j.value("dataset", nlohmann::json::object());
    read(ds, "n_scenes", cfg.dataset.n_scenes);
    read(ds, "quick_n_scenes", cfg.dataset.quick_n_scenes);
    read(ds, "ood_fraction", cfg.dataset.ood_fraction);
    if (cfg.dataset.n_scenes < 1 || cfg.dataset.quick_n_scenes < 1)
      throw ConfigError("dataset scene counts must be >= 1");
    if (!(cfg.dataset.ood_fraction >= 0.0 && cfg.dataset.ood_fraction <= 1.0))
      throw ConfigError("dataset.ood_fraction must lie in [0, 1]");

    const auto ood = j.value("ood_sweep", nlohmann::json::object());
    read(ood, "objects_per_point", cfg.ood_sweep.objects_per_point);
    if (cfg.ood_sweep.objects_per_point < 1) throw ConfigError("ood_sweep.objects_per_point must be >= 1");

    const auto tau = j.value("tau_sweep", nlohmann::json::object());
    read(tau, "from", cfg.tau_sweep.tau_from);
    read(tau, "to", cfg.tau_sweep.tau_to);
    read(tau, "step", cfg.tau_sweep.tau_step);
    read_path(tau, "embedding_file", cfg.tau_sweep.embedding_file);
    if (!(cfg.tau_sweep.tau_step > 0.0) || cfg.tau_sweep.tau_from < 0.0 ||
        cfg.tau_sweep.tau_to < cfg.tau_sweep.tau_from)
      throw ConfigError("tau_sweep range is invalid");

    auto& cs = cfg.critic_sweep;
    cs.generator.num_labels = cfg.taxonomy.num_labels();
    const auto critic = j.value("critic", nlohmann::json::object());
    read(critic, "q", cs.generator.success_prob);
    read(critic, "mislabel_prob", cs.generator.mislabel_prob);
    read(critic, "miscount_one_prob", cs.generator.miscount_one_prob);
    read(critic, "fa", cs.critic.false_accept);
    read(critic, "fr", cs.critic.false_reject);
    read(critic, "k_max", cs.k_max);
    read(critic, "trials", cs.trials);
    read(critic, "min_count", cs.min_count);
    read(critic, "max_count", cs.max_count);
    validate(cs.generator);
    validate(cs.critic);
    if (cs.k_max < 1 || cs.trials < 1 || cs.min_count < 1 || cs.max_count < cs.min_count)
      throw ConfigError("critic sweep settings are invalid");

    const auto codec = j.value("codec", nlohmann::json::object());
    read(codec, "d", cfg.codec.dimension);
    read(codec, "train_snr_db", cfg.codec.train_snr_db);
    read(codec, "epochs", cfg.codec.epochs);
    read(codec, "lr", cfg.codec.learning_rate);
    read(codec, "batch", cfg.codec.batch);
    read(codec, "init_scale", cfg.codec.init_scale);
    read_path(codec, "path", cfg.snr_sweep.codec_path);
    if (cfg.codec.dimension < 1 || cfg.codec.epochs < 1 || cfg.codec.batch < 1 || !(cfg.codec.learning_rate > 0.0))
      throw ConfigError("codec training settings are invalid");

    const auto snr = j.value("snr_sweep", nlohmann::json::object());
    read(snr, "from", cfg.snr_sweep.snr_from);
    read(snr, "to", cfg.snr_sweep.snr_to);
    read(snr, "step", cfg.snr_sweep.snr_step);
    read(snr, "reference_snr_db", cfg.snr_sweep.reference_snr_db);
    read(snr, "scenes", cfg.snr_sweep.scenes);
    read(snr, "ood_objects", cfg.snr_sweep.ood_objects);
    read(snr, "alpha", cfg.snr_sweep.alpha);
    read(snr, "channel_tokens", cfg.snr_sweep.channel_tokens);
    if (!(cfg.snr_sweep.snr_step > 0.0) || cfg.snr_sweep.snr_to < cfg.snr_sweep.snr_from ||
        cfg.snr_sweep.scenes < 1 || cfg.snr_sweep.ood_objects < 0 || cfg.snr_sweep.channel_tokens < 1 ||
        !(cfg.snr_sweep.alpha >= 0.0 && cfg.snr_sweep.alpha <= 1.0))
      throw ConfigError("snr sweep settings are invalid");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  const auto& cs = cfg.critic_sweep;
  return {
      {"seed", cfg.seed},
      {"quick", cfg.quick},
      {"vocab_size", cfg.taxonomy.vocab_size()},
      {"expert", to_json(cfg.expert, cfg.taxonomy)},
      {"general", to_json(cfg.general, cfg.taxonomy)},
      {"encoder", {{"rho", cfg.encoder.rho}, {"tau", cfg.encoder.tau}, {"bayes_enabled", cfg.encoder.bayes_enabled}}},
      {"scene_prior", {{"difficulty", {cfg.prior.difficulty_a, cfg.prior.difficulty_b}}, {"max_objects", cfg.prior.max_objects}}},
      {"dataset", {{"n_scenes", cfg.dataset.n_scenes}, {"quick_n_scenes", cfg.dataset.quick_n_scenes}, {"ood_fraction", cfg.dataset.ood_fraction}}},
      {"ood_sweep", {{"objects_per_point", cfg.ood_sweep.objects_per_point}}},
      {"tau_sweep", {{"from", cfg.tau_sweep.tau_from}, {"to", cfg.tau_sweep.tau_to}, {"step", cfg.tau_sweep.tau_step},
                     {"embedding_file", optional_path(cfg.tau_sweep.embedding_file)}}},
      {"critic", {{"q", cs.generator.success_prob}, {"mislabel_prob", cs.generator.mislabel_prob},
                  {"miscount_one_prob", cs.generator.miscount_one_prob}, {"fa", cs.critic.false_accept},
                  {"fr", cs.critic.false_reject}, {"k_max", cs.k_max}, {"trials", cs.trials},
                  {"min_count", cs.min_count}, {"max_count", cs.max_count}}},
      {"codec", {{"d", cfg.codec.dimension}, {"train_snr_db", cfg.codec.train_snr_db}, {"epochs", cfg.codec.epochs},
                 {"lr", cfg.codec.learning_rate}, {"batch", cfg.codec.batch}, {"init_scale", cfg.codec.init_scale},
                 {"path", optional_path(cfg.snr_sweep.codec_path)}}},
      {"snr_sweep", {{"from", cfg.snr_sweep.snr_from}, {"to", cfg.snr_sweep.snr_to}, {"step", cfg.snr_sweep.snr_step},
                     {"reference_snr_db", cfg.snr_sweep.reference_snr_db}, {"scenes", cfg.snr_sweep.scenes},
                     {"ood_objects", cfg.snr_sweep.ood_objects}, {"alpha", cfg.snr_sweep.alpha},
                     {"channel_tokens", cfg.snr_sweep.channel_tokens}}},
  };
}

}  // namespace semcom
