#ifndef SEMCOM_CONFIG_HPP
#define SEMCOM_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "semcom/channel.hpp"
#include "semcom/dataset.hpp"
#include "semcom/encoder.hpp"
#include "semcom/perception.hpp"
#include "semcom/receiver.hpp"
#include "semcom/taxonomy.hpp"

namespace semcom {

/// Invalid or unreadable configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetSettings {
  int n_scenes = 14423;
  int quick_n_scenes = 1000;
  double ood_fraction = 0.082;
};

struct OodSweepSettings {
  int objects_per_point = 2000;
};

struct TauSweepSettings {
  double tau_from = 0.0;
  double tau_to = 5.0;
  double tau_step = 0.025;
  std::optional<std::string> embedding_file;
};

struct CriticSweepSettings {
  GeneratorModel generator;
  CriticModel critic;
  int k_max = 6;
  int trials = 10000;
  int min_count = 3;
  int max_count = 10;
};

struct SnrSweepSettings {
  double snr_from = -20.0;
  double snr_to = 5.0;
  double snr_step = 1.0;
  double reference_snr_db = 10.0;
  int scenes = 100;
  int ood_objects = 8;
  double alpha = 0.1;
  int channel_tokens = 10000;
  std::optional<std::string> codec_path;
};

/// Everything an experiment run depends on. `taxonomy` and the models are
/// resolved at load time so experiments never touch the filesystem for inputs.
struct ExperimentConfig {
  std::uint64_t seed = 42;
  bool quick = false;
  LabelTaxonomy taxonomy = build_default_taxonomy();
  ExpertModel expert = default_expert_model(taxonomy);
  GeneralModel general = default_general_model(taxonomy);
  EncoderConfig encoder;
  ScenePrior prior = default_scene_prior(taxonomy);
  DatasetSettings dataset;
  OodSweepSettings ood_sweep;
  TauSweepSettings tau_sweep;
  CriticSweepSettings critic_sweep;
  CodebookTrainOptions codec;
  SnrSweepSettings snr_sweep;

  int dataset_scenes() const { return quick ? dataset.quick_n_scenes : dataset.n_scenes; }
};

/// Defaults overridden by the fields present in `j`. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace semcom

#endif  // SEMCOM_CONFIG_HPP
