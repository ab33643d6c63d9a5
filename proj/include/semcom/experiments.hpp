#ifndef SEMCOM_EXPERIMENTS_HPP
#define SEMCOM_EXPERIMENTS_HPP

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "semcom/analysis.hpp"
#include "semcom/channel.hpp"
#include "semcom/config.hpp"
#include "semcom/context.hpp"
#include "semcom/encoder.hpp"
#include "semcom/report.hpp"

namespace semcom {

/// Config plus the state every experiment derives from it.
class ExperimentEnv {
 public:
  explicit ExperimentEnv(ExperimentConfig cfg);

  const ExperimentConfig& config() const { return cfg_; }
  const LabelTaxonomy& taxonomy() const { return cfg_.taxonomy; }
  const OneHotMatrix& one_hot() const { return one_hot_; }
  /// Co-occurrence embedding built from the scene prior's expected counts.
  const CooccurrenceEmbedding& embedding() const { return *embedding_; }
  EncoderModels models() const;

 private:
  ExperimentConfig cfg_;
  OneHotMatrix one_hot_;
  std::unique_ptr<CooccurrenceEmbedding> embedding_;
};

// ---- OOD proportion sweep ----

struct OodPoint {
  double fraction = 0.0;
  int objects = 0;
  double expert_acc = 0.0;
  double general_acc = 0.0;
  double hybrid_acc = 0.0;
};

struct OodSweepResult {
  std::vector<OodPoint> points;
  /// ood_fraction,objects,expert_acc,general_acc,hybrid_acc,expert_se,general_se,hybrid_se
  CsvTable table;
};

/// Fractions 0, 0.1, ..., 1. Every point uses the same scene structure (common
/// random numbers); only which objects are OOD changes.
OodSweepResult exp_ood_sweep(const ExperimentEnv& env);

/// Table-1 style precision/recall/F1 (micro) of expert-only, general-only,
/// Plan A/B without and with re-weighting. Columns model,precision,recall,f1.
CsvTable exp_prf(const ExperimentEnv& env, const std::vector<Scene>& scenes);

// ---- tau sweep / Pareto ----

/// An unconfident object seen with a non-empty confident context.
struct PoolCase {
  ProbabilityVector p;
  ContextInfo context;
  LabelIndex truth = 0;
};

/// Pool cases in scene order, then object order. Scene i is encoded with seed ("encode", i).
std::vector<PoolCase> build_eval_pool(const ExperimentEnv& env, const std::vector<Scene>& scenes);

std::vector<EvalCase> freeze_pool(const std::vector<PoolCase>& pool, const EmbeddingProvider& provider,
                                  const LabelTaxonomy& taxonomy);

struct ProviderCurve {
  std::string provider;
  std::vector<ParetoPoint> points;
  EpsilonSplit eps;
  int pool_size = 0;
};

struct TauSweepResult {
  std::vector<ProviderCurve> curves;
  /// provider,tau,r_plus,r_minus
  CsvTable table;
};

/// Runs every configured provider over the same pool and tau grid. The
/// second provider is the embedding file when configured, otherwise a
/// co-occurrence embedding fitted to the observed pair counts of the dataset.
TauSweepResult exp_tau_sweep(const ExperimentEnv& env);

struct ParetoResult {
  TauSweepResult sweep;
  std::vector<std::vector<ParetoPoint>> frontiers;
  std::vector<TauOptimum> optima;
};

ParetoResult exp_pareto(const ExperimentEnv& env);

CsvTable pareto_table(const std::vector<ParetoPoint>& points);
nlohmann::json optimum_json(const TauOptimum& optimum, const EpsilonSplit& eps);

// ---- generate-criticize ----

/// Outcome of trial `t` at iteration limit `k`; independent of the trial count.
bool critic_trial(const CriticSweepSettings& settings, int k, std::uint64_t trial, std::uint64_t seed);

/// k,mc_accuracy,analytic_accuracy,ci95_half_width for k = 1..k_max.
CsvTable exp_critic_sweep(const CriticSweepSettings& settings, std::uint64_t seed);

// ---- channel ----

/// Trains per the config (or loads `snr_sweep.codec_path`).
CodebookCodec obtain_codec(const ExperimentEnv& env);

/// snr_db,accuracy,ci95_half_width,digital_accuracy over uniformly drawn labels.
CsvTable exp_channel_sweep(const CodebookCodec& codec, const std::vector<double>& snrs, int tokens,
                           int num_labels, std::uint64_t seed);

struct SnrPoint {
  double snr_db = 0.0;
  double mean_loss = 0.0;
  double loss_se = 0.0;
  double token_accuracy = 0.0;
};

struct SnrSweepResult {
  std::vector<SnrPoint> points;
  double channel_free_loss = 0.0;
  /// snr_db,mean_loss,loss_se,token_accuracy
  CsvTable table;
};

/// The scene set of the SNR experiment: `scenes` scenes with exactly `ood_objects` OOD objects.
std::vector<Scene> snr_scenes(const ExperimentEnv& env);

/// End-to-end loss of ground truth vs received labels. Each scene's noise is
/// drawn from the same substream at every SNR (paired comparison).
SnrSweepResult exp_snr_sweep(const ExperimentEnv& env, const CodebookCodec& codec, const std::vector<double>& snrs);

/// SNR grid of the config plus the reference point, ascending, without duplicates.
std::vector<double> snr_grid(const SnrSweepSettings& s);

}  // namespace semcom

#endif  // SEMCOM_EXPERIMENTS_HPP
