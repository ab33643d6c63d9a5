#include "semcom/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "semcom/dataset.hpp"
#include "semcom/receiver.hpp"

namespace semcom {

namespace {

double binomial_se(double p, int n) { return n > 0 ? std::sqrt(p * (1.0 - p) / n) : 0.0; }

std::string num(double x) { return format_number(x); }

}  // namespace

ExperimentEnv::ExperimentEnv(ExperimentConfig cfg)
    : cfg_(std::move(cfg)),
      one_hot_(semcom::one_hot(cfg_.taxonomy)),
      embedding_(std::make_unique<CooccurrenceEmbedding>(cfg_.taxonomy, expected_cooccurrence(cfg_.prior))) {}

EncoderModels ExperimentEnv::models() const {
  return {cfg_.taxonomy, cfg_.expert, cfg_.general, *embedding_, one_hot_};
}

OodSweepResult exp_ood_sweep(const ExperimentEnv& env) {
  const auto& cfg = env.config();
  const std::uint64_t data_seed = Rng::derive_seed(cfg.seed, "ood-sweep-data");

  // each fraction uses the smallest scene prefix reaching the object budget
  const int budget = cfg.ood_sweep.objects_per_point;
  OodSweepResult result;
  result.table.header = {"ood_fraction", "objects", "expert_acc", "general_acc", "hybrid_acc",
                         "expert_se",    "general_se", "hybrid_se"};
  const auto models = env.models();
  // the hybrid here is plain Plan A/Plan B routing
  EncoderConfig routing = cfg.encoder;
  routing.bayes_enabled = false;
  for (int step = 0; step <= 10; ++step) {
    const double fraction = step / 10.0;
    auto scenes = generate_dataset(cfg.prior, cfg.taxonomy, budget, fraction, data_seed);
    std::size_t n_scenes = 0;
    for (int seen = 0; seen < budget; ++n_scenes) seen += static_cast<int>(scenes[n_scenes].objects.size());
    scenes.resize(n_scenes);
    int objects = 0, expert_ok = 0, general_ok = 0, hybrid_ok = 0;
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      const std::uint64_t scene_seed = Rng::derive_seed(cfg.seed, "ood-sweep-encode", s);
      const EncodeResult enc = encode_scene(scenes[s], models, routing, scene_seed);
      for (std::size_t i = 0; i < scenes[s].objects.size(); ++i) {
        const auto& obj = scenes[s].objects[i];
        const auto& t = enc.trace[i];
        LabelIndex general_label = t.raw_argmax;
        if (!t.cet) {
          Rng rng = Rng::derive(scene_seed, "general", i);
          general_label = static_cast<LabelIndex>(
              argmax_lowest(cet_extract(general_score_matrix(obj, cfg.general, cfg.taxonomy, rng), env.one_hot())));
        }
        ++objects;
        expert_ok += t.expert.label == obj.true_label;
        general_ok += general_label == obj.true_label;
        hybrid_ok += t.final_label == obj.true_label;
      }
    }
    OodPoint p{fraction, objects, static_cast<double>(expert_ok) / objects,
               static_cast<double>(general_ok) / objects, static_cast<double>(hybrid_ok) / objects};
    result.points.push_back(p);
    result.table.add_row({num(p.fraction), std::to_string(p.objects), num(p.expert_acc), num(p.general_acc),
                          num(p.hybrid_acc), num(binomial_se(p.expert_acc, objects)),
                          num(binomial_se(p.general_acc, objects)), num(binomial_se(p.hybrid_acc, objects))});
  }
  return result;
}

CsvTable exp_prf(const ExperimentEnv& env, const std::vector<Scene>& scenes) {
  const auto& cfg = env.config();
  const auto models = env.models();
  EncoderConfig plain = cfg.encoder;
  plain.bayes_enabled = false;
  EncoderConfig bayes = cfg.encoder;
  bayes.bayes_enabled = true;

  std::vector<LabelIndex> truth, expert, general, hybrid, hybrid_bayes;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    const std::uint64_t scene_seed = Rng::derive_seed(cfg.seed, "encode", s);
    const EncodeResult a = encode_scene(scenes[s], models, plain, scene_seed);
    const EncodeResult b = encode_scene(scenes[s], models, bayes, scene_seed);
    for (std::size_t i = 0; i < scenes[s].objects.size(); ++i) {
      const auto& obj = scenes[s].objects[i];
      LabelIndex g = a.trace[i].raw_argmax;
      if (!a.trace[i].cet) {
        Rng rng = Rng::derive(scene_seed, "general", i);
        g = static_cast<LabelIndex>(
            argmax_lowest(cet_extract(general_score_matrix(obj, cfg.general, cfg.taxonomy, rng), env.one_hot())));
      }
      truth.push_back(obj.true_label);
      expert.push_back(a.trace[i].expert.label);
      general.push_back(g);
      hybrid.push_back(a.trace[i].final_label);
      hybrid_bayes.push_back(b.trace[i].final_label);
    }
  }
  CsvTable table;
  table.header = {"model", "precision", "recall", "f1"};
  auto add = [&](const char* name, const std::vector<LabelIndex>& pred) {
    const PrfScores s = compute_prf(pred, truth, Averaging::Micro);
    table.add_row({name, num(s.precision), num(s.recall), num(s.f1)});
  };
  add("expert", expert);
  add("general", general);
  add("plan_ab", hybrid);
  add("plan_ab_bayes", hybrid_bayes);
  return table;
}

std::vector<PoolCase> build_eval_pool(const ExperimentEnv& env, const std::vector<Scene>& scenes) {
  const auto& cfg = env.config();
  EncoderConfig enc_cfg = cfg.encoder;
  enc_cfg.bayes_enabled = false;
  const auto models = env.models();
  std::vector<PoolCase> pool;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    const EncodeResult enc = encode_scene(scenes[s], models, enc_cfg, Rng::derive_seed(cfg.seed, "encode", s));
    if (enc.context.empty()) continue;
    for (std::size_t i = 0; i < scenes[s].objects.size(); ++i) {
      if (!enc.trace[i].cet) continue;
      pool.push_back({*enc.trace[i].cet, enc.context, scenes[s].objects[i].true_label});
    }
  }
  return pool;
}

std::vector<EvalCase> freeze_pool(const std::vector<PoolCase>& pool, const EmbeddingProvider& provider,
                                  const LabelTaxonomy& taxonomy) {
  std::vector<EvalCase> frozen;
  frozen.reserve(pool.size());
  for (const auto& c : pool) frozen.push_back(make_eval_case(c.p, c.context, provider, taxonomy, c.truth));
  return frozen;
}

TauSweepResult exp_tau_sweep(const ExperimentEnv& env) {
  const auto& cfg = env.config();
  const auto scenes = generate_dataset(cfg.prior, cfg.taxonomy, cfg.dataset_scenes(), cfg.dataset.ood_fraction,
                                       Rng::derive_seed(cfg.seed, "dataset"));
  const auto pool = build_eval_pool(env, scenes);
  if (pool.empty()) throw std::runtime_error("evaluation pool is empty");

  std::vector<std::pair<std::string, std::unique_ptr<EmbeddingProvider>>> providers;
  if (cfg.tau_sweep.embedding_file) {
    providers.emplace_back("file", std::make_unique<FileEmbedding>(FileEmbedding::load(*cfg.tau_sweep.embedding_file)));
  } else {
    providers.emplace_back("cooccurrence_observed",
                           std::make_unique<CooccurrenceEmbedding>(
                               cfg.taxonomy, observed_cooccurrence(scenes, cfg.taxonomy.num_labels())));
  }

  const auto taus = tau_grid(cfg.tau_sweep.tau_from, cfg.tau_sweep.tau_to, cfg.tau_sweep.tau_step);
  TauSweepResult result;
  result.table.header = {"provider", "tau", "r_plus", "r_minus"};
  auto run = [&](const std::string& name, const EmbeddingProvider& provider) {
    const auto frozen = freeze_pool(pool, provider, cfg.taxonomy);
    ProviderCurve curve;
    curve.provider = name;
    curve.pool_size = static_cast<int>(frozen.size());
    const CorrectionRates base = rplus_rminus(evaluate_at_tau(frozen, 0.0));
    curve.eps = epsilon_split(base.initially_wrong, base.initially_correct);
    curve.points = pareto_sweep(frozen, taus);
    for (const auto& p : curve.points) result.table.add_row({name, num(p.tau), num(p.r_plus), num(p.r_minus)});
    result.curves.push_back(std::move(curve));
  };
  run("cooccurrence", env.embedding());
  for (const auto& [name, provider] : providers) run(name, *provider);
  return result;
}

CsvTable pareto_table(const std::vector<ParetoPoint>& points) {
  CsvTable table;
  table.header = {"tau", "r_plus", "r_minus"};
  for (const auto& p : points) table.add_row({num(p.tau), num(p.r_plus), num(p.r_minus)});
  return table;
}

nlohmann::json optimum_json(const TauOptimum& optimum, const EpsilonSplit& eps) {
  return {{"tau", optimum.tau},
          {"r_plus", optimum.point.r_plus},
          {"r_minus", optimum.point.r_minus},
          {"R", optimum.r},
          {"eps_plus", eps.eps_plus},
          {"eps_minus", eps.eps_minus},
          {"tangent_certificate", optimum.certificate_holds},
          {"max_frontier_violation", optimum.max_frontier_violation}};
}

ParetoResult exp_pareto(const ExperimentEnv& env) {
  ParetoResult result;
  result.sweep = exp_tau_sweep(env);
  for (const auto& curve : result.sweep.curves) {
    result.frontiers.push_back(pareto_frontier(curve.points));
    result.optima.push_back(optimize_tau(curve.points, curve.eps));
  }
  return result;
}

bool critic_trial(const CriticSweepSettings& settings, int k, std::uint64_t trial, std::uint64_t seed) {
  Rng prompt_rng = Rng::derive(seed, "critic-prompt", trial);
  Prompt prompt;
  prompt.object_label = static_cast<LabelIndex>(prompt_rng.below(static_cast<std::uint64_t>(settings.generator.num_labels)));
  prompt.count = settings.min_count +
                 static_cast<int>(prompt_rng.below(static_cast<std::uint64_t>(settings.max_count - settings.min_count + 1)));
  Rng rng = Rng::derive(seed, "critic-loop", static_cast<std::uint64_t>(k), trial);
  const LoopResult r = generate_criticize_loop(prompt, settings.generator, settings.critic, k, rng);
  return matches(r.scene, prompt);
}

CsvTable exp_critic_sweep(const CriticSweepSettings& settings, std::uint64_t seed) {
  CsvTable table;
  table.header = {"k", "mc_accuracy", "analytic_accuracy", "ci95_half_width"};
  for (int k = 1; k <= settings.k_max; ++k) {
    int correct = 0;
    for (int t = 0; t < settings.trials; ++t) correct += critic_trial(settings, k, static_cast<std::uint64_t>(t), seed);
    const double acc = static_cast<double>(correct) / settings.trials;
    const double analytic = loop_accuracy_analytic(settings.generator.success_prob, settings.critic.false_accept,
                                                   settings.critic.false_reject, k);
    table.add_row({std::to_string(k), num(acc), num(analytic), num(1.96 * binomial_se(acc, settings.trials))});
  }
  return table;
}

CodebookCodec obtain_codec(const ExperimentEnv& env) {
  const auto& cfg = env.config();
  if (cfg.snr_sweep.codec_path) {
    std::ifstream in(*cfg.snr_sweep.codec_path);
    if (!in) throw ConfigError("cannot open codec " + *cfg.snr_sweep.codec_path);
    CodebookCodec codec = codec_from_json(nlohmann::json::parse(in));
    if (codec.num_labels() != cfg.taxonomy.num_labels())
      throw ConfigError("codec label count does not match the taxonomy");
    return codec;
  }
  return codebook_train(cfg.taxonomy.num_labels(), cfg.codec, Rng::derive_seed(cfg.seed, "codec")).codec;
}

CsvTable exp_channel_sweep(const CodebookCodec& codec, const std::vector<double>& snrs, int tokens, int num_labels,
                           std::uint64_t seed) {
  Rng label_rng = Rng::derive(seed, "channel-labels");
  std::vector<LabelIndex> labels(static_cast<std::size_t>(tokens));
  for (auto& l : labels) l = static_cast<LabelIndex>(label_rng.below(static_cast<std::uint64_t>(num_labels)));
  const ComplexSignal x = codec.encode(labels);

  CsvTable table;
  table.header = {"snr_db", "accuracy", "ci95_half_width", "digital_accuracy"};
  for (double snr : snrs) {
    Rng noise = Rng::derive(seed, "channel-noise");
    const auto decoded = codec.decode(awgn_apply(x, {snr}, noise));
    Rng digital_noise = Rng::derive(seed, "digital-noise");
    const auto digital = digital_roundtrip(labels, num_labels, {snr}, digital_noise);
    int ok = 0, digital_ok = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      ok += decoded[i] == labels[i];
      digital_ok += digital[i] == labels[i];
    }
    const double acc = static_cast<double>(ok) / tokens;
    table.add_row({num(snr), num(acc), num(1.96 * binomial_se(acc, tokens)),
                   num(static_cast<double>(digital_ok) / tokens)});
  }
  return table;
}

std::vector<double> snr_grid(const SnrSweepSettings& s) {
  std::vector<double> grid;
  const auto n = static_cast<long>(std::floor((s.snr_to - s.snr_from) / s.snr_step + 1e-9));
  for (long i = 0; i <= n; ++i) grid.push_back(s.snr_from + static_cast<double>(i) * s.snr_step);
  if (std::find(grid.begin(), grid.end(), s.reference_snr_db) == grid.end()) grid.push_back(s.reference_snr_db);
  std::sort(grid.begin(), grid.end());
  return grid;
}

std::vector<Scene> snr_scenes(const ExperimentEnv& env) {
  const auto& cfg = env.config();
  const std::uint64_t seed = Rng::derive_seed(cfg.seed, "snr-data");
  const int want = cfg.snr_sweep.ood_objects;
  const auto count_ood = [&](const std::vector<Scene>& scenes) {
    int n = 0;
    for (const auto& s : scenes)
      for (const auto& o : s.objects) n += cfg.taxonomy.is_ood(o.true_label);
    return n;
  };
  // object counts shift with the fraction, so search for one that lands exactly
  double lo = 0.0, hi = 1.0;
  auto best = generate_dataset(cfg.prior, cfg.taxonomy, cfg.snr_sweep.scenes, 0.0, seed);
  if (want == 0) return best;
  int best_gap = want;
  for (int iter = 0; iter < 60 && best_gap != 0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    auto scenes = generate_dataset(cfg.prior, cfg.taxonomy, cfg.snr_sweep.scenes, mid, seed);
    const int got = count_ood(scenes);
    if (std::abs(got - want) < best_gap) {
      best_gap = std::abs(got - want);
      best = std::move(scenes);
    }
    (got < want ? lo : hi) = mid;
  }
  return best;
}

SnrSweepResult exp_snr_sweep(const ExperimentEnv& env, const CodebookCodec& codec, const std::vector<double>& snrs) {
  const auto& cfg = env.config();
  const auto scenes = snr_scenes(env);
  const auto models = env.models();

  std::vector<std::vector<LabelIndex>> truth, sent;
  for (std::size_t s = 0; s < scenes.size(); ++s) {
    std::vector<LabelIndex> t;
    for (const auto& o : scenes[s].objects) t.push_back(o.true_label);
    truth.push_back(std::move(t));
    sent.push_back(encode_scene(scenes[s], models, cfg.encoder, Rng::derive_seed(cfg.seed, "snr-encode", s)).semantic.labels);
  }

  SnrSweepResult result;
  for (std::size_t s = 0; s < scenes.size(); ++s)
    result.channel_free_loss += semantic_loss(truth[s], sent[s], env.embedding(), cfg.taxonomy, cfg.snr_sweep.alpha);
  result.channel_free_loss /= static_cast<double>(scenes.size());

  result.table.header = {"snr_db", "mean_loss", "loss_se", "token_accuracy"};
  for (double snr : snrs) {
    double sum = 0.0, sum_sq = 0.0;
    std::size_t tokens = 0, tokens_ok = 0;
    for (std::size_t s = 0; s < scenes.size(); ++s) {
      Rng noise = Rng::derive(cfg.seed, "snr-noise", s);
      const auto received = codec.decode(awgn_apply(codec.encode(sent[s]), {snr}, noise));
      for (std::size_t i = 0; i < received.size(); ++i) tokens_ok += received[i] == sent[s][i];
      tokens += received.size();
      const double loss = semantic_loss(truth[s], received, env.embedding(), cfg.taxonomy, cfg.snr_sweep.alpha);
      sum += loss;
      sum_sq += loss * loss;
    }
    const double n = static_cast<double>(scenes.size());
    SnrPoint p;
    p.snr_db = snr;
    p.mean_loss = sum / n;
    const double var = n > 1 ? std::max(0.0, (sum_sq - n * p.mean_loss * p.mean_loss) / (n - 1.0)) : 0.0;
    p.loss_se = std::sqrt(var / n);
    p.token_accuracy = static_cast<double>(tokens_ok) / static_cast<double>(tokens);
    result.points.push_back(p);
    result.table.add_row({num(p.snr_db), num(p.mean_loss), num(p.loss_se), num(p.token_accuracy)});
  }
  return result;
}

}  // namespace semcom
