#include "semcom/encoder.hpp"

#include <stdexcept>

namespace semcom {

void validate(const EncoderConfig& cfg) {
  if (!(cfg.rho >= 0.0 && cfg.rho <= 1.0)) throw std::invalid_argument("rho must lie in [0, 1]");
  if (!(cfg.tau >= 0.0)) throw std::invalid_argument("tau must be nonnegative");
}

EncodeResult encode_scene(const Scene& scene, const EncoderModels& models, const EncoderConfig& cfg,
                          std::uint64_t seed) {
  validate(cfg);
  validate_scene(scene, models.taxonomy.num_labels());

  const auto n = scene.objects.size();
  EncodeResult result;
  result.trace.resize(n);
  result.semantic.labels.resize(n);
  result.semantic.provenance.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = Rng::derive(seed, "expert", i);
    ObjectTrace& t = result.trace[i];
    t.expert = expert_classify(scene.objects[i], static_cast<int>(i), models.expert, models.taxonomy, rng);
    if (t.expert.confidence >= cfg.rho) result.context.labels.push_back(t.expert.label);
  }

  // context is frozen from here on
  std::optional<Eigen::VectorXd> cosines;
  for (std::size_t i = 0; i < n; ++i) {
    ObjectTrace& t = result.trace[i];
    if (t.expert.confidence >= cfg.rho) {
      t.final_label = t.expert.label;
      result.semantic.labels[i] = t.expert.label;
      result.semantic.provenance[i] = Provenance::PlanA;
      continue;
    }
    Rng rng = Rng::derive(seed, "general", i);
    const ScoreMatrix scores = general_score_matrix(scene.objects[i], models.general, models.taxonomy, rng);
    ProbabilityVector p = cet_extract(scores, models.one_hot);
    t.raw_argmax = static_cast<LabelIndex>(argmax_lowest(p));
    t.final_label = t.raw_argmax;
    if (cfg.bayes_enabled && !result.context.empty()) {
      if (!cosines) cosines = context_cosines(result.context, models.provider, models.taxonomy);
      t.final_label = static_cast<LabelIndex>(argmax_lowest(reweight_with_cosines(p, *cosines, cfg.tau)));
    }
    t.cet = std::move(p);
    result.semantic.labels[i] = t.final_label;
    result.semantic.provenance[i] = Provenance::PlanB;
    ++result.plan_b_count;
  }
  return result;
}

nlohmann::json to_json(const EncodeResult& result) {
  auto provenance = nlohmann::json::array();
  for (Provenance p : result.semantic.provenance) provenance.push_back(p == Provenance::PlanA ? "A" : "B");
  return {{"S", result.semantic.labels},
          {"provenance", std::move(provenance)},
          {"context", result.context.labels}};
}

}  // namespace semcom
