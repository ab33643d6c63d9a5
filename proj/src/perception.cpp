#include "semcom/perception.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace semcom {

namespace {

std::vector<ConfusablePair> named_pairs(
    const LabelTaxonomy& taxonomy,
    std::initializer_list<std::tuple<const char*, const char*, double>> pairs) {
  std::vector<ConfusablePair> out;
  for (const auto& [a, b, leak] : pairs)
    out.push_back({taxonomy.index_of(a), taxonomy.index_of(b), leak});
  return out;
}

void check_pairs(const std::vector<ConfusablePair>& pairs, int m) {
  for (const auto& p : pairs) {
    if (p.a < 0 || p.a >= m || p.b < 0 || p.b >= m || p.a == p.b)
      throw std::invalid_argument("confusable pair references an invalid label");
    if (p.leak < 0.0) throw std::invalid_argument("confusable pair leak must be nonnegative");
  }
}

void check_beta(const BetaParams& p, const char* what) {
  if (!(p.a > 0.0) || !(p.b > 0.0))
    throw std::invalid_argument(std::string("Beta parameters must be positive: ") + what);
}

// First pair mentioning `label`, with the partner on the other side.
const ConfusablePair* find_pair(const std::vector<ConfusablePair>& pairs, LabelIndex label,
                                LabelIndex& partner) {
  for (const auto& p : pairs) {
    if (p.a == label || p.b == label) {
      partner = p.a == label ? p.b : p.a;
      return &p;
    }
  }
  return nullptr;
}

nlohmann::json pairs_to_json(const std::vector<ConfusablePair>& pairs,
                             const LabelTaxonomy& taxonomy) {
  auto arr = nlohmann::json::array();
  for (const auto& p : pairs) arr.push_back({taxonomy.name(p.a), taxonomy.name(p.b), p.leak});
  return arr;
}

std::vector<ConfusablePair> pairs_from_json(const nlohmann::json& arr,
                                            const LabelTaxonomy& taxonomy) {
  std::vector<ConfusablePair> out;
  for (const auto& e : arr)
    out.push_back({taxonomy.index_of(e.at(0).get<std::string>()),
                   taxonomy.index_of(e.at(1).get<std::string>()), e.at(2).get<double>()});
  return out;
}

nlohmann::json beta_to_json(const BetaParams& p) { return {p.a, p.b}; }
BetaParams beta_from_json(const nlohmann::json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

}  // namespace

void validate_scene(const Scene& scene, int num_labels) {
  if (scene.objects.empty()) throw std::invalid_argument("scene has no objects");
  for (const auto& obj : scene.objects) {
    if (obj.true_label < 0 || obj.true_label >= num_labels)
      throw std::invalid_argument("scene object label out of range");
    if (!(obj.difficulty >= 0.0 && obj.difficulty <= 1.0))
      throw std::invalid_argument("scene object difficulty outside [0, 1]");
  }
}

void validate(const ExpertModel& model, const LabelTaxonomy& taxonomy) {
  if (!(model.base_accuracy > 0.0 && model.base_accuracy <= 1.0))
    throw std::invalid_argument("expert base_accuracy must lie in (0, 1]");
  check_pairs(model.confusable_pairs, taxonomy.num_labels());
  check_beta(model.confidence_correct, "confidence_correct");
  check_beta(model.confidence_wrong, "confidence_wrong");
  check_beta(model.confidence_ood, "confidence_ood");
  if (static_cast<int>(model.ood_map.size()) != taxonomy.num_labels())
    throw std::invalid_argument("expert ood_map must have one entry per label");
  for (LabelIndex j : taxonomy.ood()) {
    const LabelIndex target = model.ood_map[static_cast<std::size_t>(j)];
    if (target < 0 || target >= taxonomy.num_labels() || taxonomy.is_ood(target))
      throw std::invalid_argument("expert ood_map must send OOD labels to known labels");
  }
}

void validate(const GeneralModel& model, const LabelTaxonomy& taxonomy) {
  if (!(model.base_accuracy > 0.0 && model.base_accuracy <= 1.0))
    throw std::invalid_argument("general base_accuracy must lie in (0, 1]");
  if (!(model.score_noise >= 0.0)) throw std::invalid_argument("score_noise must be >= 0");
  if (!(model.difficulty_weight >= 0.0))
    throw std::invalid_argument("difficulty_weight must be >= 0");
  check_pairs(model.confusable_pairs, taxonomy.num_labels());
}

ExpertModel default_expert_model(const LabelTaxonomy& taxonomy) {
  ExpertModel model;
  model.confusable_pairs = named_pairs(taxonomy, {{"car", "truck", 0.3},
                                                  {"bus", "truck", 0.3},
                                                  {"cup", "wine glass", 0.3},
                                                  {"couch", "chair", 0.3},
                                                  {"knife", "fork", 0.3},
                                                  {"tv", "laptop", 0.2},
                                                  {"person", "dog", 0.3}});
  const LabelIndex person = taxonomy.index_of("person");
  model.ood_map.resize(static_cast<std::size_t>(taxonomy.num_labels()));
  for (LabelIndex j = 0; j < taxonomy.num_labels(); ++j)
    model.ood_map[static_cast<std::size_t>(j)] = taxonomy.is_ood(j) ? person : j;
  return model;
}

GeneralModel default_general_model(const LabelTaxonomy& taxonomy) {
  GeneralModel model;
  model.confusable_pairs = named_pairs(taxonomy, {{"person", "dog", 0.6},
                                                  {"cat", "dog", 0.5},
                                                  {"horse", "cow", 0.5},
                                                  {"sheep", "cow", 0.4},
                                                  {"zebra", "horse", 0.4},
                                                  {"bear", "teddy bear", 0.4},
                                                  {"car", "truck", 0.4},
                                                  {"bus", "truck", 0.3},
                                                  {"cup", "wine glass", 0.3},
                                                  {"couch", "chair", 0.3}});
  return model;
}

double expert_success_probability(const ExpertModel& model, const GroundTruthObject& obj) {
  LabelIndex partner = 0;
  const ConfusablePair* pair = find_pair(model.confusable_pairs, obj.true_label, partner);
  const double leak = pair != nullptr ? pair->leak : 0.0;
  return std::max(0.0, model.base_accuracy - obj.difficulty * leak);
}

Detection expert_classify(const GroundTruthObject& obj, int object_index, const ExpertModel& model,
                          const LabelTaxonomy& taxonomy, Rng& rng) {
  Detection det;
  det.object_index = object_index;
  if (taxonomy.is_ood(obj.true_label)) {
    det.label = model.ood_map.at(static_cast<std::size_t>(obj.true_label));
    det.confidence = rng.beta(model.confidence_ood.a, model.confidence_ood.b);
    return det;
  }
  if (rng.uniform() < expert_success_probability(model, obj)) {
    det.label = obj.true_label;
    det.confidence = rng.beta(model.confidence_correct.a, model.confidence_correct.b);
    return det;
  }
  LabelIndex partner = 0;
  if (find_pair(model.confusable_pairs, obj.true_label, partner) != nullptr &&
      !taxonomy.is_ood(partner)) {
    det.label = partner;
  } else {
    // uniform over the other known labels
    const auto& known = taxonomy.expert_known();
    const auto pick = rng.below(known.size() - 1);
    auto it = std::find(known.begin(), known.end(), obj.true_label);
    const auto self = static_cast<std::uint64_t>(it - known.begin());
    det.label = known[pick >= self ? pick + 1 : pick];
  }
  det.confidence = rng.beta(model.confidence_wrong.a, model.confidence_wrong.b);
  return det;
}

ScoreMatrix general_score_matrix(const GroundTruthObject& obj, const GeneralModel& model,
                                 const LabelTaxonomy& taxonomy, Rng& rng) {
  const int m = taxonomy.num_labels();
  const int p = taxonomy.vocab_size();
  ScoreMatrix scores(m, p);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < p; ++k) scores(j, k) = model.score_noise * rng.uniform();

  const LabelIndex t = obj.true_label;
  scores(t, taxonomy.vocab_index(t)) +=
      model.base_accuracy * (1.0 - obj.difficulty * model.difficulty_weight);
  for (const auto& pair : model.confusable_pairs) {
    if (pair.a != t && pair.b != t) continue;
    const LabelIndex partner = pair.a == t ? pair.b : pair.a;
    scores(partner, taxonomy.vocab_index(partner)) += pair.leak * obj.difficulty;
  }
  return scores.cwiseMax(0.0);
}

nlohmann::json to_json(const ExpertModel& model, const LabelTaxonomy& taxonomy) {
  nlohmann::json ood = nlohmann::json::object();
  for (LabelIndex j : taxonomy.ood())
    ood[taxonomy.name(j)] = taxonomy.name(model.ood_map.at(static_cast<std::size_t>(j)));
  return {{"base_accuracy", model.base_accuracy},
          {"confusable_pairs", pairs_to_json(model.confusable_pairs, taxonomy)},
          {"ood_map", ood},
          {"confidence_correct", beta_to_json(model.confidence_correct)},
          {"confidence_wrong", beta_to_json(model.confidence_wrong)},
          {"confidence_ood", beta_to_json(model.confidence_ood)}};
}

nlohmann::json to_json(const GeneralModel& model, const LabelTaxonomy& taxonomy) {
  return {{"base_accuracy", model.base_accuracy},
          {"confusable_pairs", pairs_to_json(model.confusable_pairs, taxonomy)},
          {"score_noise", model.score_noise},
          {"difficulty_weight", model.difficulty_weight}};
}

ExpertModel expert_model_from_json(const nlohmann::json& j, const LabelTaxonomy& taxonomy,
                                   ExpertModel base) {
  if (j.contains("base_accuracy")) base.base_accuracy = j["base_accuracy"].get<double>();
  if (j.contains("confusable_pairs"))
    base.confusable_pairs = pairs_from_json(j["confusable_pairs"], taxonomy);
  if (j.contains("ood_map")) {
    if (static_cast<int>(base.ood_map.size()) != taxonomy.num_labels()) {
      base.ood_map.resize(static_cast<std::size_t>(taxonomy.num_labels()));
      for (LabelIndex k = 0; k < taxonomy.num_labels(); ++k) base.ood_map[static_cast<std::size_t>(k)] = k;
    }
    for (const auto& [from, to] : j["ood_map"].items())
      base.ood_map.at(static_cast<std::size_t>(taxonomy.index_of(from))) =
          taxonomy.index_of(to.get<std::string>());
  }
  if (j.contains("confidence_correct"))
    base.confidence_correct = beta_from_json(j["confidence_correct"]);
  if (j.contains("confidence_wrong")) base.confidence_wrong = beta_from_json(j["confidence_wrong"]);
  if (j.contains("confidence_ood")) base.confidence_ood = beta_from_json(j["confidence_ood"]);
  validate(base, taxonomy);
  return base;
}

GeneralModel general_model_from_json(const nlohmann::json& j, const LabelTaxonomy& taxonomy,
                                     GeneralModel base) {
  if (j.contains("base_accuracy")) base.base_accuracy = j["base_accuracy"].get<double>();
  if (j.contains("confusable_pairs"))
    base.confusable_pairs = pairs_from_json(j["confusable_pairs"], taxonomy);
  if (j.contains("score_noise")) base.score_noise = j["score_noise"].get<double>();
  if (j.contains("difficulty_weight"))
    base.difficulty_weight = j["difficulty_weight"].get<double>();
  validate(base, taxonomy);
  return base;
}

nlohmann::json scenes_to_json(const std::vector<Scene>& scenes) {
  auto arr = nlohmann::json::array();
  for (const auto& scene : scenes) {
    auto objects = nlohmann::json::array();
    for (const auto& obj : scene.objects)
      objects.push_back({{"label", obj.true_label}, {"difficulty", obj.difficulty}});
    arr.push_back({{"category", scene.category}, {"objects", std::move(objects)}});
  }
  return {{"scenes", std::move(arr)}};
}

std::vector<Scene> scenes_from_json(const nlohmann::json& j) {
  std::vector<Scene> scenes;
  for (const auto& s : j.at("scenes")) {
    Scene scene;
    scene.category = s.value("category", 0);
    for (const auto& o : s.at("objects"))
      scene.objects.push_back({o.at("label").get<LabelIndex>(), o.value("difficulty", 0.0)});
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

}  // namespace semcom
