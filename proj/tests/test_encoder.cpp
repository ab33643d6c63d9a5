#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "semcom/dataset.hpp"
#include "semcom/encoder.hpp"

using namespace semcom;

namespace {

std::string token(std::string name) {
  std::replace(name.begin(), name.end(), ' ', '_');
  return name;
}

struct Encoder : ::testing::Test {
  LabelTaxonomy tax = build_default_taxonomy();
  ExpertModel expert = default_expert_model(tax);
  GeneralModel general = default_general_model(tax);
  OneHotMatrix b = one_hot(tax);
  ScenePrior prior = default_scene_prior(tax);
  CooccurrenceEmbedding emb{tax, expected_cooccurrence(prior)};

  EncoderModels models() const { return {tax, expert, general, emb, b}; }
  LabelIndex id(const char* name) const { return tax.index_of(name); }
  std::vector<Scene> scenes(int n) const { return generate_dataset(prior, tax, n, 0.2, 77); }
};

std::vector<int> plan_b_positions(const EncodeResult& r) {
  std::vector<int> out;
  for (std::size_t i = 0; i < r.semantic.size(); ++i)
    if (r.semantic.provenance[i] == Provenance::PlanB) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace

TEST_F(Encoder, AllConfidentIsPlanAOnly) {
  EncoderConfig cfg;
  cfg.rho = 0.0;
  for (const auto& scene : scenes(30)) {
    const auto r = encode_scene(scene, models(), cfg, 5);
    EXPECT_EQ(r.plan_b_count, 0);
    EXPECT_EQ(r.context.labels.size(), scene.objects.size());
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
      EXPECT_EQ(r.semantic.labels[i], r.trace[i].expert.label);
      EXPECT_EQ(r.semantic.provenance[i], Provenance::PlanA);
      EXPECT_FALSE(r.trace[i].cet.has_value());
    }
  }
}

TEST_F(Encoder, RhoOneSendsEverythingToPlanB) {
  EncoderConfig cfg;
  cfg.rho = 1.0;
  for (const auto& scene : scenes(30)) {
    const auto r = encode_scene(scene, models(), cfg, 6);
    EXPECT_TRUE(r.context.empty());
    EXPECT_EQ(r.plan_b_count, static_cast<int>(scene.objects.size()));
  }
}

TEST_F(Encoder, SingleUnconfidentObjectUsesRawArgmax) {
  EncoderConfig cfg;
  cfg.rho = 1.0;
  const Scene scene{{{id("cat"), 0.4}}, 0};
  const auto r = encode_scene(scene, models(), cfg, 8);
  ASSERT_TRUE(r.trace[0].cet.has_value());
  EXPECT_TRUE(r.context.empty());
  EXPECT_EQ(r.semantic.labels[0], static_cast<LabelIndex>(argmax_lowest(*r.trace[0].cet)));
}

TEST_F(Encoder, SportsSceneContextAndBlurryPerson) {
  // confident crisp objects, one blurry person the expert cannot resolve
  expert.base_accuracy = 1.0;
  expert.confidence_correct = {1000.0, 1.0};
  expert.confidence_wrong = {1.0, 1000.0};
  for (auto& pair : expert.confusable_pairs)
    if (pair.a == id("person") || pair.b == id("person")) pair.leak = 1.0;
  Scene scene;
  for (int i = 0; i < 5; ++i) scene.objects.push_back({id("person"), 0.0});
  scene.objects.push_back({id("sports ball"), 0.0});
  scene.objects.push_back({id("sports ball"), 0.0});
  scene.objects.push_back({id("bench"), 0.0});
  scene.objects.push_back({id("person"), 1.0});

  const auto r = encode_scene(scene, models(), EncoderConfig{}, 9);
  std::vector<LabelIndex> ctx = r.context.labels;
  std::sort(ctx.begin(), ctx.end());
  std::vector<LabelIndex> expected{id("person"), id("person"), id("person"), id("person"),
                                   id("person"), id("sports ball"), id("sports ball"), id("bench")};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(ctx, expected);
  EXPECT_EQ(plan_b_positions(r), std::vector<int>{8});
  EXPECT_EQ(r.plan_b_count, 1);
}

TEST_F(Encoder, BoundaryConfidenceTakesPlanA) {
  Rng probe = Rng::derive(3, "expert", 0);
  const Scene scene{{{id("car"), 0.1}}, 0};
  const double c = expert_classify(scene.objects[0], 0, expert, tax, probe).confidence;
  EncoderConfig cfg;
  cfg.rho = c;
  const auto r = encode_scene(scene, models(), cfg, 3);
  EXPECT_EQ(r.semantic.provenance[0], Provenance::PlanA);
  EXPECT_EQ(r.context.labels.size(), 1u);
}

TEST_F(Encoder, ProvenancePartitionMatchesThreshold) {
  const EncoderConfig cfg;
  for (const auto& scene : scenes(50)) {
    const auto r = encode_scene(scene, models(), cfg, 10);
    ASSERT_EQ(r.semantic.size(), scene.objects.size());
    for (std::size_t i = 0; i < scene.objects.size(); ++i) {
      const bool confident = r.trace[i].expert.confidence >= cfg.rho;
      EXPECT_EQ(r.semantic.provenance[i] == Provenance::PlanA, confident);
      EXPECT_LT(r.semantic.labels[i], 80);
      EXPECT_GE(r.semantic.labels[i], 0);
    }
  }
}

TEST_F(Encoder, PlanBWorkloadNondecreasingInRho) {
  for (const auto& scene : scenes(40)) {
    int previous = -1;
    for (double rho : {0.0, 0.2, 0.4, 0.6, 0.7, 0.8, 0.9, 1.0}) {
      EncoderConfig cfg;
      cfg.rho = rho;
      const int count = encode_scene(scene, models(), cfg, 11).plan_b_count;
      EXPECT_GE(count, previous);
      previous = count;
    }
  }
}

TEST_F(Encoder, WithoutBayesOutputIgnoresProvider) {
  EncoderConfig cfg;
  cfg.bayes_enabled = false;
  std::istringstream vecs([&] {
    std::ostringstream os;
    for (int j = 0; j < 80; ++j) os << token(tax.name(j)) << ' ' << (j % 3) + 1 << ' ' << (j % 5) + 1 << '\n';
    return os.str();
  }());
  const FileEmbedding other = FileEmbedding::parse(vecs);
  const EncoderModels alt{tax, expert, general, other, b};
  for (const auto& scene : scenes(40)) {
    const auto a = encode_scene(scene, models(), cfg, 12);
    const auto c = encode_scene(scene, alt, cfg, 12);
    EXPECT_EQ(a.semantic.labels, c.semantic.labels);
  }
}

TEST_F(Encoder, DeterministicForSeed) {
  for (const auto& scene : scenes(20)) {
    const auto a = encode_scene(scene, models(), EncoderConfig{}, 13);
    const auto c = encode_scene(scene, models(), EncoderConfig{}, 13);
    EXPECT_EQ(a.semantic.labels, c.semantic.labels);
    EXPECT_EQ(a.context.labels, c.context.labels);
  }
}

TEST_F(Encoder, JsonShape) {
  const Scene scene{{{id("car"), 0.1}, {id("dog"), 0.3}}, 0};
  const auto j = to_json(encode_scene(scene, models(), EncoderConfig{}, 14));
  EXPECT_EQ(j["S"].size(), 2u);
  EXPECT_EQ(j["provenance"].size(), 2u);
  for (const auto& p : j["provenance"]) EXPECT_TRUE(p == "A" || p == "B");
  EXPECT_TRUE(j["context"].is_array());
}

TEST_F(Encoder, InvalidConfigRejected) {
  EncoderConfig cfg;
  cfg.rho = 1.5;
  EXPECT_THROW(validate(cfg), std::invalid_argument);
  cfg.rho = 0.5;
  cfg.tau = -0.1;
  EXPECT_THROW(encode_scene(Scene{{{0, 0.0}}, 0}, models(), cfg, 1), std::invalid_argument);
}
