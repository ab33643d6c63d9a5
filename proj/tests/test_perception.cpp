#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "semcom/perception.hpp"

using namespace semcom;

namespace {

struct Fixture : ::testing::Test {
  LabelTaxonomy tax = build_default_taxonomy();
  ExpertModel expert = default_expert_model(tax);
  GeneralModel general = default_general_model(tax);
  OneHotMatrix b = one_hot(tax);
  std::vector<int> columns() const {
    std::vector<int> c;
    for (int j = 0; j < tax.num_labels(); ++j) c.push_back(tax.vocab_index(j));
    return c;
  }
};

}  // namespace

using Perception = Fixture;

TEST_F(Perception, OodObjectMapsThroughOodMapWithLowMedianConfidence) {
  const LabelIndex zebra = tax.index_of("zebra");
  Rng rng(11);
  std::vector<double> conf;
  for (int i = 0; i < 2001; ++i) {
    const Detection d = expert_classify({zebra, 0.3}, 0, expert, tax, rng);
    ASSERT_EQ(d.label, expert.ood_map[static_cast<std::size_t>(zebra)]);
    conf.push_back(d.confidence);
  }
  std::nth_element(conf.begin(), conf.begin() + 1000, conf.end());
  EXPECT_LT(conf[1000], 0.7);
  EXPECT_EQ(tax.name(expert.ood_map[static_cast<std::size_t>(zebra)]), "person");
}

TEST_F(Perception, PerfectExpertAtZeroDifficulty) {
  expert.base_accuracy = 1.0;
  Rng rng(12);
  for (LabelIndex j : tax.expert_known()) {
    const Detection d = expert_classify({j, 0.0}, 0, expert, tax, rng);
    EXPECT_EQ(d.label, j);
  }
}

TEST_F(Perception, ExpertAccuracyMatchesClosedForm) {
  Rng pick(13), rng(14);
  const int n = 10000;
  int hits = 0;
  double expected = 0.0;
  for (int i = 0; i < n; ++i) {
    const LabelIndex j = tax.expert_known()[pick.below(tax.expert_known().size())];
    const GroundTruthObject obj{j, 0.2};
    // closed form: base minus difficulty times the first applicable leak
    double leak = 0.0;
    for (const auto& p : expert.confusable_pairs)
      if (p.a == j || p.b == j) {
        leak = p.leak;
        break;
      }
    expected += std::max(0.0, expert.base_accuracy - 0.2 * leak);
    hits += expert_classify(obj, 0, expert, tax, rng).label == j;
  }
  EXPECT_NEAR(static_cast<double>(hits) / n, expected / n, 0.02);
  EXPECT_NEAR(expert_success_probability(expert, {tax.index_of("car"), 0.2}), 0.85 - 0.2 * 0.3, 1e-12);
}

TEST_F(Perception, ExpertNeverReturnsOodLabel) {
  Rng rng(15);
  for (int i = 0; i < 5000; ++i) {
    const LabelIndex j = static_cast<LabelIndex>(rng.below(80));
    const Detection d = expert_classify({j, rng.uniform()}, i, expert, tax, rng);
    ASSERT_FALSE(tax.is_ood(d.label));
    ASSERT_GE(d.confidence, 0.0);
    ASSERT_LE(d.confidence, 1.0);
    ASSERT_EQ(d.object_index, i);
  }
}

TEST_F(Perception, NoiselessScoresRecoverTrueLabel) {
  general.score_noise = 0.0;
  general.confusable_pairs.clear();
  Rng rng(16);
  for (int j = 0; j < tax.num_labels(); ++j) {
    const auto p = cet_extract(general_score_matrix({j, 0.0}, general, tax, rng), b);
    EXPECT_EQ(argmax_lowest(p), j);
  }
}

TEST_F(Perception, BlurryPersonLeaksMassToDog) {
  Rng rng(17);
  const LabelIndex person = tax.index_of("person"), dog = tax.index_of("dog");
  double dog_mass = 0.0, typical = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto p = cet_extract(general_score_matrix({person, 0.9}, general, tax, rng), b);
    dog_mass += p(dog);
    typical += p(tax.index_of("toaster"));
  }
  EXPECT_GT(dog_mass, 2.0 * typical);
  EXPECT_GT(dog_mass / 200, 0.03);
}

TEST_F(Perception, ScoreMatrixDeterministicAndNonnegative) {
  Rng a(18), c(18);
  const auto s1 = general_score_matrix({3, 0.5}, general, tax, a);
  const auto s2 = general_score_matrix({3, 0.5}, general, tax, c);
  EXPECT_TRUE(s1 == s2);
  EXPECT_GE(s1.minCoeff(), 0.0);
  EXPECT_EQ(s1.rows(), 80);
  EXPECT_EQ(s1.cols(), 200);
}

TEST(Cet, TwoLabelArithmetic) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(2, 3);
  s(0, 0) = 0.8;
  s(1, 2) = 0.2;
  Eigen::MatrixXd b(2, 3);
  b << 1, 0, 0, 0, 0, 1;
  const Eigen::VectorXd p = cet_extract(s, b);
  EXPECT_NEAR(p(0), 0.8, 1e-15);
  EXPECT_NEAR(p(1), 0.2, 1e-15);
}

TEST(Cet, EqualScoresGiveUniform) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(4, 4, 0.3);
  const Eigen::VectorXd p = cet_extract(s, Eigen::MatrixXd::Identity(4, 4));
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(p(i), 0.25);
}

TEST(Cet, AllZeroFallsBackToUniform) {
  const Eigen::VectorXd p = cet_extract(Eigen::MatrixXd::Zero(5, 6), Eigen::MatrixXd::Identity(5, 6));
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(p(i), 0.2);
}

TEST(Cet, ShapeMismatchThrows) {
  EXPECT_THROW(cet_extract(Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Ones(3, 2)), std::invalid_argument);
}

TEST_F(Perception, CetMatchesOracleAndProperties) {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto cols = columns();
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd s(80, 200);
    for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = u(gen);
    const Eigen::VectorXd p = cet_extract(s, b);
    const Eigen::VectorXd ref = oracle::cet(s, cols);
    ASSERT_LT((p - ref).cwiseAbs().maxCoeff(), 1e-12);
    ASSERT_NEAR(p.sum(), 1.0, 1e-9);
    ASSERT_GE(p.minCoeff(), 0.0);
    const Eigen::VectorXd scaled = cet_extract((3.7 * s).eval(), b);
    ASSERT_LT((scaled - p).cwiseAbs().maxCoeff(), 1e-12);
    Eigen::MatrixXd perturbed = s;
    for (int j = 0; j < 80; ++j)
      for (int k = 0; k < 200; ++k)
        if (k != cols[static_cast<std::size_t>(j)]) perturbed(j, k) += u(gen);
    ASSERT_TRUE(cet_extract(perturbed, b) == p);
  }
}

TEST_F(Perception, CetIsGenericOverScalar) {
  Eigen::MatrixXf s = Eigen::MatrixXf::Random(80, 200).cwiseAbs();
  const Eigen::VectorXf p = cet_extract(s, b.cast<float>());
  EXPECT_NEAR(p.sum(), 1.0f, 1e-5f);
}

TEST(Argmax, TiesGoToLowestIndex) {
  Eigen::VectorXd v(4);
  v << 0.1, 0.4, 0.4, 0.1;
  EXPECT_EQ(argmax_lowest(v), 1);
}

TEST_F(Perception, ModelJsonRoundTrip) {
  const auto e2 = expert_model_from_json(to_json(expert, tax), tax, ExpertModel{});
  EXPECT_EQ(e2.ood_map, expert.ood_map);
  EXPECT_EQ(e2.confusable_pairs.size(), expert.confusable_pairs.size());
  EXPECT_DOUBLE_EQ(e2.confidence_ood.b, 6.0);
  const auto g2 = general_model_from_json(to_json(general, tax), tax, GeneralModel{});
  EXPECT_DOUBLE_EQ(g2.score_noise, general.score_noise);
  EXPECT_EQ(g2.confusable_pairs.size(), general.confusable_pairs.size());
}

TEST_F(Perception, PartialJsonOverridesOnlyNamedFields) {
  const auto g = general_model_from_json({{"score_noise", 0.1}}, tax, general);
  EXPECT_DOUBLE_EQ(g.score_noise, 0.1);
  EXPECT_DOUBLE_EQ(g.base_accuracy, general.base_accuracy);
}

TEST_F(Perception, InvalidModelsRejected) {
  expert.base_accuracy = 0.0;
  EXPECT_THROW(validate(expert, tax), std::invalid_argument);
  general.score_noise = -1.0;
  EXPECT_THROW(validate(general, tax), std::invalid_argument);
}

TEST(Scenes, JsonRoundTripAndValidation) {
  std::vector<Scene> scenes{{{{1, 0.5}, {2, 0.25}}, 3}};
  const auto back = scenes_from_json(scenes_to_json(scenes));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].category, 3);
  EXPECT_EQ(back[0].objects[1].true_label, 2);
  EXPECT_DOUBLE_EQ(back[0].objects[0].difficulty, 0.5);
  EXPECT_THROW(validate_scene(Scene{}, 80), std::invalid_argument);
  EXPECT_THROW(validate_scene(Scene{{{90, 0.1}}, 0}, 80), std::invalid_argument);
  EXPECT_THROW(validate_scene(Scene{{{1, 1.5}}, 0}, 80), std::invalid_argument);
}
