#ifndef SEMCOM_PERCEPTION_HPP
#define SEMCOM_PERCEPTION_HPP

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "semcom/rng.hpp"
#include "semcom/taxonomy.hpp"

namespace semcom {

/// A ground-truth object; difficulty 0 is a crisp crop, 1 maximally blurry.
struct GroundTruthObject {
  LabelIndex true_label = 0;
  double difficulty = 0.0;
};

struct Scene {
  std::vector<GroundTruthObject> objects;
  int category = 0;
};

/// Throws std::invalid_argument if the scene is empty or references labels >= num_labels.
void validate_scene(const Scene& scene, int num_labels);

/// Expert (Plan A) recognition of one object.
struct Detection {
  int object_index = 0;
  LabelIndex label = 0;
  double confidence = 0.0;
};

using ScoreMatrix = Eigen::MatrixXd;
using ProbabilityVector = Eigen::VectorXd;

struct BetaParams {
  double a = 1.0;
  double b = 1.0;
};

struct ConfusablePair {
  LabelIndex a = 0;
  LabelIndex b = 0;
  double leak = 0.0;
};

/// Synthetic restricted-vocabulary detector. Never emits an OOD label.
struct ExpertModel {
  double base_accuracy = 0.85;
  std::vector<ConfusablePair> confusable_pairs;
  /// Indexed by label; only OOD entries are consulted and each must be an expert-known label.
  std::vector<LabelIndex> ood_map;
  BetaParams confidence_correct{8.0, 2.0};
  BetaParams confidence_wrong{2.0, 4.0};
  BetaParams confidence_ood{2.0, 6.0};
};

/// Synthetic open-vocabulary model that emits an attention-style score matrix.
struct GeneralModel {
  double base_accuracy = 0.80;
  std::vector<ConfusablePair> confusable_pairs;
  double score_noise = 0.5;
  /// How strongly difficulty suppresses the true-label score (kappa).
  double difficulty_weight = 0.8;
};

void validate(const ExpertModel& model, const LabelTaxonomy& taxonomy);
void validate(const GeneralModel& model, const LabelTaxonomy& taxonomy);

ExpertModel default_expert_model(const LabelTaxonomy& taxonomy);
GeneralModel default_general_model(const LabelTaxonomy& taxonomy);

/// Probability that the expert returns the true label of an in-distribution object.
double expert_success_probability(const ExpertModel& model, const GroundTruthObject& obj);

Detection expert_classify(const GroundTruthObject& obj, int object_index, const ExpertModel& model,
                          const LabelTaxonomy& taxonomy, Rng& rng);

ScoreMatrix general_score_matrix(const GroundTruthObject& obj, const GeneralModel& model,
                                 const LabelTaxonomy& taxonomy, Rng& rng);

/// Label distribution from an M x P score matrix and its one-hot mask.
///
/// L_j = -sum_x scores(j,x) * b(j,x), D_j = -L_j, P_j = D_j / sum_n D_n.
/// An all-zero D falls back to the uniform distribution.
template <typename DerivedS, typename DerivedB>
Eigen::Matrix<typename DerivedS::Scalar, Eigen::Dynamic, 1> cet_extract(
    const Eigen::MatrixBase<DerivedS>& scores, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedS::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (scores.rows() != b.rows() || scores.cols() != b.cols())
    throw std::invalid_argument("cet_extract: score matrix and one-hot mask differ in shape");
  const Vector loss = -(scores.cwiseProduct(b.template cast<Scalar>())).rowwise().sum();
  const Vector d = -loss;
  const Scalar total = d.sum();
  if (total == Scalar(0)) return Vector::Constant(d.size(), Scalar(1) / Scalar(d.size()));
  return d / total;
}

/// Index of the largest entry; ties go to the lowest index.
template <typename Derived>
Eigen::Index argmax_lowest(const Eigen::MatrixBase<Derived>& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return best;
}

nlohmann::json to_json(const ExpertModel& model, const LabelTaxonomy& taxonomy);
nlohmann::json to_json(const GeneralModel& model, const LabelTaxonomy& taxonomy);
/// Fields absent from `j` keep the values of `base`.
ExpertModel expert_model_from_json(const nlohmann::json& j, const LabelTaxonomy& taxonomy,
                                   ExpertModel base);
GeneralModel general_model_from_json(const nlohmann::json& j, const LabelTaxonomy& taxonomy,
                                     GeneralModel base);

nlohmann::json scenes_to_json(const std::vector<Scene>& scenes);
std::vector<Scene> scenes_from_json(const nlohmann::json& j);

}  // namespace semcom

#endif  // SEMCOM_PERCEPTION_HPP
