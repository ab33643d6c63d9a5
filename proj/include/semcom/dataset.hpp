#ifndef SEMCOM_DATASET_HPP
#define SEMCOM_DATASET_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "semcom/perception.hpp"
#include "semcom/taxonomy.hpp"

namespace semcom {

struct SceneCategory {
  std::string name;
  double weight = 1.0;
  /// Normalized label frequencies over all M labels.
  Eigen::VectorXd label_freq;
  double mean_count = 4.0;
};

/// Scene generator priors: categories with label frequencies, plus the
/// per-object difficulty distribution Beta(difficulty_a, difficulty_b).
struct ScenePrior {
  std::vector<SceneCategory> categories;
  double difficulty_a = 2.0;
  double difficulty_b = 5.0;
  int max_objects = 12;
};

void validate(const ScenePrior& prior, const LabelTaxonomy& taxonomy);

/// Thirteen everyday scene types over the COCO labels; every label occurs in at least one.
ScenePrior default_scene_prior(const LabelTaxonomy& taxonomy);

/// Expected same-scene label pair counts under the prior (diagonal included).
Eigen::MatrixXd expected_cooccurrence(const ScenePrior& prior);

/// Observed same-scene pair counts of a dataset (ordered pairs of distinct objects).
Eigen::MatrixXd observed_cooccurrence(const std::vector<Scene>& scenes, int num_labels);

/// Samples scenes from the prior with the OOD object share steered to `ood_fraction`.
///
/// Object t (counted across the whole dataset) is OOD iff
/// floor((t + 1 + u) f) > floor((t + u) f) for a per-seed offset u in [0, 1),
/// which keeps every prefix of the dataset within one object of the target
/// share. Labels are then drawn from the scene category's frequencies
/// restricted to the OOD or known subset (falling back to the prior-wide
/// frequencies when the category has no mass there). Scene i uses substream
/// ("scene", i), so the first n scenes do not depend on `n_scenes`.
std::vector<Scene> generate_dataset(const ScenePrior& prior, const LabelTaxonomy& taxonomy, int n_scenes,
                                    double ood_fraction, std::uint64_t seed);

double ood_share(const std::vector<Scene>& scenes, const LabelTaxonomy& taxonomy);

}  // namespace semcom

#endif  // SEMCOM_DATASET_HPP
