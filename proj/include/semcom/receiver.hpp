#ifndef SEMCOM_RECEIVER_HPP
#define SEMCOM_RECEIVER_HPP

#include <vector>

#include "semcom/context.hpp"
#include "semcom/rng.hpp"
#include "semcom/taxonomy.hpp"

namespace semcom {

/// Text prompt handed to the generator: `count` instances of one object.
struct Prompt {
  LabelIndex object_label = 0;
  int count = 1;
};

/// Structured stand-in for a generated image.
struct ReconstructedScene {
  LabelIndex object_label = 0;
  int count = 0;

  friend bool operator==(const ReconstructedScene&, const ReconstructedScene&) = default;
};

inline bool matches(const ReconstructedScene& scene, const Prompt& prompt) {
  return scene.object_label == prompt.object_label && scene.count == prompt.count;
}

/// Text-to-image stand-in. A failed generation either swaps the label or miscounts.
struct GeneratorModel {
  double success_prob = 0.78;
  double mislabel_prob = 0.2;
  /// Probability that a miscount is off by one (otherwise by two); the sign is uniform.
  double miscount_one_prob = 0.7;
  int num_labels = 80;
};

struct CriticModel {
  double false_accept = 0.0;
  double false_reject = 0.0;
};

void validate(const GeneratorModel& gen);
void validate(const CriticModel& critic);

ReconstructedScene generate(const Prompt& prompt, const GeneratorModel& gen, Rng& rng);

bool criticize(const ReconstructedScene& scene, const Prompt& prompt, const CriticModel& critic, Rng& rng);

struct LoopResult {
  ReconstructedScene scene;
  int iterations_used = 0;
};

/// Generate, criticize, and retry until accepted or `limit` rounds are spent;
/// after `limit` rejections the last candidate is returned.
LoopResult generate_criticize_loop(const Prompt& prompt, const GeneratorModel& gen,
                                   const CriticModel& critic, int limit, Rng& rng);

/// The no-critic baseline: one round, everything accepted.
inline CriticModel no_critic() { return {1.0, 0.0}; }

/// Exact probability that the loop returns a correct scene.
double loop_accuracy_analytic(double q, double false_accept, double false_reject, int limit);

/// alpha * EM + (1 - alpha) * TD, where EM is the positional mismatch rate and TD = 1 - cosine of
/// the two phrase embeddings (clamped to [0, 1]).
double semantic_loss(const std::vector<LabelIndex>& sent, const std::vector<LabelIndex>& received,
                     const EmbeddingProvider& provider, const LabelTaxonomy& taxonomy, double alpha = 0.1);

}  // namespace semcom

#endif  // SEMCOM_RECEIVER_HPP
