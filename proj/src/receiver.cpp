#include "semcom/receiver.hpp"

#include <algorithm>
#include <stdexcept>

namespace semcom {

void validate(const GeneratorModel& gen) {
  if (!(gen.success_prob > 0.0 && gen.success_prob <= 1.0))
    throw std::invalid_argument("generator success_prob must lie in (0, 1]");
  if (!(gen.mislabel_prob >= 0.0 && gen.mislabel_prob <= 1.0))
    throw std::invalid_argument("generator mislabel_prob must lie in [0, 1]");
  if (!(gen.miscount_one_prob >= 0.0 && gen.miscount_one_prob <= 1.0))
    throw std::invalid_argument("generator miscount_one_prob must lie in [0, 1]");
  if (gen.num_labels < 2) throw std::invalid_argument("generator needs at least two labels");
}

void validate(const CriticModel& critic) {
  // f_a = 1 is admitted so the no-critic baseline shares the loop code path
  if (!(critic.false_accept >= 0.0 && critic.false_accept <= 1.0))
    throw std::invalid_argument("critic false_accept must lie in [0, 1]");
  if (!(critic.false_reject >= 0.0 && critic.false_reject < 1.0))
    throw std::invalid_argument("critic false_reject must lie in [0, 1)");
}

ReconstructedScene generate(const Prompt& prompt, const GeneratorModel& gen, Rng& rng) {
  if (prompt.count < 1) throw std::invalid_argument("prompt count must be >= 1");
  if (rng.uniform() < gen.success_prob) return {prompt.object_label, prompt.count};
  if (rng.uniform() < gen.mislabel_prob) {
    const auto pick = static_cast<LabelIndex>(rng.below(static_cast<std::uint64_t>(gen.num_labels - 1)));
    return {pick >= prompt.object_label ? pick + 1 : pick, prompt.count};
  }
  const int magnitude = rng.uniform() < gen.miscount_one_prob ? 1 : 2;
  const int sign = rng.uniform() < 0.5 ? -1 : 1;
  return {prompt.object_label, std::max(0, prompt.count + sign * magnitude)};
}

bool criticize(const ReconstructedScene& scene, const Prompt& prompt, const CriticModel& critic, Rng& rng) {
  const double accept = matches(scene, prompt) ? 1.0 - critic.false_reject : critic.false_accept;
  return rng.uniform() < accept;
}

LoopResult generate_criticize_loop(const Prompt& prompt, const GeneratorModel& gen,
                                   const CriticModel& critic, int limit, Rng& rng) {
  if (limit < 1) throw std::invalid_argument("iteration limit must be >= 1");
  LoopResult result;
  for (int round = 1; round <= limit; ++round) {
    result.scene = generate(prompt, gen, rng);
    result.iterations_used = round;
    if (criticize(result.scene, prompt, critic, rng)) break;
  }
  return result;
}

double loop_accuracy_analytic(double q, double false_accept, double false_reject, int limit) {
  if (limit < 1) throw std::invalid_argument("iteration limit must be >= 1");
  const double correct_accepted = q * (1.0 - false_reject);
  const double rejected = q * false_reject + (1.0 - q) * (1.0 - false_accept);
  double reach = 1.0;  // probability of starting the current round
  double accuracy = 0.0;
  for (int round = 1; round < limit; ++round) {
    accuracy += reach * correct_accepted;
    reach *= rejected;
  }
  return accuracy + reach * q;
}

double semantic_loss(const std::vector<LabelIndex>& sent, const std::vector<LabelIndex>& received,
                     const EmbeddingProvider& provider, const LabelTaxonomy& taxonomy, double alpha) {
  if (sent.empty() || received.empty()) throw std::invalid_argument("semantic_loss: empty input");
  const std::size_t longest = std::max(sent.size(), received.size());
  const std::size_t common = std::min(sent.size(), received.size());
  std::size_t mismatches = longest - common;
  for (std::size_t i = 0; i < common; ++i) mismatches += sent[i] != received[i] ? 1 : 0;
  const double em = static_cast<double>(mismatches) / static_cast<double>(longest);

  auto phrase = [&](const std::vector<LabelIndex>& labels) {
    std::vector<std::string> tokens;
    tokens.reserve(labels.size());
    for (LabelIndex j : labels) tokens.push_back(taxonomy.name(j));
    return embed_text(provider, tokens);
  };
  const EmbeddingVector a = phrase(sent);
  const EmbeddingVector b = phrase(received);
  const double td = a == b ? 0.0 : std::clamp(1.0 - cosine_angle(a, b), 0.0, 1.0);
  return alpha * em + (1.0 - alpha) * td;
}

}  // namespace semcom
