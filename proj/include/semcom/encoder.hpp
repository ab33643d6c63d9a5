#ifndef SEMCOM_ENCODER_HPP
#define SEMCOM_ENCODER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "semcom/context.hpp"
#include "semcom/perception.hpp"

namespace semcom {

enum class Provenance { PlanA, PlanB };

/// Ordered label payload S, aligned with the scene's objects.
struct SemanticVector {
  std::vector<LabelIndex> labels;
  std::vector<Provenance> provenance;

  std::size_t size() const { return labels.size(); }
};

struct EncoderConfig {
  double rho = 0.7;
  double tau = 1.7;
  bool bayes_enabled = true;
};

void validate(const EncoderConfig& cfg);

/// Per-object detail of one encoding; experiments read the intermediate results.
struct ObjectTrace {
  Detection expert;
  /// Set only for Plan B objects.
  std::optional<ProbabilityVector> cet;
  LabelIndex raw_argmax = -1;
  LabelIndex final_label = -1;
};

struct EncodeResult {
  SemanticVector semantic;
  ContextInfo context;
  std::vector<ObjectTrace> trace;
  int plan_b_count = 0;
};

/// Models and shared state needed to encode scenes. Holds references; callers own the objects.
struct EncoderModels {
  const LabelTaxonomy& taxonomy;
  const ExpertModel& expert;
  const GeneralModel& general;
  const EmbeddingProvider& provider;
  const OneHotMatrix& one_hot;
};

/// Two-pass Plan A / Plan B encoding.
///
/// Pass 1 runs the expert on every object and collects the confident labels
/// (confidence >= rho) as the context. Pass 2 sends each unconfident object to
/// the general model; its CET distribution is re-weighted by the (frozen)
/// context when `bayes_enabled`, otherwise the raw argmax is taken.
///
/// Object i draws from substreams ("expert", i) and ("general", i) of `seed`,
/// so its randomness does not depend on rho, tau, or the other objects.
EncodeResult encode_scene(const Scene& scene, const EncoderModels& models, const EncoderConfig& cfg,
                          std::uint64_t seed);

nlohmann::json to_json(const EncodeResult& result);

}  // namespace semcom

#endif  // SEMCOM_ENCODER_HPP
