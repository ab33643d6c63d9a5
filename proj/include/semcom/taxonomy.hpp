#ifndef SEMCOM_TAXONOMY_HPP
#define SEMCOM_TAXONOMY_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace semcom {

using LabelIndex = int;

/// Full vocabulary, task labels, and the expert-known / OOD split of the labels.
///
/// Labels are a subset of the vocabulary (one token per label). Construction
/// validates every invariant; a LabelTaxonomy that exists is consistent.
class LabelTaxonomy {
 public:
  LabelTaxonomy(std::vector<std::string> vocab, std::vector<std::string> labels,
                std::vector<LabelIndex> expert_known, std::vector<LabelIndex> ood);

  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<LabelIndex>& expert_known() const { return expert_known_; }
  const std::vector<LabelIndex>& ood() const { return ood_; }

  int num_labels() const { return static_cast<int>(labels_.size()); }
  int vocab_size() const { return static_cast<int>(vocab_.size()); }

  /// Vocabulary position of label j.
  int vocab_index(LabelIndex j) const { return label_vocab_index_.at(static_cast<std::size_t>(j)); }
  bool is_ood(LabelIndex j) const { return is_ood_.at(static_cast<std::size_t>(j)); }
  const std::string& name(LabelIndex j) const { return labels_.at(static_cast<std::size_t>(j)); }

  /// Throws std::out_of_range for an unknown label name.
  LabelIndex index_of(std::string_view label) const;

  friend bool operator==(const LabelTaxonomy& a, const LabelTaxonomy& b) {
    return a.vocab_ == b.vocab_ && a.labels_ == b.labels_ && a.expert_known_ == b.expert_known_ &&
           a.ood_ == b.ood_;
  }

 private:
  std::vector<std::string> vocab_;
  std::vector<std::string> labels_;
  std::vector<LabelIndex> expert_known_;
  std::vector<LabelIndex> ood_;
  std::vector<int> label_vocab_index_;
  std::vector<bool> is_ood_;
};

/// The 80 COCO object categories, in COCO order.
const std::vector<std::string>& coco_labels();

/// The ten animal categories held out of the expert's training set.
const std::vector<std::string>& coco_animal_labels();

/// COCO labels plus `vocab_size - 80` distractor tokens ("tok_000", ...),
/// with the animal classes as the OOD subset.
LabelTaxonomy build_default_taxonomy(int vocab_size = 200);

/// M x P indicator matrix: row j has a single 1 at the vocabulary column of label j.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> one_hot(const LabelTaxonomy& taxonomy) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> b =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(taxonomy.num_labels(),
                                                                  taxonomy.vocab_size());
  for (LabelIndex j = 0; j < taxonomy.num_labels(); ++j) b(j, taxonomy.vocab_index(j)) = Scalar(1);
  return b;
}

using OneHotMatrix = Eigen::MatrixXd;

nlohmann::json to_json(const LabelTaxonomy& taxonomy);
LabelTaxonomy taxonomy_from_json(const nlohmann::json& j);

}  // namespace semcom

#endif  // SEMCOM_TAXONOMY_HPP
