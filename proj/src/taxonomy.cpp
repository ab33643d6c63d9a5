#include "semcom/taxonomy.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace semcom {

LabelTaxonomy::LabelTaxonomy(std::vector<std::string> vocab, std::vector<std::string> labels,
                             std::vector<LabelIndex> expert_known, std::vector<LabelIndex> ood)
    : vocab_(std::move(vocab)),
      labels_(std::move(labels)),
      expert_known_(std::move(expert_known)),
      ood_(std::move(ood)) {
  std::unordered_map<std::string, int> position;
  for (std::size_t k = 0; k < vocab_.size(); ++k) {
    if (!position.emplace(vocab_[k], static_cast<int>(k)).second)
      throw std::invalid_argument("taxonomy: duplicate vocabulary token '" + vocab_[k] + "'");
  }
  std::unordered_set<std::string> seen;
  label_vocab_index_.reserve(labels_.size());
  for (const auto& label : labels_) {
    if (!seen.insert(label).second)
      throw std::invalid_argument("taxonomy: duplicate label '" + label + "'");
    auto it = position.find(label);
    if (it == position.end())
      throw std::invalid_argument("taxonomy: label '" + label + "' missing from vocabulary");
    label_vocab_index_.push_back(it->second);
  }

  const auto m = labels_.size();
  is_ood_.assign(m, false);
  std::vector<int> owner(m, 0);
  auto mark = [&](const std::vector<LabelIndex>& subset, bool ood_flag) {
    for (LabelIndex j : subset) {
      if (j < 0 || static_cast<std::size_t>(j) >= m)
        throw std::invalid_argument("taxonomy: label index out of range");
      if (owner[static_cast<std::size_t>(j)]++ != 0)
        throw std::invalid_argument("taxonomy: label " + std::to_string(j) +
                                    " listed twice across expert_known/ood");
      is_ood_[static_cast<std::size_t>(j)] = ood_flag;
    }
  };
  mark(expert_known_, false);
  mark(ood_, true);
  if (expert_known_.size() + ood_.size() != m)
    throw std::invalid_argument("taxonomy: expert_known and ood must partition the labels");
}

LabelIndex LabelTaxonomy::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw std::out_of_range("unknown label '" + std::string(label) + "'");
  return static_cast<LabelIndex>(it - labels_.begin());
}

const std::vector<std::string>& coco_labels() {
  static const std::vector<std::string> labels = {
      "person",        "bicycle",      "car",           "motorcycle",   "airplane",
      "bus",           "train",        "truck",         "boat",         "traffic light",
      "fire hydrant",  "stop sign",    "parking meter", "bench",        "bird",
      "cat",           "dog",          "horse",         "sheep",        "cow",
      "elephant",      "bear",         "zebra",         "giraffe",      "backpack",
      "umbrella",      "handbag",      "tie",           "suitcase",     "frisbee",
      "skis",          "snowboard",    "sports ball",   "kite",         "baseball bat",
      "baseball glove", "skateboard",  "surfboard",     "tennis racket", "bottle",
      "wine glass",    "cup",          "fork",          "knife",        "spoon",
      "bowl",          "banana",       "apple",         "sandwich",     "orange",
      "broccoli",      "carrot",       "hot dog",       "pizza",        "donut",
      "cake",          "chair",        "couch",         "potted plant", "bed",
      "dining table",  "toilet",       "tv",            "laptop",       "mouse",
      "remote",        "keyboard",     "cell phone",    "microwave",    "oven",
      "toaster",       "sink",         "refrigerator",  "book",         "clock",
      "vase",          "scissors",     "teddy bear",    "hair drier",   "toothbrush"};
  return labels;
}

const std::vector<std::string>& coco_animal_labels() {
  static const std::vector<std::string> animals = {"bird",  "cat",      "dog",  "horse",
                                                   "sheep", "cow",      "elephant", "bear",
                                                   "zebra", "giraffe"};
  return animals;
}

LabelTaxonomy build_default_taxonomy(int vocab_size) {
  const auto& labels = coco_labels();
  const int m = static_cast<int>(labels.size());
  if (vocab_size < m) throw std::invalid_argument("vocabulary smaller than the label set");

  // label j sits at column floor(j * P / M); the gaps hold distractor tokens
  std::vector<std::string> vocab(static_cast<std::size_t>(vocab_size));
  std::vector<bool> taken(static_cast<std::size_t>(vocab_size), false);
  for (int j = 0; j < m; ++j) {
    const auto k = static_cast<std::size_t>(static_cast<long>(j) * vocab_size / m);
    vocab[k] = labels[static_cast<std::size_t>(j)];
    taken[k] = true;
  }
  int next = 0;
  for (std::size_t k = 0; k < vocab.size(); ++k) {
    if (taken[k]) continue;
    char buf[16];
    std::snprintf(buf, sizeof buf, "tok_%03d", next++);
    vocab[k] = buf;
  }

  std::vector<LabelIndex> known;
  std::vector<LabelIndex> ood;
  const auto& animals = coco_animal_labels();
  for (int j = 0; j < m; ++j) {
    const bool animal = std::find(animals.begin(), animals.end(),
                                  labels[static_cast<std::size_t>(j)]) != animals.end();
    (animal ? ood : known).push_back(j);
  }
  return LabelTaxonomy(std::move(vocab), labels, std::move(known), std::move(ood));
}

nlohmann::json to_json(const LabelTaxonomy& taxonomy) {
  return {{"vocab", taxonomy.vocab()},
          {"labels", taxonomy.labels()},
          {"expert_known", taxonomy.expert_known()},
          {"ood", taxonomy.ood()}};
}

LabelTaxonomy taxonomy_from_json(const nlohmann::json& j) {
  return LabelTaxonomy(j.at("vocab").get<std::vector<std::string>>(),
                       j.at("labels").get<std::vector<std::string>>(),
                       j.at("expert_known").get<std::vector<LabelIndex>>(),
                       j.at("ood").get<std::vector<LabelIndex>>());
}

}  // namespace semcom
