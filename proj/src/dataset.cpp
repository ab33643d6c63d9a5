#include "semcom/dataset.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

#include "semcom/rng.hpp"

namespace semcom {

namespace {

using Entry = std::pair<const char*, double>;

SceneCategory make_category(const LabelTaxonomy& taxonomy, const char* name, double weight,
                            double mean_count, std::initializer_list<Entry> entries) {
  SceneCategory c;
  c.name = name;
  c.weight = weight;
  c.mean_count = mean_count;
  c.label_freq = Eigen::VectorXd::Zero(taxonomy.num_labels());
  for (const auto& [label, w] : entries) c.label_freq(taxonomy.index_of(label)) += w;
  c.label_freq /= c.label_freq.sum();
  return c;
}

// Index drawn proportionally to `weights` restricted to `mask`; -1 if the mask has no mass.
LabelIndex draw_masked(const Eigen::VectorXd& weights, const std::vector<bool>& mask, Rng& rng) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < weights.size(); ++j)
    if (mask[static_cast<std::size_t>(j)]) total += weights(j);
  if (!(total > 0.0)) return -1;
  const double target = rng.uniform() * total;
  double acc = 0.0;
  LabelIndex last = -1;
  for (Eigen::Index j = 0; j < weights.size(); ++j) {
    if (!mask[static_cast<std::size_t>(j)] || weights(j) <= 0.0) continue;
    acc += weights(j);
    last = static_cast<LabelIndex>(j);
    if (target < acc) return last;
  }
  return last;
}

}  // namespace

void validate(const ScenePrior& prior, const LabelTaxonomy& taxonomy) {
  if (prior.categories.empty()) throw std::invalid_argument("scene prior has no categories");
  Eigen::VectorXd coverage = Eigen::VectorXd::Zero(taxonomy.num_labels());
  for (const auto& c : prior.categories) {
    if (c.label_freq.size() != taxonomy.num_labels())
      throw std::invalid_argument("category '" + c.name + "' has the wrong number of labels");
    if ((c.label_freq.array() < 0.0).any() || std::abs(c.label_freq.sum() - 1.0) > 1e-9)
      throw std::invalid_argument("category '" + c.name + "' frequencies are not normalized");
    if (!(c.weight > 0.0)) throw std::invalid_argument("category weights must be positive");
    if (!(c.mean_count >= 1.0)) throw std::invalid_argument("category mean object count must be >= 1");
    coverage += c.label_freq;
  }
  for (Eigen::Index j = 0; j < coverage.size(); ++j)
    if (!(coverage(j) > 0.0))
      throw std::invalid_argument("label '" + taxonomy.name(static_cast<LabelIndex>(j)) +
                                  "' has zero frequency in every category");
  if (!(prior.difficulty_a > 0.0 && prior.difficulty_b > 0.0))
    throw std::invalid_argument("difficulty Beta parameters must be positive");
  if (prior.max_objects < 1) throw std::invalid_argument("max_objects must be >= 1");
}

ScenePrior default_scene_prior(const LabelTaxonomy& taxonomy) {
  ScenePrior prior;
  auto add = [&](const char* name, double weight, double mean_count, std::initializer_list<Entry> entries) {
    prior.categories.push_back(make_category(taxonomy, name, weight, mean_count, entries));
  };
  add("street", 1.5, 6.0,
      {{"person", 10}, {"car", 8}, {"bus", 2}, {"truck", 3}, {"motorcycle", 2}, {"bicycle", 2},
       {"traffic light", 4}, {"fire hydrant", 1}, {"stop sign", 1}, {"parking meter", 1},
       {"bench", 1}, {"handbag", 1}, {"backpack", 1}, {"umbrella", 1}, {"dog", 0.5}});
  add("sports field", 1.2, 6.0,
      {{"person", 10}, {"sports ball", 5}, {"baseball bat", 2}, {"baseball glove", 2},
       {"tennis racket", 2}, {"frisbee", 1}, {"bench", 1.5}, {"bottle", 1}, {"chair", 0.5}});
  add("park", 1.0, 5.0,
      {{"person", 6}, {"dog", 3}, {"bench", 3}, {"frisbee", 2}, {"kite", 2}, {"bird", 2},
       {"bicycle", 1}, {"umbrella", 1}, {"potted plant", 0.5}, {"skateboard", 1}});
  add("beach", 0.8, 5.0,
      {{"person", 6}, {"surfboard", 3}, {"boat", 3}, {"kite", 2}, {"umbrella", 2}, {"bird", 2},
       {"bottle", 1}});
  add("snow", 0.6, 4.0, {{"person", 6}, {"skis", 4}, {"snowboard", 3}, {"backpack", 1}});
  add("kitchen", 1.0, 6.0,
      {{"oven", 2}, {"microwave", 2}, {"refrigerator", 2}, {"sink", 2}, {"toaster", 1},
       {"bottle", 2}, {"cup", 2}, {"bowl", 2}, {"knife", 1}, {"spoon", 1}, {"fork", 1},
       {"person", 1}, {"banana", 1}, {"apple", 1}, {"orange", 1}, {"cat", 0.3},
       {"scissors", 0.5}, {"vase", 0.5}});
  add("dining", 1.0, 7.0,
      {{"dining table", 4}, {"person", 4}, {"pizza", 2}, {"cup", 2}, {"wine glass", 2},
       {"fork", 2}, {"knife", 2}, {"spoon", 1}, {"bowl", 2}, {"sandwich", 2}, {"cake", 2},
       {"donut", 1.5}, {"hot dog", 1}, {"broccoli", 1}, {"carrot", 1}, {"chair", 2},
       {"bottle", 1}});
  add("living room", 1.0, 6.0,
      {{"couch", 3}, {"chair", 3}, {"tv", 3}, {"remote", 2}, {"book", 3}, {"potted plant", 2},
       {"vase", 1.5}, {"clock", 2}, {"person", 2}, {"cat", 1}, {"dog", 1}, {"laptop", 1},
       {"teddy bear", 1}});
  add("office", 0.8, 6.0,
      {{"laptop", 4}, {"keyboard", 3}, {"mouse", 3}, {"cell phone", 2}, {"book", 2},
       {"person", 3}, {"chair", 2}, {"cup", 1}, {"tv", 1}, {"tie", 1}});
  add("bathroom and bedroom", 0.8, 4.0,
      {{"toilet", 3}, {"sink", 3}, {"toothbrush", 2}, {"hair drier", 1}, {"bed", 3},
       {"teddy bear", 1}, {"book", 1}, {"clock", 1}, {"cat", 1}, {"person", 1}});
  add("farm", 0.6, 5.0,
      {{"sheep", 4}, {"cow", 4}, {"horse", 3}, {"person", 2}, {"dog", 2}, {"bird", 1},
       {"truck", 1}});
  add("wildlife", 0.5, 4.0,
      {{"elephant", 4}, {"zebra", 4}, {"giraffe", 4}, {"bear", 2}, {"bird", 2}, {"person", 0.5},
       {"car", 0.5}});
  add("travel", 0.8, 5.0,
      {{"airplane", 3}, {"train", 3}, {"suitcase", 3}, {"person", 4}, {"backpack", 2},
       {"handbag", 2}, {"tie", 1}, {"umbrella", 1}, {"cell phone", 1}, {"clock", 1}});
  validate(prior, taxonomy);
  return prior;
}

Eigen::MatrixXd expected_cooccurrence(const ScenePrior& prior) {
  const Eigen::Index m = prior.categories.front().label_freq.size();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(m, m);
  double total_weight = 0.0;
  for (const auto& c : prior.categories) total_weight += c.weight;
  for (const auto& c : prior.categories) {
    const double scale = (c.weight / total_weight) * c.mean_count * c.mean_count;
    counts.noalias() += scale * c.label_freq * c.label_freq.transpose();
  }
  return counts;
}

Eigen::MatrixXd observed_cooccurrence(const std::vector<Scene>& scenes, int num_labels) {
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(num_labels, num_labels);
  for (const auto& scene : scenes)
    for (std::size_t a = 0; a < scene.objects.size(); ++a)
      for (std::size_t b = 0; b < scene.objects.size(); ++b)
        if (a != b) counts(scene.objects[a].true_label, scene.objects[b].true_label) += 1.0;
  return counts;
}

std::vector<Scene> generate_dataset(const ScenePrior& prior, const LabelTaxonomy& taxonomy, int n_scenes,
                                    double ood_fraction, std::uint64_t seed) {
  validate(prior, taxonomy);
  if (n_scenes < 1) throw std::invalid_argument("dataset needs at least one scene");
  if (!(ood_fraction >= 0.0 && ood_fraction <= 1.0))
    throw std::invalid_argument("ood_fraction must lie in [0, 1]");
  if (ood_fraction > 0.0 && taxonomy.ood().empty())
    throw std::invalid_argument("ood_fraction > 0 but the taxonomy has no OOD labels");
  if (ood_fraction < 1.0 && taxonomy.expert_known().empty())
    throw std::invalid_argument("ood_fraction < 1 but the taxonomy has no known labels");

  const auto m = static_cast<std::size_t>(taxonomy.num_labels());
  std::vector<bool> ood_mask(m);
  std::vector<bool> known_mask(m);
  for (std::size_t j = 0; j < m; ++j) {
    ood_mask[j] = taxonomy.is_ood(static_cast<LabelIndex>(j));
    known_mask[j] = !ood_mask[j];
  }
  Eigen::VectorXd global = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
  for (std::size_t c = 0; c < prior.categories.size(); ++c) {
    global += prior.categories[c].weight * prior.categories[c].label_freq;
  }
  // the fallback must be able to produce every label of either subset
  global.array() += 1e-3 * global.maxCoeff();

  Rng offset_rng = Rng::derive(seed, "ood-offset");
  const double offset = offset_rng.uniform();
  std::uint64_t object_counter = 0;
  auto next_is_ood = [&] {
    const double t = static_cast<double>(object_counter++);
    return std::floor((t + 1.0 + offset) * ood_fraction) > std::floor((t + offset) * ood_fraction);
  };

  // Scene category and object count are drawn jointly, conditioned on the
  // OOD/known pattern of the next object slots, so OOD objects land in
  // categories that actually contain OOD labels.
  const auto n_categories = prior.categories.size();
  std::vector<double> ood_mass(n_categories);
  for (std::size_t c = 0; c < n_categories; ++c) {
    double mass = 0.0;
    for (std::size_t j = 0; j < m; ++j)
      if (ood_mask[j]) mass += prior.categories[c].label_freq(static_cast<Eigen::Index>(j));
    ood_mass[c] = mass;
  }
  const int max_objects = prior.max_objects;
  Eigen::VectorXd joint(static_cast<Eigen::Index>(n_categories) * max_objects);

  std::vector<Scene> scenes;
  scenes.reserve(static_cast<std::size_t>(n_scenes));
  std::vector<bool> pattern(static_cast<std::size_t>(max_objects));
  for (int i = 0; i < n_scenes; ++i) {
    for (auto&& slot : pattern) slot = next_is_ood();
    Rng rng = Rng::derive(seed, "scene", static_cast<std::uint64_t>(i));

    for (std::size_t c = 0; c < n_categories; ++c) {
      const auto& cat = prior.categories[c];
      const double lambda = cat.mean_count - 1.0;
      double poisson = std::exp(-lambda);  // P(extra = 0)
      double ood_seen = 0.0;
      for (int n = 1; n <= max_objects; ++n) {
        if (n > 1) poisson *= lambda / static_cast<double>(n - 1);
        ood_seen += pattern[static_cast<std::size_t>(n - 1)] ? 1.0 : 0.0;
        const double likelihood = std::pow(ood_mass[c], ood_seen) * std::pow(1.0 - ood_mass[c], n - ood_seen);
        joint(static_cast<Eigen::Index>(c) * max_objects + (n - 1)) = cat.weight * poisson * likelihood;
      }
    }
    const std::vector<bool> any(static_cast<std::size_t>(joint.size()), true);
    LabelIndex cell = draw_masked(joint, any, rng);
    if (cell < 0) {
      // no category explains the pattern; fall back to the unconditioned prior
      for (std::size_t c = 0; c < n_categories; ++c) {
        const auto& cat = prior.categories[c];
        const double lambda = cat.mean_count - 1.0;
        double poisson = std::exp(-lambda);
        for (int n = 1; n <= max_objects; ++n) {
          if (n > 1) poisson *= lambda / static_cast<double>(n - 1);
          joint(static_cast<Eigen::Index>(c) * max_objects + (n - 1)) = cat.weight * poisson;
        }
      }
      cell = draw_masked(joint, any, rng);
    }
    Scene scene;
    scene.category = cell / max_objects;
    const int count = cell % max_objects + 1;
    const auto& category = prior.categories[static_cast<std::size_t>(scene.category)];
    for (int k = 0; k < count; ++k) {
      const auto& mask = pattern[static_cast<std::size_t>(k)] ? ood_mask : known_mask;
      LabelIndex label = draw_masked(category.label_freq, mask, rng);
      if (label < 0) label = draw_masked(global, mask, rng);
      scene.objects.push_back({label, rng.beta(prior.difficulty_a, prior.difficulty_b)});
    }
    // slots beyond this scene's count go back to the schedule
    object_counter -= static_cast<std::uint64_t>(max_objects - count);
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

double ood_share(const std::vector<Scene>& scenes, const LabelTaxonomy& taxonomy) {
  std::size_t total = 0;
  std::size_t ood = 0;
  for (const auto& s : scenes)
    for (const auto& o : s.objects) {
      ++total;
      ood += taxonomy.is_ood(o.true_label) ? 1 : 0;
    }
  return total == 0 ? 0.0 : static_cast<double>(ood) / static_cast<double>(total);
}

}  // namespace semcom
