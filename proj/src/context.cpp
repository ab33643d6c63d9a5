#include "semcom/context.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace semcom {

Eigen::MatrixXd positive_pmi(const Eigen::MatrixXd& counts) {
  if (counts.rows() != counts.cols()) throw std::invalid_argument("co-occurrence counts must be square");
  const double total = counts.sum();
  if (!(total > 0.0)) throw std::invalid_argument("co-occurrence counts are all zero");
  const Eigen::VectorXd marginal = counts.rowwise().sum() / total;
  Eigen::MatrixXd ppmi = Eigen::MatrixXd::Zero(counts.rows(), counts.cols());
  for (Eigen::Index a = 0; a < counts.rows(); ++a) {
    for (Eigen::Index b = 0; b < counts.cols(); ++b) {
      const double joint = counts(a, b) / total;
      if (joint <= 0.0) continue;
      ppmi(a, b) = std::max(0.0, std::log(joint / (marginal(a) * marginal(b))));
    }
  }
  return ppmi;
}

CooccurrenceEmbedding::CooccurrenceEmbedding(const LabelTaxonomy& taxonomy,
                                             const Eigen::MatrixXd& counts) {
  const int m = taxonomy.num_labels();
  if (counts.rows() != m || counts.cols() != m)
    throw std::invalid_argument("co-occurrence counts must be M x M");
  vectors_ = positive_pmi(counts);
  for (int j = 0; j < m; ++j) {
    // a label that never co-occurs above chance still needs a nonzero vector
    if (vectors_.row(j).squaredNorm() == 0.0) vectors_(j, j) = 1.0;
    vectors_.row(j).normalize();
    index_.emplace(taxonomy.name(j), j);
  }
}

EmbeddingVector CooccurrenceEmbedding::token_vector(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw std::out_of_range("unknown token '" + token + "'");
  return vectors_.row(it->second).transpose();
}

FileEmbedding FileEmbedding::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file " + path);
  return parse(in);
}

FileEmbedding FileEmbedding::parse(std::istream& in) {
  FileEmbedding out;
  std::string line;
  bool first = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string token;
    if (!(fields >> token)) continue;
    std::vector<double> values;
    std::string field;
    while (fields >> field) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != field.size())
        throw std::invalid_argument("embedding file line " + std::to_string(line_no) +
                                    ": bad number '" + field + "'");
      values.push_back(v);
    }
    // "COUNT DIM" header: two integers on the first non-empty line
    if (first) {
      first = false;
      if (values.size() == 1 && token.find_first_not_of("0123456789") == std::string::npos &&
          values[0] == std::floor(values[0]))
        continue;
    }
    if (values.empty())
      throw std::invalid_argument("embedding file line " + std::to_string(line_no) + ": no values");
    if (out.dim_ == 0) out.dim_ = static_cast<int>(values.size());
    if (static_cast<int>(values.size()) != out.dim_)
      throw std::invalid_argument("embedding file line " + std::to_string(line_no) +
                                  ": inconsistent dimension");
    if (!out.index_.emplace(token, static_cast<int>(out.vectors_.size())).second)
      throw std::invalid_argument("embedding file: duplicate token '" + token + "'");
    out.vectors_.push_back(Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                             static_cast<Eigen::Index>(values.size())));
  }
  if (out.vectors_.empty()) throw std::invalid_argument("embedding file contains no vectors");
  return out;
}

EmbeddingVector FileEmbedding::token_vector(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) {
    std::string underscored = token;
    std::replace(underscored.begin(), underscored.end(), ' ', '_');
    it = index_.find(underscored);
  }
  if (it == index_.end()) throw std::out_of_range("unknown token '" + token + "'");
  return vectors_[static_cast<std::size_t>(it->second)];
}

EmbeddingVector embed_text(const EmbeddingProvider& provider, const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw std::invalid_argument("embed_text: empty input");
  EmbeddingVector sum = EmbeddingVector::Zero(provider.dimension());
  for (const auto& token : tokens) sum += provider.token_vector(token);
  return sum / static_cast<double>(tokens.size());
}

double contextual_similarity(double ca, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("contextual similarity: tau must be non-negative");
  return std::pow(std::clamp(ca, kCosineFloor, 1.0), tau);
}

Eigen::VectorXd context_cosines(const ContextInfo& context, const EmbeddingProvider& provider,
                                const LabelTaxonomy& taxonomy) {
  std::vector<std::string> phrase;
  phrase.reserve(context.labels.size());
  for (LabelIndex j : context.labels) phrase.push_back(taxonomy.name(j));
  const EmbeddingVector context_vec = embed_text(provider, phrase);

  Eigen::VectorXd cosines(taxonomy.num_labels());
  for (LabelIndex j = 0; j < taxonomy.num_labels(); ++j)
    cosines(j) = cosine_angle(context_vec, provider.token_vector(taxonomy.name(j)));
  return cosines;
}

ProbabilityVector reweight_with_cosines(const ProbabilityVector& p, const Eigen::VectorXd& cosines,
                                        double tau) {
  if (tau < 0.0) throw std::invalid_argument("tau must be nonnegative");
  // every CS is exactly 1; skip the renormalization so argmax ties cannot shift
  if (tau == 0.0) return p;
  const Eigen::VectorXd cs = cosines.unaryExpr([tau](double ca) { return contextual_similarity(ca, tau); });
  return bayes_reweight(p, cs);
}

LabelIndex revise_identification(const ProbabilityVector& p, const ContextInfo& context,
                                 const EmbeddingProvider& provider, const LabelTaxonomy& taxonomy,
                                 double tau) {
  if (context.empty()) return static_cast<LabelIndex>(argmax_lowest(p));
  const ProbabilityVector revised =
      reweight_with_cosines(p, context_cosines(context, provider, taxonomy), tau);
  return static_cast<LabelIndex>(argmax_lowest(revised));
}

}  // namespace semcom
