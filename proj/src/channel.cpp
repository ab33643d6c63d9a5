#include "semcom/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace semcom {

ComplexSignal awgn_apply(const ComplexSignal& x, const ChannelConfig& cfg, Rng& rng) {
  const double variance = noise_variance(cfg.snr_db);
  ComplexSignal y = x;
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index k = 0; k < y.cols(); ++k) y(i, k) += rng.complex_normal(variance);
  return y;
}

double average_power(const ComplexSignal& x) {
  return x.size() == 0 ? 0.0 : x.cwiseAbs2().sum() / static_cast<double>(x.size());
}

void project_unit_power(Eigen::MatrixXcd& codewords) {
  const double power = average_power(codewords);
  if (!(power > 0.0)) throw NumericalError("codebook collapsed to zero power");
  codewords /= std::sqrt(power);
}

CodebookCodec::CodebookCodec(Eigen::MatrixXcd codewords, double train_snr_db, bool trained)
    : codewords_(std::move(codewords)), train_snr_db_(train_snr_db), trained_(trained) {}

void CodebookCodec::require_ready() const {
  if (!trained_ || codewords_.size() == 0) throw std::logic_error("codebook codec is not trained");
}

ComplexSignal CodebookCodec::encode(const std::vector<LabelIndex>& labels) const {
  require_ready();
  ComplexSignal x(static_cast<Eigen::Index>(labels.size()), codewords_.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_labels())
      throw std::out_of_range("codebook encode: label out of range");
    x.row(static_cast<Eigen::Index>(i)) = codewords_.row(labels[i]);
  }
  return x;
}

std::vector<LabelIndex> CodebookCodec::decode(const ComplexSignal& y) const {
  require_ready();
  if (y.cols() != codewords_.cols()) throw std::invalid_argument("codebook decode: dimension mismatch");
  std::vector<LabelIndex> out(static_cast<std::size_t>(y.rows()));
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    Eigen::Index best = 0;
    (codewords_.rowwise() - y.row(i)).rowwise().squaredNorm().minCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<LabelIndex>(best);
  }
  return out;
}

double codebook_batch_loss(const Eigen::MatrixXcd& codewords, const std::vector<LabelIndex>& labels,
                           const Eigen::MatrixXcd& noise, Eigen::MatrixXcd* gradient) {
  const auto batch = static_cast<Eigen::Index>(labels.size());
  if (batch == 0) throw std::invalid_argument("codebook loss: empty batch");
  if (noise.rows() != batch || noise.cols() != codewords.cols())
    throw std::invalid_argument("codebook loss: noise shape mismatch");
  if (gradient) *gradient = Eigen::MatrixXcd::Zero(codewords.rows(), codewords.cols());

  double total = 0.0;
  for (Eigen::Index s = 0; s < batch; ++s) {
    const LabelIndex t = labels[static_cast<std::size_t>(s)];
    const Eigen::RowVectorXcd y = codewords.row(t) + noise.row(s);
    const Eigen::MatrixXcd diff = (-codewords).rowwise() + y;  // row m: y - c_m
    const Eigen::VectorXd logits = -diff.rowwise().squaredNorm();
    const double top = logits.maxCoeff();
    const Eigen::VectorXd weights = (logits.array() - top).exp().matrix();
    const double norm = weights.sum();
    total += -(logits(t) - top - std::log(norm));
    if (!gradient) continue;

    // dz_m/dc_m = 2(y - c_m) for m != t; every z_m also moves with c_t through y
    const Eigen::VectorXd prob = weights / norm;
    for (Eigen::Index m = 0; m < codewords.rows(); ++m) {
      if (m == t) continue;
      const Eigen::RowVectorXcd g = (2.0 * prob(m)) * diff.row(m);
      gradient->row(m) += g;
      gradient->row(t) -= g;
    }
  }
  if (gradient) *gradient /= static_cast<double>(batch);
  return total / static_cast<double>(batch);
}

CodebookTrainResult codebook_train(int num_labels, const CodebookTrainOptions& options,
                                   std::uint64_t seed) {
  if (num_labels < 2) throw std::invalid_argument("codebook needs at least two labels");
  if (options.dimension < 1) throw std::invalid_argument("codebook dimension must be >= 1");
  if (options.epochs < 1) throw std::invalid_argument("training needs at least one epoch");
  if (options.batch < 1) throw std::invalid_argument("training batch must be >= 1");

  Rng init = Rng::derive(seed, "codebook-init");
  Eigen::MatrixXcd codewords(num_labels, options.dimension);
  for (Eigen::Index m = 0; m < codewords.rows(); ++m)
    for (Eigen::Index k = 0; k < codewords.cols(); ++k)
      codewords(m, k) = options.init_scale * std::complex<double>(init.normal(), init.normal());

  const double variance = noise_variance(options.train_snr_db);
  CodebookTrainResult result;
  std::vector<LabelIndex> labels(static_cast<std::size_t>(options.batch));
  Eigen::MatrixXcd noise(options.batch, options.dimension);
  Eigen::MatrixXcd gradient;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Rng rng = Rng::derive(seed, "codebook-epoch", static_cast<std::uint64_t>(epoch));
    for (auto& label : labels) label = static_cast<LabelIndex>(rng.below(static_cast<std::uint64_t>(num_labels)));
    for (Eigen::Index s = 0; s < noise.rows(); ++s)
      for (Eigen::Index k = 0; k < noise.cols(); ++k) noise(s, k) = rng.complex_normal(variance);

    const double loss = codebook_batch_loss(codewords, labels, noise, &gradient);
    if (!std::isfinite(loss) || !gradient.allFinite())
      throw NumericalError("codebook training diverged at epoch " + std::to_string(epoch + 1));
    result.loss_history.push_back(loss);
    codewords -= options.learning_rate * gradient;
    project_unit_power(codewords);
  }
  result.codec = CodebookCodec(std::move(codewords), options.train_snr_db, true);
  return result;
}

nlohmann::json to_json(const CodebookCodec& codec) {
  auto words = nlohmann::json::array();
  const auto& c = codec.codewords();
  for (Eigen::Index m = 0; m < c.rows(); ++m)
    for (Eigen::Index k = 0; k < c.cols(); ++k) words.push_back({c(m, k).real(), c(m, k).imag()});
  return {{"d", codec.dimension()}, {"train_snr_db", codec.train_snr_db()}, {"codewords", std::move(words)}};
}

CodebookCodec codec_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  const auto& words = j.at("codewords");
  if (d < 1 || words.size() % static_cast<std::size_t>(d) != 0)
    throw std::invalid_argument("codec JSON: codeword count is not a multiple of d");
  const auto m = static_cast<Eigen::Index>(words.size() / static_cast<std::size_t>(d));
  Eigen::MatrixXcd c(m, d);
  std::size_t e = 0;
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index k = 0; k < d; ++k, ++e)
      c(r, k) = {words[e].at(0).get<double>(), words[e].at(1).get<double>()};
  return CodebookCodec(std::move(c), j.at("train_snr_db").get<double>(), true);
}

std::array<std::uint8_t, 7> hamming74_encode(const std::array<std::uint8_t, 4>& d) {
  const std::uint8_t p1 = d[0] ^ d[1] ^ d[3];
  const std::uint8_t p2 = d[0] ^ d[2] ^ d[3];
  const std::uint8_t p3 = d[1] ^ d[2] ^ d[3];
  return {p1, p2, d[0], p3, d[1], d[2], d[3]};
}

std::array<std::uint8_t, 4> hamming74_decode(std::array<std::uint8_t, 7> c) {
  const int s1 = c[0] ^ c[2] ^ c[4] ^ c[6];
  const int s2 = c[1] ^ c[2] ^ c[5] ^ c[6];
  const int s3 = c[3] ^ c[4] ^ c[5] ^ c[6];
  const int position = s1 | (s2 << 1) | (s3 << 2);  // 1-based error position
  if (position != 0) c[static_cast<std::size_t>(position - 1)] ^= 1U;
  return {c[2], c[4], c[5], c[6]};
}

Eigen::VectorXcd qpsk_modulate(const Bits& bits) {
  if (bits.size() % 2 != 0) throw std::invalid_argument("QPSK needs an even number of bits");
  const double a = 1.0 / std::sqrt(2.0);
  Eigen::VectorXcd symbols(static_cast<Eigen::Index>(bits.size() / 2));
  for (Eigen::Index i = 0; i < symbols.size(); ++i) {
    const auto b0 = bits[static_cast<std::size_t>(2 * i)];
    const auto b1 = bits[static_cast<std::size_t>(2 * i + 1)];
    symbols(i) = {a * (1.0 - 2.0 * b0), a * (1.0 - 2.0 * b1)};
  }
  return symbols;
}

Bits qpsk_demodulate(const Eigen::VectorXcd& symbols) {
  Bits bits(static_cast<std::size_t>(2 * symbols.size()));
  for (Eigen::Index i = 0; i < symbols.size(); ++i) {
    bits[static_cast<std::size_t>(2 * i)] = symbols(i).real() < 0.0 ? 1 : 0;
    bits[static_cast<std::size_t>(2 * i + 1)] = symbols(i).imag() < 0.0 ? 1 : 0;
  }
  return bits;
}

Bits digital_encode_label(LabelIndex label) {
  if (label < 0 || label >= (1 << kDigitalLabelBits))
    throw std::invalid_argument("digital codec: label does not fit in 7 bits");
  std::array<std::uint8_t, 8> data{};
  for (int b = 0; b < kDigitalLabelBits; ++b)
    data[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>((label >> (kDigitalLabelBits - 1 - b)) & 1);
  Bits coded;
  coded.reserve(14);
  for (int block = 0; block < 2; ++block) {
    const auto word = hamming74_encode({data[4 * block], data[4 * block + 1], data[4 * block + 2], data[4 * block + 3]});
    coded.insert(coded.end(), word.begin(), word.end());
  }
  return coded;
}

int digital_decode_bits(const Bits& coded) {
  if (coded.size() != 14) throw std::invalid_argument("digital codec: expected 14 coded bits");
  int value = 0;
  int bit = 0;
  for (int block = 0; block < 2; ++block) {
    std::array<std::uint8_t, 7> word{};
    std::copy_n(coded.begin() + 7 * block, 7, word.begin());
    for (std::uint8_t d : hamming74_decode(word)) {
      if (bit++ < kDigitalLabelBits) value = (value << 1) | d;
    }
  }
  return value;
}

std::vector<LabelIndex> digital_roundtrip(const std::vector<LabelIndex>& labels, int num_labels,
                                          const ChannelConfig& cfg, Rng& rng) {
  if (num_labels > (1 << kDigitalLabelBits))
    throw std::invalid_argument("digital codec supports at most 128 labels");
  std::vector<LabelIndex> out;
  out.reserve(labels.size());
  for (LabelIndex label : labels) {
    const ComplexSignal x = qpsk_modulate(digital_encode_label(label));
    const ComplexSignal y = awgn_apply(x, cfg, rng);
    const int value = digital_decode_bits(qpsk_demodulate(y.col(0)));
    out.push_back(std::min(value, num_labels - 1));
  }
  return out;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace semcom
