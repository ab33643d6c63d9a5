#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "semcom/channel.hpp"

using namespace semcom;

namespace {

Eigen::MatrixXcd unit_power_signal(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXcd x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.complex_normal(1.0);
  project_unit_power(x);
  return x;
}

// bit error rate of uncoded Gray QPSK at the given Eb/N0 (two bits per unit-energy symbol)
double uncoded_ber(double ebn0_db, int bits, std::uint64_t seed) {
  Rng rng(seed);
  Bits tx(static_cast<std::size_t>(bits));
  for (auto& b : tx) b = static_cast<std::uint8_t>(rng.below(2));
  const ChannelConfig cfg{ebn0_db + 10.0 * std::log10(2.0)};
  const Eigen::VectorXcd y = awgn_apply(qpsk_modulate(tx), cfg, rng).col(0);
  const Bits rx = qpsk_demodulate(y);
  int errors = 0;
  for (std::size_t i = 0; i < tx.size(); ++i) errors += tx[i] != rx[i];
  return static_cast<double>(errors) / bits;
}

}  // namespace

TEST(Awgn, VanishingNoiseAtHighSnr) {
  const auto x = unit_power_signal(50, 40, 1);
  Rng rng(2);
  const auto y = awgn_apply(x, {200.0}, rng);
  EXPECT_LT((y - x).cwiseAbs().maxCoeff(), 1e-9 * x.cwiseAbs().maxCoeff());
}

TEST(Awgn, NoisePowerAtZeroDb) {
  const Eigen::MatrixXcd x = Eigen::MatrixXcd::Zero(100000, 1);
  Rng rng(3);
  const double p = average_power(awgn_apply(x, {0.0}, rng));
  EXPECT_GE(p, 0.99);
  EXPECT_LE(p, 1.01);
}

TEST(Awgn, EmpiricalSnrCalibrated) {
  const auto x = unit_power_signal(100000, 1, 4);
  for (double snr : {-10.0, 0.0, 10.0}) {
    Rng rng(5);
    const auto y = awgn_apply(x, {snr}, rng);
    const double measured = 10.0 * std::log10(average_power(x) / average_power(y - x));
    EXPECT_NEAR(measured, snr, 0.1);
  }
}

TEST(Awgn, SameSeedBitIdentical) {
  const auto x = unit_power_signal(10, 10, 6);
  Rng a(7), b(7);
  EXPECT_TRUE(awgn_apply(x, {3.0}, a) == awgn_apply(x, {3.0}, b));
}

TEST(Codebook, NoiselessRoundTrip) {
  const CodebookCodec codec(unit_power_signal(80, 50, 8), 10.0);
  std::vector<LabelIndex> labels;
  for (int i = 0; i < 80; ++i) labels.push_back((i * 37) % 80);
  const auto x = codec.encode(labels);
  EXPECT_NEAR(average_power(x), 1.0, 1e-6);
  EXPECT_EQ(codec.decode(x), labels);
}

TEST(Codebook, UntrainedCodecRefuses) {
  const CodebookCodec blank;
  EXPECT_THROW(blank.encode({0}), std::logic_error);
  const CodebookCodec flagged(unit_power_signal(4, 2, 9), 10.0, false);
  EXPECT_THROW(flagged.decode(Eigen::MatrixXcd::Zero(1, 2)), std::logic_error);
}

TEST(Codebook, EncodeRejectsOutOfRangeLabel) {
  const CodebookCodec codec(unit_power_signal(4, 2, 10), 10.0);
  EXPECT_THROW(codec.encode({4}), std::out_of_range);
}

TEST(Codebook, DecodeInvariantUnderGlobalPhase) {
  const auto cw = unit_power_signal(16, 6, 11);
  const CodebookCodec codec(cw, 10.0);
  const std::complex<double> phase = std::polar(1.0, 0.913);
  const CodebookCodec rotated((cw * phase).eval(), 10.0);
  Rng rng(12);
  std::vector<LabelIndex> labels;
  for (int i = 0; i < 300; ++i) labels.push_back(static_cast<LabelIndex>(rng.below(16)));
  const auto y = awgn_apply(codec.encode(labels), {0.0}, rng);
  EXPECT_EQ(codec.decode(y), rotated.decode((y * phase).eval()));
}

TEST(Codebook, GradientMatchesFiniteDifferences) {
  Rng rng(13);
  Eigen::MatrixXcd cw(8, 5);
  for (Eigen::Index i = 0; i < cw.size(); ++i) cw.data()[i] = rng.complex_normal(0.5);
  std::vector<LabelIndex> labels;
  for (int i = 0; i < 32; ++i) labels.push_back(static_cast<LabelIndex>(rng.below(8)));
  Eigen::MatrixXcd noise(32, 5);
  for (Eigen::Index i = 0; i < noise.size(); ++i) noise.data()[i] = rng.complex_normal(0.3);

  Eigen::MatrixXcd grad;
  codebook_batch_loss(cw, labels, noise, &grad);
  const double h = 1e-6;
  for (int t = 0; t < 10; ++t) {
    const auto r = static_cast<Eigen::Index>(rng.below(8));
    const auto c = static_cast<Eigen::Index>(rng.below(5));
    for (bool imag : {false, true}) {
      Eigen::MatrixXcd plus = cw, minus = cw;
      const std::complex<double> step = imag ? std::complex<double>(0, h) : std::complex<double>(h, 0);
      plus(r, c) += step;
      minus(r, c) -= step;
      const double fd = (codebook_batch_loss(plus, labels, noise) - codebook_batch_loss(minus, labels, noise)) / (2 * h);
      const double analytic = imag ? grad(r, c).imag() : grad(r, c).real();
      EXPECT_LE(std::abs(fd - analytic), 1e-4 * std::max(1e-3, std::abs(fd))) << r << "," << c << " imag=" << imag;
    }
  }
}

TEST(Codebook, TrainingReducesLossAndKeepsUnitPower) {
  CodebookTrainOptions opts;
  opts.epochs = 40;
  const auto result = codebook_train(20, opts, 14);
  ASSERT_EQ(result.loss_history.size(), 40u);
  EXPECT_LE(result.loss_history.back(), result.loss_history.front());
  EXPECT_NEAR(average_power(result.codec.codewords()), 1.0, 1e-6);
  EXPECT_TRUE(result.codec.trained());
  EXPECT_DOUBLE_EQ(result.codec.train_snr_db(), 10.0);
}

TEST(Codebook, TrainingDeterministic) {
  CodebookTrainOptions opts;
  opts.epochs = 5;
  const auto a = codebook_train(10, opts, 15);
  const auto b = codebook_train(10, opts, 15);
  EXPECT_TRUE(a.codec.codewords() == b.codec.codewords());
  EXPECT_EQ(a.loss_history, b.loss_history);
}

TEST(Codebook, DivergenceReported) {
  CodebookTrainOptions opts;
  opts.epochs = 3;
  opts.learning_rate = std::numeric_limits<double>::infinity();
  EXPECT_THROW(codebook_train(10, opts, 16), NumericalError);
}

TEST(Codebook, InvalidOptionsRejected) {
  CodebookTrainOptions opts;
  opts.dimension = 0;
  EXPECT_THROW(codebook_train(10, opts, 1), std::invalid_argument);
  opts.dimension = 5;
  opts.epochs = 0;
  EXPECT_THROW(codebook_train(10, opts, 1), std::invalid_argument);
}

TEST(Codebook, JsonRoundTrip) {
  const CodebookCodec codec(unit_power_signal(6, 3, 17), 7.5);
  const auto j = to_json(codec);
  EXPECT_EQ(j["d"], 3);
  EXPECT_EQ(j["codewords"].size(), 18u);
  const auto back = codec_from_json(j);
  EXPECT_TRUE(back.codewords() == codec.codewords());
  EXPECT_DOUBLE_EQ(back.train_snr_db(), 7.5);
}

TEST(Hamming, CorrectsEverySingleBitError) {
  for (int v = 0; v < 16; ++v) {
    const std::array<std::uint8_t, 4> data{static_cast<std::uint8_t>(v >> 3 & 1), static_cast<std::uint8_t>(v >> 2 & 1),
                                           static_cast<std::uint8_t>(v >> 1 & 1), static_cast<std::uint8_t>(v & 1)};
    const auto code = hamming74_encode(data);
    EXPECT_EQ(hamming74_decode(code), data);
    for (int flip = 0; flip < 7; ++flip) {
      auto bad = code;
      bad[static_cast<std::size_t>(flip)] ^= 1U;
      EXPECT_EQ(hamming74_decode(bad), data);
    }
  }
}

TEST(Qpsk, GrayMappingAndUnitEnergy) {
  const Bits bits{0, 0, 0, 1, 1, 1, 1, 0};
  const auto s = qpsk_modulate(bits);
  for (Eigen::Index i = 0; i < s.size(); ++i) EXPECT_NEAR(std::norm(s(i)), 1.0, 1e-15);
  EXPECT_EQ(qpsk_demodulate(s), bits);
  EXPECT_THROW(qpsk_modulate(Bits{1}), std::invalid_argument);
}

TEST(Digital, IdentityAtHighSnrForEveryLabel) {
  std::vector<LabelIndex> labels;
  for (int j = 0; j < 80; ++j) labels.push_back(j);
  Rng rng(18);
  EXPECT_EQ(digital_roundtrip(labels, 80, {200.0}, rng), labels);
  for (int j = 0; j < 80; ++j) EXPECT_EQ(digital_decode_bits(digital_encode_label(j)), j);
}

TEST(Digital, OutputAlwaysAValidLabel) {
  std::vector<LabelIndex> labels(2000, 79);
  Rng rng(19);
  for (LabelIndex l : digital_roundtrip(labels, 80, {-10.0}, rng)) {
    EXPECT_GE(l, 0);
    EXPECT_LT(l, 80);
  }
  EXPECT_THROW(digital_roundtrip(labels, 200, {0.0}, rng), std::invalid_argument);
}

TEST(Digital, UncodedBerMatchesTheory) {
  const int bits = 1000000;
  const double p = oracle::gaussian_tail(std::sqrt(2.0 * std::pow(10.0, 0.4)));
  EXPECT_NEAR(p, 0.0125, 2e-4);
  EXPECT_NEAR(uncoded_ber(4.0, bits, 20), p, 3.0 * oracle::binomial_sigma(p, bits));
}

TEST(Digital, HammingBeatsUncodedAtEqualEbN0) {
  // 7 information bits per word: coded uses 7 symbols, uncoded 4 (one pad bit)
  const double ebn0 = 4.0;
  const ChannelConfig coded_cfg{ebn0 + 10.0 * std::log10(7.0 / 7.0)};
  const ChannelConfig uncoded_cfg{ebn0 + 10.0 * std::log10(7.0 / 4.0)};
  const int words = 100000;
  int coded_errors = 0, uncoded_errors = 0;
  for (int w = 0; w < words; ++w) {
    const LabelIndex label = w % 80;
    Rng rc = Rng::derive(21, "word", static_cast<std::uint64_t>(w));
    Rng ru = Rng::derive(21, "word", static_cast<std::uint64_t>(w));
    coded_errors += digital_roundtrip({label}, 128, coded_cfg, rc)[0] != label;
    Bits raw(8, 0);
    for (int b = 0; b < 7; ++b) raw[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(label >> (6 - b) & 1);
    const Bits rx = qpsk_demodulate(awgn_apply(qpsk_modulate(raw), uncoded_cfg, ru).col(0));
    int value = 0;
    for (int b = 0; b < 7; ++b) value = value << 1 | rx[static_cast<std::size_t>(b)];
    uncoded_errors += value != label;
  }
  EXPECT_LT(coded_errors, uncoded_errors);
}

TEST(QFunction, Examples) {
  EXPECT_DOUBLE_EQ(q_function(0.0), 0.5);
  EXPECT_NEAR(q_function(2.2414), 0.01250, 1e-4);
  for (double x : {0.1, 0.7, 1.3, 2.2414, 3.5, 5.0}) {
    EXPECT_NEAR(q_function(-x) + q_function(x), 1.0, 1e-12);
    EXPECT_NEAR(q_function(x), oracle::gaussian_tail(x), 1e-10);
  }
}
