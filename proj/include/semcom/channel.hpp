#ifndef SEMCOM_CHANNEL_HPP
#define SEMCOM_CHANNEL_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "semcom/rng.hpp"
#include "semcom/taxonomy.hpp"

namespace semcom {

/// n x d complex channel symbols, one row per transmitted token.
using ComplexSignal = Eigen::MatrixXcd;

/// Raised when an iterative computation produces a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ChannelConfig {
  double snr_db = 10.0;
};

/// Noise variance per complex sample for a unit-power signal.
inline double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

/// y = x + n with n ~ CN(0, 10^(-snr/10)). Entries are visited row by row.
ComplexSignal awgn_apply(const ComplexSignal& x, const ChannelConfig& cfg, Rng& rng);

/// Mean |x|^2 over all entries.
double average_power(const ComplexSignal& x);

/// Rescales so the mean |c|^2 over all entries is 1.
void project_unit_power(Eigen::MatrixXcd& codewords);

/// Label-to-codeword map with nearest-codeword decoding.
class CodebookCodec {
 public:
  CodebookCodec() = default;
  CodebookCodec(Eigen::MatrixXcd codewords, double train_snr_db, bool trained = true);

  bool trained() const { return trained_; }
  double train_snr_db() const { return train_snr_db_; }
  int num_labels() const { return static_cast<int>(codewords_.rows()); }
  int dimension() const { return static_cast<int>(codewords_.cols()); }
  const Eigen::MatrixXcd& codewords() const { return codewords_; }

  ComplexSignal encode(const std::vector<LabelIndex>& labels) const;
  /// Per row, the label whose codeword is closest in Euclidean distance (lowest index on ties).
  std::vector<LabelIndex> decode(const ComplexSignal& y) const;

 private:
  void require_ready() const;

  Eigen::MatrixXcd codewords_;
  double train_snr_db_ = 0.0;
  bool trained_ = false;
};

struct CodebookTrainOptions {
  int dimension = 50;
  double train_snr_db = 10.0;
  int epochs = 200;
  double learning_rate = 0.05;
  int batch = 512;
  /// Std-dev of each real component of the initial codewords.
  double init_scale = 0.1;
};

struct CodebookTrainResult {
  CodebookCodec codec;
  /// Mean batch cross-entropy of each epoch, measured before that epoch's update.
  std::vector<double> loss_history;
};

/// Mean cross-entropy of softmax(-|y - c_m|^2) for y = c_label + noise.
///
/// `noise` has one row per sample. When `gradient` is non-null it receives
/// dL/dRe(c) + i dL/dIm(c), the same shape as `codewords`.
double codebook_batch_loss(const Eigen::MatrixXcd& codewords, const std::vector<LabelIndex>& labels,
                           const Eigen::MatrixXcd& noise, Eigen::MatrixXcd* gradient = nullptr);

/// Gradient descent on the codewords with AWGN in the loop. Each epoch is one
/// batch of uniformly drawn labels; the codebook is projected to unit average
/// power after every step. Throws NumericalError on a non-finite loss.
CodebookTrainResult codebook_train(int num_labels, const CodebookTrainOptions& options, std::uint64_t seed);

nlohmann::json to_json(const CodebookCodec& codec);
CodebookCodec codec_from_json(const nlohmann::json& j);

// ---- digital baseline: 7-bit labels, Hamming(7,4), Gray QPSK, hard decisions ----

using Bits = std::vector<std::uint8_t>;

/// Codeword layout p1 p2 d1 p3 d2 d3 d4 (parity at positions 1, 2, 4).
std::array<std::uint8_t, 7> hamming74_encode(const std::array<std::uint8_t, 4>& data);
/// Corrects any single bit error.
std::array<std::uint8_t, 4> hamming74_decode(std::array<std::uint8_t, 7> code);

/// Gray QPSK, unit symbol energy: (b0, b1) -> ((1 - 2 b0) + i (1 - 2 b1)) / sqrt(2).
Eigen::VectorXcd qpsk_modulate(const Bits& bits);
Bits qpsk_demodulate(const Eigen::VectorXcd& symbols);

inline constexpr int kDigitalLabelBits = 7;

/// Label -> 7 bits (MSB first) padded to 8 -> two Hamming(7,4) blocks -> 14 bits.
Bits digital_encode_label(LabelIndex label);
/// Inverse of digital_encode_label; returns the raw 7-bit value (0..127).
int digital_decode_bits(const Bits& coded);

/// Full digital chain over AWGN at the given per-symbol SNR. Decoded values
/// outside the label range are clamped to the last label.
std::vector<LabelIndex> digital_roundtrip(const std::vector<LabelIndex>& labels, int num_labels,
                                          const ChannelConfig& cfg, Rng& rng);

/// Gaussian tail probability Q(x) = P(Z > x).
double q_function(double x);

}  // namespace semcom

#endif  // SEMCOM_CHANNEL_HPP
