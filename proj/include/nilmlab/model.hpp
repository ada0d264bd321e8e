#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "nilmlab/tensor.hpp"

namespace nilm {

struct LossWeights {
    double w = 0.5;      // classification weight in [0, 1]
    double k = 0.0066;   // regression loss normalizer
};

// Mean squared error over all entries (normalized units).
double loss_regression(const Tensor& pred_power, const Tensor& target_power);
// Binary cross entropy of the ON probability, clipped to [1e-7, 1 - 1e-7].
double loss_classification(const Tensor& pred_prob_on, const Tensor& target_status);
// w * class + (1 - w) * reg / k.
double loss_total(double class_loss, double reg_loss, const LossWeights& weights);

enum class Mode { Train, Eval };

struct ParamTensor {
    std::string name;
    std::vector<int> shape;
    std::vector<double> value;
    std::vector<double> grad;
    std::vector<double> adam_m;
    std::vector<double> adam_v;

    std::size_t size() const { return value.size(); }
};

// Running statistics and per-call cache of one batch-norm layer.
struct BatchNormState {
    std::vector<double> running_mean;
    std::vector<double> running_var;
};

struct BNCache {
    Tensor xhat;
    std::vector<double> inv_std;
    bool train_mode = false;
};

enum class LayerKind {
    Conv,
    ReLU,
    MaxPool,
    AvgPool,
    BatchNorm,
    Upsample,
    Concat,
    PointwiseConv,
    TransposedConv,
    Softmax,
};

std::string to_string(LayerKind kind);

// One row of the flattened architecture listing.
struct LayerSpec {
    std::string name;
    LayerKind kind = LayerKind::Conv;
    int kernel = 0;
    int stride = 0;
    int in_channels = 0;
    int out_channels = 0;
    int out_length = 0;
};

struct ArchDescription {
    std::array<int, 4> encoder_channels{};
    std::array<int, 4> encoder_lengths{};  // conv output lengths per block
    std::array<int, 4> pool_kernels{5, 10, 20, 30};
    std::array<int, 4> pooled_lengths{};
    int branch_channels = 0;
    int concat_channels = 0;
    int decoder_channels = 0;
    int input_length = 0;
    int output_length = 0;

    // Layer-by-layer listing in forward order (branches inline).
    std::vector<LayerSpec> layers;
};

struct ConvModelConfig {
    double width_scale = 0.25;
    std::uint64_t init_seed = 1;
};

// Sequence-to-sequence disaggregator: a four-block strided-conv encoder, a
// multi-resolution average-pooling branch merged by concatenation, a
// transposed-conv decoder, and two pointwise heads (ON/OFF status via
// softmax, power via a linear map). Input length 510, output length 480.
class ConvModel {
public:
    struct Trace;  // forward intermediates retained for backward

    static ConvModel build(const ConvModelConfig& config);

    const ArchDescription& architecture() const { return arch_; }
    const ConvModelConfig& config() const { return config_; }

    // Runs the network on (B, 1, 510) input. Train mode normalizes with
    // batch statistics (and updates the running ones when update_running);
    // Eval mode uses the running statistics. Results live in the trace.
    void forward(const Tensor& input, Mode mode, Trace& trace, bool update_running = false) const;

    // Single-window convenience wrapper.
    struct Output {
        Tensor status_probs;  // (1, 2, 480), channel 1 = P(ON)
        Tensor power;         // (1, 1, 480)
    };
    Output forward(const Tensor& input, Mode mode);

    struct Losses {
        double total = 0.0;
        double classification = 0.0;
        double regression = 0.0;
    };

    // Seeds the weighted loss gradient at both heads and backpropagates,
    // accumulating into every ParamTensor::grad.
    Losses backward(Trace& trace, const Tensor& status_target, const Tensor& power_target,
                    const LossWeights& weights);

    void zero_grad();

    // Bias-corrected Adam update on every learnable tensor.
    void adam_step(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    std::vector<ParamTensor*> parameters();
    std::vector<const ParamTensor*> parameters() const;
    std::uint64_t step_count() const { return step_; }

    // Full-state snapshot (weights, Adam moments, running statistics).
    struct Snapshot;
    Snapshot snapshot() const;
    void restore(const Snapshot& snap);

    void save(const std::filesystem::path& path) const;
    static ConvModel load(const std::filesystem::path& path);

    Trace* make_trace() const;  // heap so callers can reuse across steps

private:
    ConvModel() = default;

    struct ConvLayer {
        ParamTensor weight;  // (out, in, kernel)
        ParamTensor bias;    // (out)
        int in_channels = 0, out_channels = 0, kernel = 0;
    };
    struct BNLayer {
        ParamTensor gamma, beta;
        mutable BatchNormState state;  // running stats update during Train forward
        int channels = 0;
    };

    ConvModelConfig config_;
    ArchDescription arch_;

    std::array<ConvLayer, 4> encoder_conv_;
    std::array<BNLayer, 4> encoder_bn_;
    std::array<ConvLayer, 4> branch_conv_;  // pointwise, one per pooling scale
    std::array<BNLayer, 4> branch_bn_;
    ConvLayer decoder_conv_;  // transposed, kernel 8 stride 8
    BNLayer decoder_bn_;
    ConvLayer status_head_;  // pointwise to 2 channels
    ConvLayer power_head_;   // pointwise to 1 channel

    std::uint64_t step_ = 0;

    void register_params(std::vector<ParamTensor*>& out) const;
    friend struct ConvModelIO;
};

struct ConvModel::Snapshot {
    std::vector<std::vector<double>> values;
    std::vector<std::vector<double>> adam_m;
    std::vector<std::vector<double>> adam_v;
    std::vector<std::vector<double>> running;  // mean/var pairs in layer order
    std::uint64_t step = 0;
};

// Forward intermediates retained for backward, plus reusable gradient
// scratch. Callers normally touch only status_probs and power.
struct ConvModel::Trace {
    Mode mode = Mode::Train;
    Tensor input;

    Tensor enc_conv[4];
    Tensor enc_bn[4];
    Tensor enc_relu[4];
    Tensor enc_pool[3];
    BNCache enc_bn_cache[4];
    std::vector<std::uint8_t> pool_argmax[3];

    Tensor branch_avg[4];
    Tensor branch_conv[4];
    Tensor branch_bn[4];
    Tensor branch_relu[4];
    Tensor branch_up[4];
    BNCache branch_bn_cache[4];

    Tensor concat;
    Tensor dec_conv;
    Tensor dec_bn;
    BNCache dec_bn_cache;

    Tensor status_logits;
    Tensor status_probs;
    Tensor power;

    Tensor g_status_logits, g_power, g_dec_bn, g_dec_conv, g_concat;
    Tensor g_branch_up[4], g_branch_relu[4], g_branch_bn[4], g_branch_conv[4];
    Tensor g_enc4_out;
    Tensor g_enc_relu[4], g_enc_bn[4], g_enc_conv[4], g_enc_pool[3];
    Tensor g_head_in_a, g_head_in_b;
    Tensor g_input;
};

// One supervised window with both targets; inputs and power targets are in
// normalized units.
struct Sample {
    std::vector<double> input;          // 510
    std::vector<double> power_target;   // 480
    std::vector<double> status_target;  // 480, binary
};

struct TrainOptions {
    int epochs = 50;
    int batch = 32;
    double lr = 1e-4;
    LossWeights weights;
    std::uint64_t seed = 1;
    double denorm_scale_watts = 2000.0;  // for the history's val MAE column
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_f1 = 0.0;
    double val_mae_watts = 0.0;
};

struct TrainResult {
    std::vector<EpochStats> history;
    int best_epoch = 0;  // 0 when the initial parameters were never beaten
    double best_val_loss = 0.0;
};

// Seeded-shuffle minibatch training; the model is left at the snapshot with
// the minimum validation loss.
TrainResult train(ConvModel& model, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set, const TrainOptions& options);

// Eval-mode predictions for a whole dataset, batched internally.
struct Predictions {
    std::vector<std::vector<double>> prob_on;     // per window, length 480
    std::vector<std::vector<double>> power_norm;  // per window, length 480
};
Predictions predict(const ConvModel& model, const std::vector<Sample>& samples,
                    int batch_size = 32);

}  // namespace nilm
