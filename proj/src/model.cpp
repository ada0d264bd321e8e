#include "nilmlab/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "nilmlab/errors.hpp"
#include "nilmlab/metrics.hpp"
#include "nilmlab/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace nilm {

namespace {

constexpr double kBnEps = 1e-5;
constexpr double kBnMomentum = 0.1;
constexpr double kBceClip = 1e-7;

void check_finite(const Tensor& t, const char* stage) {
    for (const double v : t.data) {
        if (!std::isfinite(v)) {
            throw NumericalError(std::string("non-finite activation after stage '") + stage + "'");
        }
    }
}

// Four-lane dot product. The fixed accumulator order keeps results
// deterministic while letting the compiler vectorize the reduction.
double dot4(const double* a, const double* b, int n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int t = 0;
    for (; t + 4 <= n; t += 4) {
        s0 += a[t] * b[t];
        s1 += a[t + 1] * b[t + 1];
        s2 += a[t + 2] * b[t + 2];
        s3 += a[t + 3] * b[t + 3];
    }
    double tail = 0.0;
    for (; t < n; ++t) tail += a[t] * b[t];
    return ((s0 + s1) + (s2 + s3)) + tail;
}

double sum4(const double* a, int n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int t = 0;
    for (; t + 4 <= n; t += 4) {
        s0 += a[t];
        s1 += a[t + 1];
        s2 += a[t + 2];
        s3 += a[t + 3];
    }
    double tail = 0.0;
    for (; t < n; ++t) tail += a[t];
    return ((s0 + s1) + (s2 + s3)) + tail;
}

// ---- layer primitives -------------------------------------------------

// valid convolution, stride 1
void conv_forward(const Tensor& in, const ParamTensor& weight, const ParamTensor& bias, int kernel,
                  Tensor& out) {
    const int co = static_cast<int>(bias.size());
    const int ci = in.channels;
    const int lo = in.length - kernel + 1;
    out.resize(in.batch, co, lo);
    for (int b = 0; b < in.batch; ++b) {
        for (int o = 0; o < co; ++o) {
            double* orow = out.row(b, o);
            const double bo = bias.value[o];
            for (int t = 0; t < lo; ++t) orow[t] = bo;
            for (int i = 0; i < ci; ++i) {
                const double* irow = in.row(b, i);
                const double* wrow = weight.value.data() + (static_cast<std::size_t>(o) * ci + i) * kernel;
                for (int k = 0; k < kernel; ++k) {
                    const double wk = wrow[k];
                    const double* shifted = irow + k;
                    for (int t = 0; t < lo; ++t) orow[t] += wk * shifted[t];
                }
            }
        }
    }
}

void conv_backward(const Tensor& in, ParamTensor& weight, ParamTensor& bias, int kernel,
                   const Tensor& gout, Tensor& gin) {
    const int co = static_cast<int>(bias.size());
    const int ci = in.channels;
    const int lo = gout.length;
    gin.resize(in.batch, ci, in.length);
    for (int b = 0; b < in.batch; ++b) {
        for (int o = 0; o < co; ++o) {
            const double* grow = gout.row(b, o);
            bias.grad[o] += sum4(grow, lo);
            for (int i = 0; i < ci; ++i) {
                const double* irow = in.row(b, i);
                double* ginrow = gin.row(b, i);
                const std::size_t wbase = (static_cast<std::size_t>(o) * ci + i) * kernel;
                for (int k = 0; k < kernel; ++k) {
                    weight.grad[wbase + k] += dot4(grow, irow + k, lo);
                    const double wk = weight.value[wbase + k];
                    double* gshift = ginrow + k;
                    for (int t = 0; t < lo; ++t) gshift[t] += wk * grow[t];
                }
            }
        }
    }
}

// transposed convolution with kernel == stride (non-overlapping blocks)
void tconv_forward(const Tensor& in, const ParamTensor& weight, const ParamTensor& bias, int kernel,
                   Tensor& out) {
    const int co = static_cast<int>(bias.size());
    const int ci = in.channels;
    const int lo = in.length * kernel;
    out.resize(in.batch, co, lo);
    for (int b = 0; b < in.batch; ++b) {
        for (int o = 0; o < co; ++o) {
            double* orow = out.row(b, o);
            const double bo = bias.value[o];
            for (int t = 0; t < lo; ++t) orow[t] = bo;
            for (int i = 0; i < ci; ++i) {
                const double* irow = in.row(b, i);
                const double* wrow = weight.value.data() + (static_cast<std::size_t>(o) * ci + i) * kernel;
                for (int t = 0; t < in.length; ++t) {
                    const double x = irow[t];
                    double* block = orow + static_cast<std::size_t>(t) * kernel;
                    for (int k = 0; k < kernel; ++k) block[k] += wrow[k] * x;
                }
            }
        }
    }
}

void tconv_backward(const Tensor& in, ParamTensor& weight, ParamTensor& bias, int kernel,
                    const Tensor& gout, Tensor& gin) {
    if (kernel > 8) throw NumericalError("tconv backward supports kernels up to 8");
    const int co = static_cast<int>(bias.size());
    const int ci = in.channels;
    gin.resize(in.batch, ci, in.length);
    for (int b = 0; b < in.batch; ++b) {
        for (int o = 0; o < co; ++o) {
            const double* grow = gout.row(b, o);
            bias.grad[o] += sum4(grow, gout.length);
            for (int i = 0; i < ci; ++i) {
                const double* irow = in.row(b, i);
                double* ginrow = gin.row(b, i);
                const std::size_t wbase = (static_cast<std::size_t>(o) * ci + i) * kernel;
                const double* wrow = weight.value.data() + wbase;
                double wacc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
                for (int t = 0; t < in.length; ++t) {
                    const double* block = grow + static_cast<std::size_t>(t) * kernel;
                    const double x = irow[t];
                    double acc = 0.0;
                    for (int k = 0; k < kernel; ++k) {
                        wacc[k] += block[k] * x;
                        acc += wrow[k] * block[k];
                    }
                    ginrow[t] += acc;
                }
                for (int k = 0; k < kernel; ++k) weight.grad[wbase + k] += wacc[k];
            }
        }
    }
}

void relu_forward(const Tensor& in, Tensor& out) {
    out.resize(in.batch, in.channels, in.length);
    for (std::size_t i = 0; i < in.data.size(); ++i) out.data[i] = in.data[i] > 0.0 ? in.data[i] : 0.0;
}

void relu_backward(const Tensor& out, const Tensor& gout, Tensor& gin) {
    gin.resize(out.batch, out.channels, out.length);
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        gin.data[i] = out.data[i] > 0.0 ? gout.data[i] : 0.0;
    }
}

void maxpool2_forward(const Tensor& in, Tensor& out, std::vector<std::uint8_t>& argmax) {
    const int lo = in.length / 2;
    out.resize(in.batch, in.channels, lo);
    argmax.assign(out.size(), 0);
    std::size_t idx = 0;
    for (int b = 0; b < in.batch; ++b) {
        for (int c = 0; c < in.channels; ++c) {
            const double* irow = in.row(b, c);
            double* orow = out.row(b, c);
            for (int t = 0; t < lo; ++t, ++idx) {
                const double a = irow[2 * t], z = irow[2 * t + 1];
                // ties keep the earlier sample
                if (z > a) {
                    orow[t] = z;
                    argmax[idx] = 1;
                } else {
                    orow[t] = a;
                }
            }
        }
    }
}

void maxpool2_backward(const Tensor& in, const Tensor& gout, const std::vector<std::uint8_t>& argmax,
                       Tensor& gin) {
    gin.resize(in.batch, in.channels, in.length);
    std::size_t idx = 0;
    for (int b = 0; b < in.batch; ++b) {
        for (int c = 0; c < in.channels; ++c) {
            const double* grow = gout.row(b, c);
            double* ginrow = gin.row(b, c);
            for (int t = 0; t < gout.length; ++t, ++idx) {
                ginrow[2 * t + argmax[idx]] = grow[t];
            }
        }
    }
}

void avgpool_forward(const Tensor& in, int kernel, Tensor& out) {
    const int lo = in.length / kernel;
    out.resize(in.batch, in.channels, lo);
    const double inv = 1.0 / kernel;
    for (int b = 0; b < in.batch; ++b) {
        for (int c = 0; c < in.channels; ++c) {
            const double* irow = in.row(b, c);
            double* orow = out.row(b, c);
            for (int t = 0; t < lo; ++t) {
                double sum = 0.0;
                for (int k = 0; k < kernel; ++k) sum += irow[t * kernel + k];
                orow[t] = sum * inv;
            }
        }
    }
}

// accumulates into gin (several branches feed the same encoder output)
void avgpool_backward_accum(int kernel, const Tensor& gout, Tensor& gin) {
    const double inv = 1.0 / kernel;
    for (int b = 0; b < gout.batch; ++b) {
        for (int c = 0; c < gout.channels; ++c) {
            const double* grow = gout.row(b, c);
            double* ginrow = gin.row(b, c);
            for (int t = 0; t < gout.length; ++t) {
                const double g = grow[t] * inv;
                for (int k = 0; k < kernel; ++k) ginrow[t * kernel + k] += g;
            }
        }
    }
}

void upsample_forward(const Tensor& in, int factor, Tensor& out) {
    out.resize(in.batch, in.channels, in.length * factor);
    for (int b = 0; b < in.batch; ++b) {
        for (int c = 0; c < in.channels; ++c) {
            const double* irow = in.row(b, c);
            double* orow = out.row(b, c);
            for (int t = 0; t < in.length; ++t) {
                const double x = irow[t];
                for (int k = 0; k < factor; ++k) orow[t * factor + k] = x;
            }
        }
    }
}

void upsample_backward(const Tensor& in, int factor, const Tensor& gout, Tensor& gin) {
    gin.resize(in.batch, in.channels, in.length);
    for (int b = 0; b < in.batch; ++b) {
        for (int c = 0; c < in.channels; ++c) {
            const double* grow = gout.row(b, c);
            double* ginrow = gin.row(b, c);
            for (int t = 0; t < in.length; ++t) {
                double sum = 0.0;
                for (int k = 0; k < factor; ++k) sum += grow[t * factor + k];
                ginrow[t] = sum;
            }
        }
    }
}

void bn_forward(const Tensor& in, const ParamTensor& gamma, const ParamTensor& beta,
                BatchNormState& state, Mode mode, bool update_running, Tensor& out, BNCache& cache) {
    const int C = in.channels;
    out.resize(in.batch, C, in.length);
    cache.train_mode = mode == Mode::Train;
    if (mode == Mode::Train) {
        cache.xhat.resize(in.batch, C, in.length);
        cache.inv_std.assign(C, 0.0);
        const double n = static_cast<double>(in.batch) * in.length;
        for (int c = 0; c < C; ++c) {
            double sum = 0.0;
            for (int b = 0; b < in.batch; ++b) sum += sum4(in.row(b, c), in.length);
            const double mean = sum / n;
            double sq = 0.0;
            for (int b = 0; b < in.batch; ++b) {
                const double* irow = in.row(b, c);
                double s0 = 0.0, s1 = 0.0;
                int t = 0;
                for (; t + 2 <= in.length; t += 2) {
                    const double d0 = irow[t] - mean;
                    const double d1 = irow[t + 1] - mean;
                    s0 += d0 * d0;
                    s1 += d1 * d1;
                }
                if (t < in.length) {
                    const double d = irow[t] - mean;
                    s0 += d * d;
                }
                sq += s0 + s1;
            }
            const double var = sq / n;
            const double inv_std = 1.0 / std::sqrt(var + kBnEps);
            cache.inv_std[c] = inv_std;
            const double g = gamma.value[c], be = beta.value[c];
            for (int b = 0; b < in.batch; ++b) {
                const double* irow = in.row(b, c);
                double* xrow = cache.xhat.row(b, c);
                double* orow = out.row(b, c);
                for (int t = 0; t < in.length; ++t) {
                    const double xh = (irow[t] - mean) * inv_std;
                    xrow[t] = xh;
                    orow[t] = g * xh + be;
                }
            }
            if (update_running) {
                state.running_mean[c] = (1.0 - kBnMomentum) * state.running_mean[c] + kBnMomentum * mean;
                state.running_var[c] = (1.0 - kBnMomentum) * state.running_var[c] + kBnMomentum * var;
            }
        }
    } else {
        for (int c = 0; c < C; ++c) {
            const double inv_std = 1.0 / std::sqrt(state.running_var[c] + kBnEps);
            const double mean = state.running_mean[c];
            const double g = gamma.value[c], be = beta.value[c];
            for (int b = 0; b < in.batch; ++b) {
                const double* irow = in.row(b, c);
                double* orow = out.row(b, c);
                for (int t = 0; t < in.length; ++t) orow[t] = g * (irow[t] - mean) * inv_std + be;
            }
        }
    }
}

void bn_backward(const BNCache& cache, ParamTensor& gamma, ParamTensor& beta, const Tensor& gout,
                 Tensor& gin) {
    if (!cache.train_mode) {
        throw NumericalError("batch-norm backward requires a Train-mode forward trace");
    }
    const Tensor& xhat = cache.xhat;
    const int C = xhat.channels;
    gin.resize(xhat.batch, C, xhat.length);
    const double n = static_cast<double>(xhat.batch) * xhat.length;
    for (int c = 0; c < C; ++c) {
        double sum_g = 0.0, sum_gx = 0.0;
        for (int b = 0; b < xhat.batch; ++b) {
            sum_g += sum4(gout.row(b, c), xhat.length);
            sum_gx += dot4(gout.row(b, c), xhat.row(b, c), xhat.length);
        }
        gamma.grad[c] += sum_gx;
        beta.grad[c] += sum_g;
        const double scale = gamma.value[c] * cache.inv_std[c];
        const double mean_g = sum_g / n;
        const double mean_gx = sum_gx / n;
        for (int b = 0; b < xhat.batch; ++b) {
            const double* grow = gout.row(b, c);
            const double* xrow = xhat.row(b, c);
            double* ginrow = gin.row(b, c);
            for (int t = 0; t < xhat.length; ++t) {
                ginrow[t] = scale * (grow[t] - mean_g - xrow[t] * mean_gx);
            }
        }
    }
}

void softmax2_forward(const Tensor& logits, Tensor& probs) {
    probs.resize(logits.batch, 2, logits.length);
    for (int b = 0; b < logits.batch; ++b) {
        const double* z0 = logits.row(b, 0);
        const double* z1 = logits.row(b, 1);
        double* p0 = probs.row(b, 0);
        double* p1 = probs.row(b, 1);
        for (int t = 0; t < logits.length; ++t) {
            const double m = std::max(z0[t], z1[t]);
            const double e0 = std::exp(z0[t] - m);
            const double e1 = std::exp(z1[t] - m);
            const double inv = 1.0 / (e0 + e1);
            p0[t] = e0 * inv;
            p1[t] = e1 * inv;
        }
    }
}

}  // namespace

// ---- losses ------------------------------------------------------------

double loss_regression(const Tensor& pred_power, const Tensor& target_power) {
    if (pred_power.size() != target_power.size() || pred_power.size() == 0) {
        throw InputError("loss_regression: shape mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < pred_power.data.size(); ++i) {
        const double d = pred_power.data[i] - target_power.data[i];
        sum += d * d;
    }
    return sum / static_cast<double>(pred_power.data.size());
}

double loss_classification(const Tensor& pred_prob_on, const Tensor& target_status) {
    if (pred_prob_on.size() != target_status.size() || pred_prob_on.size() == 0) {
        throw InputError("loss_classification: shape mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < pred_prob_on.data.size(); ++i) {
        const double p = std::clamp(pred_prob_on.data[i], kBceClip, 1.0 - kBceClip);
        const double y = target_status.data[i];
        sum += y * std::log(p) + (1.0 - y) * std::log(1.0 - p);
    }
    return -sum / static_cast<double>(pred_prob_on.data.size());
}

double loss_total(double class_loss, double reg_loss, const LossWeights& weights) {
    if (weights.w < 0.0 || weights.w > 1.0) throw ConfigError("loss weight w must be in [0, 1]");
    if (weights.k <= 0.0) throw ConfigError("loss normalizer k must be positive");
    return weights.w * class_loss + (1.0 - weights.w) * reg_loss / weights.k;
}

// ---- trace ----

ConvModel::Trace* ConvModel::make_trace() const { return new Trace(); }

// ---- construction -------------------------------------------------------

namespace {

int scaled_channels(double width_scale, int base) {
    const long long c = std::llround(width_scale * base);
    if (c < 1) {
        throw ConfigError("width_scale " + std::to_string(width_scale) +
                          " collapses a " + std::to_string(base) + "-channel layer to zero");
    }
    return static_cast<int>(c);
}

void init_param(ParamTensor& p, const std::string& name, std::vector<int> shape) {
    p.name = name;
    p.shape = std::move(shape);
    std::size_t n = 1;
    for (const int d : p.shape) n *= static_cast<std::size_t>(d);
    p.value.assign(n, 0.0);
    p.grad.assign(n, 0.0);
    p.adam_m.assign(n, 0.0);
    p.adam_v.assign(n, 0.0);
}

void fill_uniform(ParamTensor& p, double bound, Rng& rng) {
    for (auto& v : p.value) v = rng.uniform(-bound, bound);
}

}  // namespace

std::string to_string(LayerKind kind) {
    switch (kind) {
        case LayerKind::Conv: return "conv";
        case LayerKind::ReLU: return "relu";
        case LayerKind::MaxPool: return "max_pool";
        case LayerKind::AvgPool: return "avg_pool";
        case LayerKind::BatchNorm: return "batch_norm";
        case LayerKind::Upsample: return "upsample";
        case LayerKind::Concat: return "concat";
        case LayerKind::PointwiseConv: return "pointwise_conv";
        case LayerKind::TransposedConv: return "transposed_conv";
        case LayerKind::Softmax: return "softmax";
    }
    return "conv";
}

ConvModel ConvModel::build(const ConvModelConfig& config) {
    ConvModel model;
    model.config_ = config;
    ArchDescription& arch = model.arch_;
    arch.input_length = 510;
    arch.output_length = 480;

    const int base[4] = {32, 64, 128, 256};
    for (int i = 0; i < 4; ++i) arch.encoder_channels[i] = scaled_channels(config.width_scale, base[i]);
    arch.branch_channels = scaled_channels(config.width_scale, 64);
    arch.decoder_channels = scaled_channels(config.width_scale, 32);

    int length = arch.input_length;
    for (int i = 0; i < 4; ++i) {
        length -= 2;  // conv kernel 3, no padding
        arch.encoder_lengths[i] = length;
        if (i < 3) length /= 2;  // max pool 2/2
    }
    for (int i = 0; i < 4; ++i) arch.pooled_lengths[i] = length / arch.pool_kernels[i];
    arch.concat_channels = arch.encoder_channels[3] + 4 * arch.branch_channels;

    auto layer = [&](const std::string& name, LayerKind kind, int kernel, int stride, int in_ch,
                     int out_ch, int out_len) {
        arch.layers.push_back({name, kind, kernel, stride, in_ch, out_ch, out_len});
    };
    {
        int in_ch = 1, len = arch.input_length;
        for (int i = 0; i < 4; ++i) {
            const std::string stem = "enc" + std::to_string(i + 1);
            const int out_ch = arch.encoder_channels[i];
            len -= 2;
            layer(stem + ".conv", LayerKind::Conv, 3, 1, in_ch, out_ch, len);
            layer(stem + ".bn", LayerKind::BatchNorm, 0, 0, out_ch, out_ch, len);
            layer(stem + ".relu", LayerKind::ReLU, 0, 0, out_ch, out_ch, len);
            if (i < 3) {
                len /= 2;
                layer(stem + ".pool", LayerKind::MaxPool, 2, 2, out_ch, out_ch, len);
            }
            in_ch = out_ch;
        }
        for (int i = 0; i < 4; ++i) {
            const int k = arch.pool_kernels[i];
            const std::string stem = "tp" + std::to_string(k);
            const int pooled = len / k;
            layer(stem + ".avg", LayerKind::AvgPool, k, k, in_ch, in_ch, pooled);
            layer(stem + ".conv", LayerKind::PointwiseConv, 1, 1, in_ch, arch.branch_channels,
                  pooled);
            layer(stem + ".bn", LayerKind::BatchNorm, 0, 0, arch.branch_channels,
                  arch.branch_channels, pooled);
            layer(stem + ".relu", LayerKind::ReLU, 0, 0, arch.branch_channels,
                  arch.branch_channels, pooled);
            layer(stem + ".up", LayerKind::Upsample, k, k, arch.branch_channels,
                  arch.branch_channels, len);
        }
        layer("concat", LayerKind::Concat, 0, 0, in_ch, arch.concat_channels, len);
        layer("decoder.tconv", LayerKind::TransposedConv, 8, 8, arch.concat_channels,
              arch.decoder_channels, arch.output_length);
        layer("decoder.bn", LayerKind::BatchNorm, 0, 0, arch.decoder_channels,
              arch.decoder_channels, arch.output_length);
        layer("status_head", LayerKind::PointwiseConv, 1, 1, arch.decoder_channels, 2,
              arch.output_length);
        layer("status_softmax", LayerKind::Softmax, 0, 0, 2, 2, arch.output_length);
        layer("power_head", LayerKind::PointwiseConv, 1, 1, arch.decoder_channels, 1,
              arch.output_length);
    }

    Rng rng(config.init_seed);
    auto build_conv = [&](ConvLayer& layer, const std::string& name, int in_ch, int out_ch,
                          int kernel) {
        layer.in_channels = in_ch;
        layer.out_channels = out_ch;
        layer.kernel = kernel;
        init_param(layer.weight, name + ".weight", {out_ch, in_ch, kernel});
        init_param(layer.bias, name + ".bias", {out_ch});
        const double bound = 1.0 / std::sqrt(static_cast<double>(in_ch) * kernel);
        fill_uniform(layer.weight, bound, rng);
        fill_uniform(layer.bias, bound, rng);
    };
    auto build_bn = [&](BNLayer& layer, const std::string& name, int channels) {
        layer.channels = channels;
        init_param(layer.gamma, name + ".gamma", {channels});
        init_param(layer.beta, name + ".beta", {channels});
        std::fill(layer.gamma.value.begin(), layer.gamma.value.end(), 1.0);
        layer.state.running_mean.assign(channels, 0.0);
        layer.state.running_var.assign(channels, 1.0);
    };

    int in_ch = 1;
    for (int i = 0; i < 4; ++i) {
        const std::string stem = "enc" + std::to_string(i + 1);
        build_conv(model.encoder_conv_[i], stem + ".conv", in_ch, arch.encoder_channels[i], 3);
        build_bn(model.encoder_bn_[i], stem + ".bn", arch.encoder_channels[i]);
        in_ch = arch.encoder_channels[i];
    }
    for (int i = 0; i < 4; ++i) {
        const std::string stem = "tp" + std::to_string(arch.pool_kernels[i]);
        build_conv(model.branch_conv_[i], stem + ".conv", arch.encoder_channels[3],
                   arch.branch_channels, 1);
        build_bn(model.branch_bn_[i], stem + ".bn", arch.branch_channels);
    }
    build_conv(model.decoder_conv_, "decoder.tconv", arch.concat_channels, arch.decoder_channels, 8);
    build_bn(model.decoder_bn_, "decoder.bn", arch.decoder_channels);
    build_conv(model.status_head_, "status_head", arch.decoder_channels, 2, 1);
    build_conv(model.power_head_, "power_head", arch.decoder_channels, 1, 1);
    return model;
}

void ConvModel::register_params(std::vector<ParamTensor*>& out) const {
    auto add = [&](const ParamTensor& p) { out.push_back(const_cast<ParamTensor*>(&p)); };
    for (int i = 0; i < 4; ++i) {
        add(encoder_conv_[i].weight);
        add(encoder_conv_[i].bias);
        add(encoder_bn_[i].gamma);
        add(encoder_bn_[i].beta);
    }
    for (int i = 0; i < 4; ++i) {
        add(branch_conv_[i].weight);
        add(branch_conv_[i].bias);
        add(branch_bn_[i].gamma);
        add(branch_bn_[i].beta);
    }
    add(decoder_conv_.weight);
    add(decoder_conv_.bias);
    add(decoder_bn_.gamma);
    add(decoder_bn_.beta);
    add(status_head_.weight);
    add(status_head_.bias);
    add(power_head_.weight);
    add(power_head_.bias);
}

std::vector<ParamTensor*> ConvModel::parameters() {
    std::vector<ParamTensor*> out;
    register_params(out);
    return out;
}

std::vector<const ParamTensor*> ConvModel::parameters() const {
    std::vector<ParamTensor*> out;
    register_params(out);
    return {out.begin(), out.end()};
}

// ---- forward ------------------------------------------------------------

void ConvModel::forward(const Tensor& input, Mode mode, Trace& trace, bool update_running) const {
    if (input.channels != 1 || input.length != arch_.input_length) {
        throw InputError("forward: expected input shape (B, 1, " +
                         std::to_string(arch_.input_length) + ")");
    }
    check_finite(input, "input");
    trace.mode = mode;
    trace.input = input;

    const Tensor* cur = &trace.input;
    for (int i = 0; i < 4; ++i) {
        const std::string stem = "enc" + std::to_string(i + 1);
        conv_forward(*cur, encoder_conv_[i].weight, encoder_conv_[i].bias, 3, trace.enc_conv[i]);
        bn_forward(trace.enc_conv[i], encoder_bn_[i].gamma, encoder_bn_[i].beta,
                   encoder_bn_[i].state, mode, update_running, trace.enc_bn[i],
                   trace.enc_bn_cache[i]);
        relu_forward(trace.enc_bn[i], trace.enc_relu[i]);
        check_finite(trace.enc_relu[i], stem.c_str());
        if (i < 3) {
            maxpool2_forward(trace.enc_relu[i], trace.enc_pool[i], trace.pool_argmax[i]);
            cur = &trace.enc_pool[i];
        } else {
            cur = &trace.enc_relu[i];
        }
    }
    const Tensor& encoded = *cur;  // (B, c4, 60)

    for (int i = 0; i < 4; ++i) {
        const std::string stem = "tp" + std::to_string(arch_.pool_kernels[i]);
        avgpool_forward(encoded, arch_.pool_kernels[i], trace.branch_avg[i]);
        conv_forward(trace.branch_avg[i], branch_conv_[i].weight, branch_conv_[i].bias, 1,
                     trace.branch_conv[i]);
        bn_forward(trace.branch_conv[i], branch_bn_[i].gamma, branch_bn_[i].beta,
                   branch_bn_[i].state, mode, update_running, trace.branch_bn[i],
                   trace.branch_bn_cache[i]);
        relu_forward(trace.branch_bn[i], trace.branch_relu[i]);
        upsample_forward(trace.branch_relu[i], arch_.pool_kernels[i], trace.branch_up[i]);
        check_finite(trace.branch_up[i], stem.c_str());
    }

    // skip connection first, then the pooling branches in kernel order
    trace.concat.resize(encoded.batch, arch_.concat_channels, encoded.length);
    for (int b = 0; b < encoded.batch; ++b) {
        int c_out = 0;
        for (int c = 0; c < encoded.channels; ++c, ++c_out) {
            std::memcpy(trace.concat.row(b, c_out), encoded.row(b, c),
                        sizeof(double) * static_cast<std::size_t>(encoded.length));
        }
        for (int i = 0; i < 4; ++i) {
            for (int c = 0; c < arch_.branch_channels; ++c, ++c_out) {
                std::memcpy(trace.concat.row(b, c_out), trace.branch_up[i].row(b, c),
                            sizeof(double) * static_cast<std::size_t>(encoded.length));
            }
        }
    }

    tconv_forward(trace.concat, decoder_conv_.weight, decoder_conv_.bias, 8, trace.dec_conv);
    bn_forward(trace.dec_conv, decoder_bn_.gamma, decoder_bn_.beta, decoder_bn_.state, mode,
               update_running, trace.dec_bn, trace.dec_bn_cache);
    check_finite(trace.dec_bn, "decoder");

    conv_forward(trace.dec_bn, status_head_.weight, status_head_.bias, 1, trace.status_logits);
    softmax2_forward(trace.status_logits, trace.status_probs);
    conv_forward(trace.dec_bn, power_head_.weight, power_head_.bias, 1, trace.power);
    check_finite(trace.status_probs, "status_head");
    check_finite(trace.power, "power_head");
}

ConvModel::Output ConvModel::forward(const Tensor& input, Mode mode) {
    std::unique_ptr<Trace> trace(make_trace());
    forward(input, mode, *trace, mode == Mode::Train);
    Output out;
    out.status_probs = trace->status_probs;
    out.power = trace->power;
    return out;
}

// ---- backward -----------------------------------------------------------

ConvModel::Losses ConvModel::backward(Trace& trace, const Tensor& status_target,
                                      const Tensor& power_target, const LossWeights& weights) {
    if (weights.w < 0.0 || weights.w > 1.0) throw ConfigError("loss weight w must be in [0, 1]");
    if (weights.k <= 0.0) throw ConfigError("loss normalizer k must be positive");
    const int B = trace.power.batch;
    const int L = trace.power.length;
    if (status_target.batch != B || status_target.length != L || power_target.batch != B ||
        power_target.length != L) {
        throw InputError("backward: target shapes do not match the forward trace");
    }
    const double n = static_cast<double>(B) * L;

    Losses losses;

    // regression head seed
    trace.g_power.resize(B, 1, L);
    const double reg_weight = (1.0 - weights.w) / weights.k;
    for (int b = 0; b < B; ++b) {
        const double* pred = trace.power.row(b, 0);
        const double* yt = power_target.row(b, 0);
        double* g = trace.g_power.row(b, 0);
        for (int t = 0; t < L; ++t) {
            const double d = pred[t] - yt[t];
            losses.regression += d * d;
            g[t] = reg_weight * 2.0 * d / n;
        }
    }
    losses.regression /= n;

    // classification head seed (BCE on the ON probability, then softmax)
    trace.g_status_logits.resize(B, 2, L);
    for (int b = 0; b < B; ++b) {
        const double* p0 = trace.status_probs.row(b, 0);
        const double* p1 = trace.status_probs.row(b, 1);
        const double* yt = status_target.row(b, 0);
        double* gz0 = trace.g_status_logits.row(b, 0);
        double* gz1 = trace.g_status_logits.row(b, 1);
        for (int t = 0; t < L; ++t) {
            const double y = yt[t];
            const double pc = std::clamp(p1[t], kBceClip, 1.0 - kBceClip);
            losses.classification -= y * std::log(pc) + (1.0 - y) * std::log(1.0 - pc);
            double dLdp = 0.0;
            if (p1[t] > kBceClip && p1[t] < 1.0 - kBceClip) {
                dLdp = (pc - y) / (pc * (1.0 - pc)) / n;
            }
            const double gz = weights.w * p0[t] * p1[t] * dLdp;
            gz1[t] = gz;
            gz0[t] = -gz;
        }
    }
    losses.classification /= n;
    losses.total = loss_total(losses.classification, losses.regression, weights);

    // heads -> decoder output
    conv_backward(trace.dec_bn, status_head_.weight, status_head_.bias, 1, trace.g_status_logits,
                  trace.g_head_in_a);
    conv_backward(trace.dec_bn, power_head_.weight, power_head_.bias, 1, trace.g_power,
                  trace.g_head_in_b);
    trace.g_dec_bn.resize(B, arch_.decoder_channels, L);
    for (std::size_t i = 0; i < trace.g_dec_bn.data.size(); ++i) {
        trace.g_dec_bn.data[i] = trace.g_head_in_a.data[i] + trace.g_head_in_b.data[i];
    }

    bn_backward(trace.dec_bn_cache, decoder_bn_.gamma, decoder_bn_.beta, trace.g_dec_bn,
                trace.g_dec_conv);
    tconv_backward(trace.concat, decoder_conv_.weight, decoder_conv_.bias, 8, trace.g_dec_conv,
                   trace.g_concat);

    // split the concat gradient: skip connection + pooling branches
    const Tensor& encoded = trace.enc_relu[3];
    trace.g_enc4_out.resize(B, encoded.channels, encoded.length);
    for (int i = 0; i < 4; ++i) trace.g_branch_up[i].resize(B, arch_.branch_channels, encoded.length);
    for (int b = 0; b < B; ++b) {
        int c_in = 0;
        for (int c = 0; c < encoded.channels; ++c, ++c_in) {
            const double* src = trace.g_concat.row(b, c_in);
            double* dst = trace.g_enc4_out.row(b, c);
            for (int t = 0; t < encoded.length; ++t) dst[t] += src[t];
        }
        for (int i = 0; i < 4; ++i) {
            for (int c = 0; c < arch_.branch_channels; ++c, ++c_in) {
                std::memcpy(trace.g_branch_up[i].row(b, c), trace.g_concat.row(b, c_in),
                            sizeof(double) * static_cast<std::size_t>(encoded.length));
            }
        }
    }

    for (int i = 0; i < 4; ++i) {
        upsample_backward(trace.branch_relu[i], arch_.pool_kernels[i], trace.g_branch_up[i],
                          trace.g_branch_relu[i]);
        relu_backward(trace.branch_relu[i], trace.g_branch_relu[i], trace.g_branch_bn[i]);
        bn_backward(trace.branch_bn_cache[i], branch_bn_[i].gamma, branch_bn_[i].beta,
                    trace.g_branch_bn[i], trace.g_branch_conv[i]);
        Tensor& g_avg = trace.g_branch_relu[i];  // reuse as scratch for the avg-pool input grad
        conv_backward(trace.branch_avg[i], branch_conv_[i].weight, branch_conv_[i].bias, 1,
                      trace.g_branch_conv[i], g_avg);
        avgpool_backward_accum(arch_.pool_kernels[i], g_avg, trace.g_enc4_out);
    }

    // encoder, top block down
    const Tensor* gout = &trace.g_enc4_out;
    for (int i = 3; i >= 0; --i) {
        relu_backward(trace.enc_relu[i], *gout, trace.g_enc_bn[i]);
        bn_backward(trace.enc_bn_cache[i], encoder_bn_[i].gamma, encoder_bn_[i].beta,
                    trace.g_enc_bn[i], trace.g_enc_conv[i]);
        const Tensor& conv_in = i == 0 ? trace.input : trace.enc_pool[i - 1];
        Tensor& gin = i == 0 ? trace.g_input : trace.g_enc_pool[i - 1];
        conv_backward(conv_in, encoder_conv_[i].weight, encoder_conv_[i].bias, 3,
                      trace.g_enc_conv[i], gin);
        if (i > 0) {
            maxpool2_backward(trace.enc_relu[i - 1], gin, trace.pool_argmax[i - 1],
                              trace.g_enc_relu[i - 1]);
            gout = &trace.g_enc_relu[i - 1];
        }
    }

    for (const ParamTensor* p : parameters()) {
        for (const double g : p->grad) {
            if (!std::isfinite(g)) throw NumericalError("non-finite gradient in " + p->name);
        }
    }
    return losses;
}

void ConvModel::zero_grad() {
    for (ParamTensor* p : parameters()) std::fill(p->grad.begin(), p->grad.end(), 0.0);
}

void ConvModel::adam_step(double lr, double beta1, double beta2, double eps) {
    ++step_;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_));
    for (ParamTensor* p : parameters()) {
        for (std::size_t i = 0; i < p->value.size(); ++i) {
            const double g = p->grad[i];
            p->adam_m[i] = beta1 * p->adam_m[i] + (1.0 - beta1) * g;
            p->adam_v[i] = beta2 * p->adam_v[i] + (1.0 - beta2) * g * g;
            const double mhat = p->adam_m[i] / bc1;
            const double vhat = p->adam_v[i] / bc2;
            p->value[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

// ---- snapshot -----------------------------------------------------------

ConvModel::Snapshot ConvModel::snapshot() const {
    Snapshot snap;
    for (const ParamTensor* p : parameters()) {
        snap.values.push_back(p->value);
        snap.adam_m.push_back(p->adam_m);
        snap.adam_v.push_back(p->adam_v);
    }
    auto push_bn = [&](const BNLayer& bn) {
        snap.running.push_back(bn.state.running_mean);
        snap.running.push_back(bn.state.running_var);
    };
    for (const auto& bn : encoder_bn_) push_bn(bn);
    for (const auto& bn : branch_bn_) push_bn(bn);
    push_bn(decoder_bn_);
    snap.step = step_;
    return snap;
}

void ConvModel::restore(const Snapshot& snap) {
    const std::vector<ParamTensor*> params = parameters();
    if (snap.values.size() != params.size()) throw InputError("snapshot does not match model");
    for (std::size_t i = 0; i < params.size(); ++i) {
        params[i]->value = snap.values[i];
        params[i]->adam_m = snap.adam_m[i];
        params[i]->adam_v = snap.adam_v[i];
    }
    std::size_t r = 0;
    auto pop_bn = [&](BNLayer& bn) {
        bn.state.running_mean = snap.running[r++];
        bn.state.running_var = snap.running[r++];
    };
    for (auto& bn : encoder_bn_) pop_bn(bn);
    for (auto& bn : branch_bn_) pop_bn(bn);
    pop_bn(decoder_bn_);
    step_ = snap.step;
}

// ---- training -----------------------------------------------------------

namespace {

void fill_batch(const std::vector<Sample>& samples, const std::vector<std::size_t>& order,
                std::size_t begin, std::size_t end, Tensor& input, Tensor& status, Tensor& power) {
    const int B = static_cast<int>(end - begin);
    const int lin = static_cast<int>(samples[order[begin]].input.size());
    const int lout = static_cast<int>(samples[order[begin]].power_target.size());
    input.resize(B, 1, lin);
    status.resize(B, 1, lout);
    power.resize(B, 1, lout);
    for (int b = 0; b < B; ++b) {
        const Sample& s = samples[order[begin + static_cast<std::size_t>(b)]];
        std::copy(s.input.begin(), s.input.end(), input.row(b, 0));
        std::copy(s.status_target.begin(), s.status_target.end(), status.row(b, 0));
        std::copy(s.power_target.begin(), s.power_target.end(), power.row(b, 0));
    }
}

void validate_samples(const std::vector<Sample>& samples, const char* which) {
    if (samples.empty()) throw InputError(std::string(which) + " dataset is empty");
    for (const Sample& s : samples) {
        if (s.input.size() != 510 || s.power_target.size() != 480 ||
            s.status_target.size() != 480) {
            throw InputError(std::string(which) + " dataset has a mis-sized sample");
        }
    }
}

}  // namespace

TrainResult train(ConvModel& model, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set, const TrainOptions& options) {
    validate_samples(train_set, "training");
    validate_samples(val_set, "validation");
    if (options.batch < 1) throw ConfigError("batch size must be positive");
    if (options.epochs < 0) throw ConfigError("epoch count must be nonnegative");

    std::unique_ptr<ConvModel::Trace> trace(model.make_trace());
    TrainResult result;
    ConvModel::Snapshot best = model.snapshot();
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = 0;

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::size_t> identity(std::max(train_set.size(), val_set.size()));
    std::iota(identity.begin(), identity.end(), 0);

    Tensor input, status, power;

    auto validation_pass = [&](EpochStats& stats) {
        double loss_sum = 0.0;
        double abs_err_sum = 0.0;
        std::vector<ConfusionCounts> confusions;
        std::size_t n_windows = 0;
        for (std::size_t begin = 0; begin < val_set.size();
             begin += static_cast<std::size_t>(options.batch)) {
            const std::size_t end =
                std::min(val_set.size(), begin + static_cast<std::size_t>(options.batch));
            fill_batch(val_set, identity, begin, end, input, status, power);
            model.forward(input, Mode::Eval, *trace, false);
            const int B = static_cast<int>(end - begin);
            for (int b = 0; b < B; ++b) {
                const double* p1 = trace->status_probs.row(b, 1);
                const double* pw = trace->power.row(b, 0);
                const double* ys = status.row(b, 0);
                const double* yp = power.row(b, 0);
                const int L = trace->power.length;
                double bce = 0.0, mse = 0.0;
                ConfusionCounts cc;
                for (int t = 0; t < L; ++t) {
                    const double pc = std::clamp(p1[t], kBceClip, 1.0 - kBceClip);
                    bce -= ys[t] * std::log(pc) + (1.0 - ys[t]) * std::log(1.0 - pc);
                    const double d = pw[t] - yp[t];
                    mse += d * d;
                    abs_err_sum += std::abs(d);
                    const double pred = p1[t] >= 0.5 ? 1.0 : 0.0;
                    cc.tp += pred * ys[t];
                    cc.fp += pred * (1.0 - ys[t]);
                    cc.fn += (1.0 - pred) * ys[t];
                    cc.tn += (1.0 - pred) * (1.0 - ys[t]);
                }
                const double L_d = static_cast<double>(L);
                loss_sum += loss_total(bce / L_d, mse / L_d, options.weights);
                confusions.push_back(cc);
                ++n_windows;
            }
        }
        stats.val_loss = loss_sum / static_cast<double>(n_windows);
        stats.val_f1 = f1_per_series(confusions);
        stats.val_mae_watts = options.denorm_scale_watts * abs_err_sum /
                              (static_cast<double>(n_windows) * 480.0);
    };

    for (int epoch = 1; epoch <= options.epochs; ++epoch) {
        Rng epoch_rng(Rng::derive(options.seed, "epoch", static_cast<std::uint64_t>(epoch)));
        epoch_rng.shuffle(order);

        double train_loss_sum = 0.0;
        for (std::size_t begin = 0; begin < order.size();
             begin += static_cast<std::size_t>(options.batch)) {
            const std::size_t end =
                std::min(order.size(), begin + static_cast<std::size_t>(options.batch));
            fill_batch(train_set, order, begin, end, input, status, power);
            model.forward(input, Mode::Train, *trace, true);
            model.zero_grad();
            const ConvModel::Losses losses =
                model.backward(*trace, status, power, options.weights);
            model.adam_step(options.lr);
            train_loss_sum += losses.total * static_cast<double>(end - begin);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = train_loss_sum / static_cast<double>(train_set.size());
        validation_pass(stats);
        result.history.push_back(stats);

        if (stats.val_loss < best_val) {
            best_val = stats.val_loss;
            best = model.snapshot();
            best_epoch = epoch;
        }
    }

    if (options.epochs == 0) {
        EpochStats stats;
        stats.epoch = 0;
        validation_pass(stats);
        best_val = stats.val_loss;
    }

    model.restore(best);
    result.best_epoch = best_epoch;
    result.best_val_loss = best_val;
    return result;
}

Predictions predict(const ConvModel& model, const std::vector<Sample>& samples, int batch_size) {
    validate_samples(samples, "prediction");
    std::unique_ptr<ConvModel::Trace> trace(model.make_trace());
    std::vector<std::size_t> identity(samples.size());
    std::iota(identity.begin(), identity.end(), 0);
    Tensor input, status, power;
    Predictions out;
    for (std::size_t begin = 0; begin < samples.size();
         begin += static_cast<std::size_t>(batch_size)) {
        const std::size_t end = std::min(samples.size(), begin + static_cast<std::size_t>(batch_size));
        fill_batch(samples, identity, begin, end, input, status, power);
        model.forward(input, Mode::Eval, *trace, false);
        for (int b = 0; b < static_cast<int>(end - begin); ++b) {
            const double* p1 = trace->status_probs.row(b, 1);
            const double* pw = trace->power.row(b, 0);
            out.prob_on.emplace_back(p1, p1 + trace->status_probs.length);
            out.power_norm.emplace_back(pw, pw + trace->power.length);
        }
    }
    return out;
}

// ---- checkpoint io --------------------------------------------------------

struct ConvModelIO {
    static constexpr char kMagic[9] = "NLABCKPT";
    static constexpr std::uint32_t kVersion = 1;

    static void collect(const ConvModel& model,
                        std::vector<std::pair<std::string, const std::vector<double>*>>& arrays) {
        for (const ParamTensor* p : model.parameters()) {
            arrays.emplace_back(p->name, &p->value);
            arrays.emplace_back(p->name + ".adam_m", &p->adam_m);
            arrays.emplace_back(p->name + ".adam_v", &p->adam_v);
        }
        auto add_bn = [&](const ConvModel::BNLayer& bn, const std::string& name) {
            arrays.emplace_back(name + ".running_mean", &bn.state.running_mean);
            arrays.emplace_back(name + ".running_var", &bn.state.running_var);
        };
        for (int i = 0; i < 4; ++i) add_bn(model.encoder_bn_[i], "enc" + std::to_string(i + 1) + ".bn");
        for (int i = 0; i < 4; ++i) {
            add_bn(model.branch_bn_[i], "tp" + std::to_string(model.arch_.pool_kernels[i]) + ".bn");
        }
        add_bn(model.decoder_bn_, "decoder.bn");
    }

    static void save(const ConvModel& model, const std::filesystem::path& path) {
        std::ofstream file(path, std::ios::binary);
        if (!file) throw InputError("cannot write checkpoint '" + path.string() + "'");
        file.write(kMagic, 8);
        write_u32(file, kVersion);
        write_f64(file, model.config_.width_scale);
        write_u64(file, model.config_.init_seed);
        write_u64(file, model.step_);

        std::vector<std::pair<std::string, const std::vector<double>*>> arrays;
        collect(model, arrays);
        write_u32(file, static_cast<std::uint32_t>(arrays.size()));
        for (const auto& [name, data] : arrays) {
            write_u16(file, static_cast<std::uint16_t>(name.size()));
            file.write(name.data(), static_cast<std::streamsize>(name.size()));
            write_u64(file, data->size());
            file.write(reinterpret_cast<const char*>(data->data()),
                       static_cast<std::streamsize>(data->size() * sizeof(double)));
        }
        if (!file) throw InputError("failed while writing checkpoint '" + path.string() + "'");
    }

    static ConvModel load(const std::filesystem::path& path) {
        std::ifstream file(path, std::ios::binary);
        if (!file) throw InputError("cannot open checkpoint '" + path.string() + "'");
        char magic[8];
        file.read(magic, 8);
        if (!file || std::memcmp(magic, kMagic, 8) != 0) {
            throw InputError("'" + path.string() + "' is not a model checkpoint");
        }
        if (read_u32(file) != kVersion) {
            throw InputError("unsupported checkpoint version in '" + path.string() + "'");
        }
        ConvModelConfig config;
        config.width_scale = read_f64(file);
        config.init_seed = read_u64(file);
        ConvModel model = ConvModel::build(config);
        model.step_ = read_u64(file);

        std::vector<std::pair<std::string, const std::vector<double>*>> arrays;
        collect(model, arrays);
        const std::uint32_t count = read_u32(file);
        if (count != arrays.size()) {
            throw InputError("checkpoint array count mismatch in '" + path.string() + "'");
        }
        for (std::uint32_t i = 0; i < count; ++i) {
            const std::uint16_t name_len = read_u16(file);
            std::string name(name_len, '\0');
            file.read(name.data(), name_len);
            const std::uint64_t size = read_u64(file);
            if (name != arrays[i].first || size != arrays[i].second->size()) {
                throw InputError("checkpoint layout mismatch at array '" + name + "'");
            }
            auto* dst = const_cast<std::vector<double>*>(arrays[i].second);
            file.read(reinterpret_cast<char*>(dst->data()),
                      static_cast<std::streamsize>(size * sizeof(double)));
        }
        if (!file) throw InputError("truncated checkpoint '" + path.string() + "'");
        return model;
    }

    static void write_u16(std::ofstream& f, std::uint16_t v) {
        f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    static void write_u32(std::ofstream& f, std::uint32_t v) {
        f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    static void write_u64(std::ofstream& f, std::uint64_t v) {
        f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    static void write_f64(std::ofstream& f, double v) {
        f.write(reinterpret_cast<const char*>(&v), sizeof v);
    }
    static std::uint16_t read_u16(std::ifstream& f) {
        std::uint16_t v = 0;
        f.read(reinterpret_cast<char*>(&v), sizeof v);
        return v;
    }
    static std::uint32_t read_u32(std::ifstream& f) {
        std::uint32_t v = 0;
        f.read(reinterpret_cast<char*>(&v), sizeof v);
        return v;
    }
    static std::uint64_t read_u64(std::ifstream& f) {
        std::uint64_t v = 0;
        f.read(reinterpret_cast<char*>(&v), sizeof v);
        return v;
    }
    static double read_f64(std::ifstream& f) {
        double v = 0;
        f.read(reinterpret_cast<char*>(&v), sizeof v);
        return v;
    }
};

void ConvModel::save(const std::filesystem::path& path) const { ConvModelIO::save(*this, path); }

ConvModel ConvModel::load(const std::filesystem::path& path) { return ConvModelIO::load(path); }

}  // namespace nilm
