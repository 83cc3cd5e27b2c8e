#pragma once

#include <cstdint>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace fca2vec {

using Vec = std::vector<double>;

enum class Activation { Identity, Relu, Sigmoid, Softmax, Threshold01 };
enum class Loss { Mse, CrossEntropy };
enum class LrSchedule { Constant, LinearDecayToZero };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& s);

// One affine map (out x in, row-major) plus an elementwise or softmax
// activation. Bias-free layers keep `has_bias = false` and an empty `b`.
struct Layer {
    int in = 0;
    int out = 0;
    std::vector<double> w;  // out*in, row-major: w[o*in + i]
    std::vector<double> b;  // out, or empty when has_bias is false
    bool has_bias = true;
    Activation act = Activation::Identity;
};

struct DenseNet {
    std::vector<Layer> layers;
    int input_width() const { return layers.empty() ? 0 : layers.front().in; }
    int output_width() const { return layers.empty() ? 0 : layers.back().out; }
};

// Structure checks: nonempty, dimension chaining, softmax only terminal.
// Throws std::invalid_argument on violation.
void validate_net(const DenseNet& net);

// True if any layer uses threshold01; such nets are frozen (not trainable).
bool is_frozen(const DenseNet& net);

// Uninitialized (zero-weight) net builder; spec = {(width, activation, has_bias)}.
DenseNet make_net(int input_width, const std::vector<std::tuple<int, Activation, bool>>& layers);

// Word2vec-style init: weights uniform in [-0.5/in, 0.5/in], biases zero.
void init_weights(DenseNet& net, std::uint64_t seed);

Vec forward(const DenseNet& net, const Vec& x);

// Post-activation values of every layer (last entry = network output).
std::vector<Vec> forward_trace(const DenseNet& net, const Vec& x);

struct TrainConfig {
    int epochs = 1;
    double lr0 = 0.01;
    LrSchedule lr_schedule = LrSchedule::Constant;
    int batch_size = 1;
    Loss loss = Loss::Mse;
    std::uint64_t seed = 0;
    bool shuffle = true;
    // Decay-schedule placement for callers that drive training in stages
    // (fresh example lists per epoch): steps already taken before this call,
    // and the step count the schedule should span (0 = steps of this call).
    long step_offset = 0;
    long total_steps_override = 0;
};

struct TrainResult {
    std::vector<double> epoch_loss;  // mean per-example loss, one entry per epoch
};

// Pointwise loss. Cross-entropy requires a softmax terminal layer and a
// distribution target; MSE requires a non-softmax terminal.
double eval_loss(const Vec& prediction, const Vec& target, Loss loss);

// Mini-batch SGD with averaged gradients. The learning rate at optimizer step
// t (0-based over epochs*ceil(N/batch) steps) is lr0 for the constant
// schedule and max(lr0*(1 - t/total_steps), 1e-4*lr0) for linear decay.
// Non-finite loss aborts with a diagnostic naming the epoch and batch.
TrainResult train(DenseNet& net, const std::vector<std::pair<Vec, Vec>>& examples,
                  const TrainConfig& cfg);

// Max relative error between analytic gradients and central finite
// differences (h = 1e-5) over every parameter of the net.
double gradient_check(const DenseNet& net, const Vec& x, const Vec& target, Loss loss);

// Learning rate at 0-based optimizer step t of total_steps under cfg.
double lr_at_step(const TrainConfig& cfg, long step, long total_steps);

// Standard basis vector e_i of width n, index 1-based (one_hot(1,3) = (1,0,0)).
Vec one_hot(int i, int n);

// ---------------------------------------------------------------------------
// Layer-level primitives for custom training loops (e.g. nets whose branches
// share parameters and therefore accumulate gradients across several passes).

Vec activation_apply(Activation act, const Vec& z);

// dL/dz given upstream = dL/da, the layer pre-activation z and output a.
// Softmax is excluded here: its gradient is only used fused with
// cross-entropy (delta = p - target).
Vec activation_backward(Activation act, const Vec& z, const Vec& a, const Vec& upstream);

Vec layer_pre(const Layer& layer, const Vec& x);
Vec layer_forward(const Layer& layer, const Vec& x);

// Accumulates dL/dW into gw (size out*in) and dL/db into gb (size out) given
// dz = dL/d(pre-activation); writes dL/dx into *dx when non-null.
void layer_backward(const Layer& layer, const Vec& x, const Vec& dz, std::vector<double>& gw,
                    std::vector<double>& gb, Vec* dx);

// Checkpoint: line 1 is a JSON shape header, then per layer `out` rows of
// weights and one bias row, tab-separated %.17g values.
void save_checkpoint(const DenseNet& net, const std::string& path);
DenseNet load_checkpoint(const std::string& path);

// Loss trace CSV: header `epoch,loss`, then one row per epoch (1-based).
void save_loss_csv(const std::vector<double>& epoch_loss, const std::string& path);

}  // namespace fca2vec
