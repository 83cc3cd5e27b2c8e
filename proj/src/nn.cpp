#include "fca2vec/nn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fca2vec/util.hpp"

namespace fca2vec {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Relu: return "relu";
        case Activation::Sigmoid: return "sigmoid";
        case Activation::Softmax: return "softmax";
        case Activation::Threshold01: return "threshold01";
    }
    return "?";
}

Activation activation_from_name(const std::string& s) {
    if (s == "identity") return Activation::Identity;
    if (s == "relu") return Activation::Relu;
    if (s == "sigmoid") return Activation::Sigmoid;
    if (s == "softmax") return Activation::Softmax;
    if (s == "threshold01") return Activation::Threshold01;
    throw std::invalid_argument("unknown activation: " + s);
}

void validate_net(const DenseNet& net) {
    if (net.layers.empty()) throw std::invalid_argument("net has no layers");
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        const Layer& lay = net.layers[l];
        if (lay.in <= 0 || lay.out <= 0)
            throw std::invalid_argument("layer " + std::to_string(l) + " has nonpositive width");
        if (static_cast<int>(lay.w.size()) != lay.in * lay.out)
            throw std::invalid_argument("layer " + std::to_string(l) + " weight size mismatch");
        if (lay.has_bias ? static_cast<int>(lay.b.size()) != lay.out : !lay.b.empty())
            throw std::invalid_argument("layer " + std::to_string(l) + " bias size mismatch");
        if (l > 0 && net.layers[l - 1].out != lay.in)
            throw std::invalid_argument("layer widths do not chain at layer " + std::to_string(l));
        if (lay.act == Activation::Softmax && l + 1 != net.layers.size())
            throw std::invalid_argument("softmax is only allowed on the terminal layer");
    }
}

bool is_frozen(const DenseNet& net) {
    for (const Layer& lay : net.layers)
        if (lay.act == Activation::Threshold01) return true;
    return false;
}

DenseNet make_net(int input_width, const std::vector<std::tuple<int, Activation, bool>>& layers) {
    DenseNet net;
    int in = input_width;
    for (const auto& [out, act, has_bias] : layers) {
        Layer lay;
        lay.in = in;
        lay.out = out;
        lay.w.assign(static_cast<std::size_t>(in) * out, 0.0);
        lay.has_bias = has_bias;
        if (has_bias) lay.b.assign(out, 0.0);
        lay.act = act;
        net.layers.push_back(std::move(lay));
        in = out;
    }
    validate_net(net);
    return net;
}

void init_weights(DenseNet& net, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (Layer& lay : net.layers) {
        double half = 0.5 / lay.in;
        std::uniform_real_distribution<double> dist(-half, half);
        for (double& w : lay.w) w = dist(rng);
        std::fill(lay.b.begin(), lay.b.end(), 0.0);
    }
}

Vec activation_apply(Activation act, const Vec& z) {
    Vec a(z.size());
    switch (act) {
        case Activation::Identity:
            a = z;
            break;
        case Activation::Relu:
            for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] > 0.0 ? z[i] : 0.0;
            break;
        case Activation::Sigmoid:
            for (std::size_t i = 0; i < z.size(); ++i) a[i] = 1.0 / (1.0 + std::exp(-z[i]));
            break;
        case Activation::Softmax: {
            double m = *std::max_element(z.begin(), z.end());
            double sum = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) sum += (a[i] = std::exp(z[i] - m));
            for (double& v : a) v /= sum;
            break;
        }
        case Activation::Threshold01:
            for (std::size_t i = 0; i < z.size(); ++i) a[i] = z[i] >= 0.0 ? 1.0 : 0.0;
            break;
    }
    return a;
}

Vec activation_backward(Activation act, const Vec& z, const Vec& a, const Vec& upstream) {
    Vec dz(z.size());
    switch (act) {
        case Activation::Identity:
            dz = upstream;
            break;
        case Activation::Relu:
            for (std::size_t i = 0; i < z.size(); ++i) dz[i] = z[i] > 0.0 ? upstream[i] : 0.0;
            break;
        case Activation::Sigmoid:
            for (std::size_t i = 0; i < z.size(); ++i) dz[i] = upstream[i] * a[i] * (1.0 - a[i]);
            break;
        default:
            throw std::invalid_argument(
                std::string("no standalone gradient for activation ") + activation_name(act));
    }
    return dz;
}

Vec layer_pre(const Layer& layer, const Vec& x) {
    if (static_cast<int>(x.size()) != layer.in)
        throw std::invalid_argument("layer input width mismatch: got " +
                                    std::to_string(x.size()) + ", expected " +
                                    std::to_string(layer.in));
    Vec z(layer.out, 0.0);
    for (int o = 0; o < layer.out; ++o) {
        const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
        double s = layer.has_bias ? layer.b[o] : 0.0;
        for (int i = 0; i < layer.in; ++i) s += row[i] * x[i];
        z[o] = s;
    }
    return z;
}

Vec layer_forward(const Layer& layer, const Vec& x) {
    return activation_apply(layer.act, layer_pre(layer, x));
}

void layer_backward(const Layer& layer, const Vec& x, const Vec& dz, std::vector<double>& gw,
                    std::vector<double>& gb, Vec* dx) {
    for (int o = 0; o < layer.out; ++o) {
        double d = dz[o];
        if (d == 0.0) continue;
        double* grow = gw.data() + static_cast<std::size_t>(o) * layer.in;
        for (int i = 0; i < layer.in; ++i) grow[i] += d * x[i];
        if (layer.has_bias) gb[o] += d;
    }
    if (dx) {
        dx->assign(layer.in, 0.0);
        for (int o = 0; o < layer.out; ++o) {
            double d = dz[o];
            if (d == 0.0) continue;
            const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
            for (int i = 0; i < layer.in; ++i) (*dx)[i] += d * row[i];
        }
    }
}

Vec forward(const DenseNet& net, const Vec& x) {
    validate_net(net);
    if (static_cast<int>(x.size()) != net.input_width())
        throw std::invalid_argument("forward: input width mismatch");
    Vec cur = x;
    for (const Layer& lay : net.layers) cur = layer_forward(lay, cur);
    return cur;
}

std::vector<Vec> forward_trace(const DenseNet& net, const Vec& x) {
    validate_net(net);
    if (static_cast<int>(x.size()) != net.input_width())
        throw std::invalid_argument("forward_trace: input width mismatch");
    std::vector<Vec> trace;
    Vec cur = x;
    for (const Layer& lay : net.layers) {
        cur = layer_forward(lay, cur);
        trace.push_back(cur);
    }
    return trace;
}

double eval_loss(const Vec& prediction, const Vec& target, Loss loss) {
    if (prediction.size() != target.size())
        throw std::invalid_argument("loss: prediction/target width mismatch");
    double total = 0.0;
    if (loss == Loss::Mse) {
        for (std::size_t i = 0; i < prediction.size(); ++i) {
            double d = prediction[i] - target[i];
            total += d * d;
        }
        return total / static_cast<double>(prediction.size());
    }
    for (std::size_t i = 0; i < prediction.size(); ++i)
        if (target[i] != 0.0) total -= target[i] * std::log(prediction[i]);
    return total;
}

namespace {

void check_loss_pairing(const DenseNet& net, Loss loss) {
    Activation terminal = net.layers.back().act;
    if (loss == Loss::CrossEntropy && terminal != Activation::Softmax)
        throw std::invalid_argument("cross-entropy requires a softmax terminal layer");
    if (loss == Loss::Mse && terminal == Activation::Softmax)
        throw std::invalid_argument("MSE is not supported with a softmax terminal layer");
}

struct GradBuffers {
    std::vector<std::vector<double>> gw;
    std::vector<std::vector<double>> gb;
    explicit GradBuffers(const DenseNet& net) {
        for (const Layer& lay : net.layers) {
            gw.emplace_back(lay.w.size(), 0.0);
            gb.emplace_back(lay.b.size(), 0.0);
        }
    }
    void zero() {
        for (auto& g : gw) std::fill(g.begin(), g.end(), 0.0);
        for (auto& g : gb) std::fill(g.begin(), g.end(), 0.0);
    }
};

// Forward + backward for one example; accumulates parameter gradients and
// returns the example loss.
double backprop(const DenseNet& net, const Vec& x, const Vec& target, Loss loss,
                GradBuffers& grads) {
    std::size_t n_layers = net.layers.size();
    std::vector<Vec> pre(n_layers), post(n_layers);
    const Vec* cur = &x;
    for (std::size_t l = 0; l < n_layers; ++l) {
        pre[l] = layer_pre(net.layers[l], *cur);
        post[l] = activation_apply(net.layers[l].act, pre[l]);
        cur = &post[l];
    }
    const Vec& p = post.back();
    double loss_value = eval_loss(p, target, loss);

    Vec dz(p.size());
    if (loss == Loss::CrossEntropy) {
        for (std::size_t i = 0; i < p.size(); ++i) dz[i] = p[i] - target[i];
    } else {
        Vec dp(p.size());
        double scale = 2.0 / static_cast<double>(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) dp[i] = scale * (p[i] - target[i]);
        dz = activation_backward(net.layers.back().act, pre.back(), p, dp);
    }
    for (std::size_t l = n_layers; l-- > 0;) {
        const Vec& input = l == 0 ? x : post[l - 1];
        Vec dx;
        layer_backward(net.layers[l], input, dz, grads.gw[l], grads.gb[l], l > 0 ? &dx : nullptr);
        if (l > 0) dz = activation_backward(net.layers[l - 1].act, pre[l - 1], post[l - 1], dx);
    }
    return loss_value;
}

}  // namespace

double lr_at_step(const TrainConfig& cfg, long step, long total_steps) {
    if (cfg.lr_schedule == LrSchedule::Constant) return cfg.lr0;
    double frac = total_steps > 0 ? static_cast<double>(step) / static_cast<double>(total_steps)
                                  : 0.0;
    return std::max(cfg.lr0 * (1.0 - frac), 1e-4 * cfg.lr0);
}

TrainResult train(DenseNet& net, const std::vector<std::pair<Vec, Vec>>& examples,
                  const TrainConfig& cfg) {
    validate_net(net);
    if (is_frozen(net))
        throw std::invalid_argument("net contains a threshold01 layer and is frozen");
    check_loss_pairing(net, cfg.loss);
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (cfg.lr0 < 0.0) throw std::invalid_argument("lr0 must be >= 0");
    if (examples.empty()) throw std::invalid_argument("no training examples");
    for (const auto& [x, t] : examples) {
        if (static_cast<int>(x.size()) != net.input_width() ||
            static_cast<int>(t.size()) != net.output_width())
            throw std::invalid_argument("training example width mismatch");
    }

    std::size_t n = examples.size();
    long batches_per_epoch = static_cast<long>((n + cfg.batch_size - 1) / cfg.batch_size);
    long total_steps = cfg.total_steps_override > 0
                           ? cfg.total_steps_override
                           : static_cast<long>(cfg.epochs) * batches_per_epoch;
    if (cfg.step_offset < 0) throw std::invalid_argument("step_offset must be >= 0");
    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    GradBuffers grads(net);
    TrainResult result;
    long step = cfg.step_offset;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng);
        double epoch_sum = 0.0;
        for (long b = 0; b < batches_per_epoch; ++b) {
            std::size_t lo = static_cast<std::size_t>(b) * cfg.batch_size;
            std::size_t hi = std::min(lo + cfg.batch_size, n);
            grads.zero();
            double batch_sum = 0.0;
            for (std::size_t k = lo; k < hi; ++k) {
                const auto& [x, t] = examples[order[k]];
                batch_sum += backprop(net, x, t, cfg.loss, grads);
            }
            if (!std::isfinite(batch_sum))
                throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                         std::to_string(epoch) + ", batch " + std::to_string(b));
            epoch_sum += batch_sum;
            double lr = lr_at_step(cfg, step, total_steps) / static_cast<double>(hi - lo);
            ++step;
            for (std::size_t l = 0; l < net.layers.size(); ++l) {
                Layer& lay = net.layers[l];
                for (std::size_t i = 0; i < lay.w.size(); ++i) lay.w[i] -= lr * grads.gw[l][i];
                for (std::size_t i = 0; i < lay.b.size(); ++i) lay.b[i] -= lr * grads.gb[l][i];
            }
        }
        result.epoch_loss.push_back(epoch_sum / static_cast<double>(n));
    }
    return result;
}

double gradient_check(const DenseNet& net, const Vec& x, const Vec& target, Loss loss) {
    validate_net(net);
    check_loss_pairing(net, loss);
    GradBuffers analytic(net);
    backprop(net, x, target, loss, analytic);

    DenseNet probe = net;
    const double h = 1e-5;
    double max_rel = 0.0;
    auto probe_param = [&](double& param, double analytic_grad) {
        double saved = param;
        param = saved + h;
        double lp = eval_loss(forward(probe, x), target, loss);
        param = saved - h;
        double lm = eval_loss(forward(probe, x), target, loss);
        param = saved;
        double numeric = (lp - lm) / (2.0 * h);
        double rel = std::abs(analytic_grad - numeric) /
                     std::max(std::abs(analytic_grad) + std::abs(numeric), 1e-12);
        max_rel = std::max(max_rel, rel);
    };
    for (std::size_t l = 0; l < probe.layers.size(); ++l) {
        Layer& lay = probe.layers[l];
        for (std::size_t i = 0; i < lay.w.size(); ++i) probe_param(lay.w[i], analytic.gw[l][i]);
        for (std::size_t i = 0; i < lay.b.size(); ++i) probe_param(lay.b[i], analytic.gb[l][i]);
    }
    return max_rel;
}

Vec one_hot(int i, int n) {
    if (n <= 0 || i < 1 || i > n)
        throw std::invalid_argument("one_hot: index " + std::to_string(i) +
                                    " outside 1.." + std::to_string(n));
    Vec v(n, 0.0);
    v[i - 1] = 1.0;
    return v;
}

// ---------------------------------------------------------------------------
// Persistence

void save_checkpoint(const DenseNet& net, const std::string& path) {
    validate_net(net);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    nlohmann::json header;
    header["layers"] = nlohmann::json::array();
    for (const Layer& lay : net.layers) {
        header["layers"].push_back({{"in", lay.in},
                                    {"out", lay.out},
                                    {"has_bias", lay.has_bias},
                                    {"act", activation_name(lay.act)}});
    }
    out << header.dump() << '\n';
    for (const Layer& lay : net.layers) {
        for (int o = 0; o < lay.out; ++o) {
            for (int i = 0; i < lay.in; ++i) {
                if (i) out << '\t';
                out << format_double(lay.w[static_cast<std::size_t>(o) * lay.in + i]);
            }
            out << '\n';
        }
        if (lay.has_bias) {
            for (int o = 0; o < lay.out; ++o) {
                if (o) out << '\t';
                out << format_double(lay.b[o]);
            }
            out << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<double> parse_row(const std::string& line, int expected, const std::string& path) {
    std::vector<double> vals;
    std::istringstream ss(line);
    double v;
    while (ss >> v) vals.push_back(v);
    if (static_cast<int>(vals.size()) != expected)
        throw std::runtime_error(path + ": expected " + std::to_string(expected) +
                                 " values per row, got " + std::to_string(vals.size()));
    return vals;
}

}  // namespace

DenseNet load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header");
    nlohmann::json header = nlohmann::json::parse(line);
    DenseNet net;
    for (const auto& jl : header.at("layers")) {
        Layer lay;
        lay.in = jl.at("in").get<int>();
        lay.out = jl.at("out").get<int>();
        lay.has_bias = jl.at("has_bias").get<bool>();
        lay.act = activation_from_name(jl.at("act").get<std::string>());
        lay.w.reserve(static_cast<std::size_t>(lay.in) * lay.out);
        for (int o = 0; o < lay.out; ++o) {
            if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated weights");
            for (double v : parse_row(line, lay.in, path)) lay.w.push_back(v);
        }
        if (lay.has_bias) {
            if (!std::getline(in, line)) throw std::runtime_error(path + ": truncated bias");
            lay.b = parse_row(line, lay.out, path);
        }
        net.layers.push_back(std::move(lay));
    }
    validate_net(net);
    return net;
}

void save_loss_csv(const std::vector<double>& epoch_loss, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "epoch,loss\n";
    for (std::size_t e = 0; e < epoch_loss.size(); ++e)
        out << (e + 1) << ',' << format_double(epoch_loss[e]) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fca2vec
