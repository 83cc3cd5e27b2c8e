#include "fca2vec/closure2vec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fca2vec/util.hpp"

namespace fca2vec {

const char* pair_distance_name(PairDistance d) {
    return d == PairDistance::Euclidean ? "euclidean" : "cosine";
}

PairDistance pair_distance_from_name(const std::string& s) {
    if (s == "euclidean") return PairDistance::Euclidean;
    if (s == "cosine") return PairDistance::Cosine;
    throw std::invalid_argument("unknown distance: " + s);
}

double vector_distance(PairDistance delta, const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector_distance: width mismatch");
    if (a == b) return 0.0;  // exact, also under cosine where sqrt rounding could leak in
    if (delta == PairDistance::Euclidean) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double d = a[i] - b[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    double denom = std::sqrt(na) * std::sqrt(nb);
    if (denom < 1e-12) return 1.0;  // zero vector: no direction, similarity 0
    return 1.0 - dot / denom;
}

Vec encode_attrset(const AttrSet& b) {
    Vec v(b.width(), 0.0);
    b.for_each_set([&](int i) { v[i] = 1.0; });
    return v;
}

std::vector<ChdSample> generate_chd_samples(const FormalContext& ctx, int t, std::uint64_t seed) {
    const int n_m = ctx.attribute_count();
    if (t < 0) throw std::invalid_argument("generate_chd_samples: t must be >= 0");
    if (t > n_m) {
        std::cerr << "note: clamping max sample-set size " << t << " to |M| = " << n_m << "\n";
        t = n_m;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n_m - 1);
    std::vector<ChdSample> samples;

    // Subsets of size exactly k in lexicographic order of their index tuples,
    // sizes ascending; ~C(|M|,k) each.
    std::vector<int> idx;
    auto emit = [&](const AttrSet& x) {
        int m = pick(rng);
        AttrSet y = x;
        y.flip(m);
        samples.push_back({x, y, static_cast<double>(chd(ctx, x, y)) / n_m});
    };
    for (int k = 0; k <= t; ++k) {
        idx.assign(k, 0);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            emit(AttrSet::from_indices(n_m, idx));
            if (k == 0) break;
            int pos = k - 1;
            while (pos >= 0 && idx[pos] == n_m - k + pos) --pos;
            if (pos < 0) break;
            ++idx[pos];
            for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    return samples;
}

void save_chd_samples(const std::vector<ChdSample>& samples, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const ChdSample& s : samples)
        out << s.x.to_hex() << '\t' << s.y.to_hex() << '\t' << format_double(s.z) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<ChdSample> load_chd_samples(int n_attributes, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::vector<ChdSample> samples;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string xh, yh, zs, extra;
        if (!(ss >> xh >> yh >> zs)) throw ParseError(path, lineno, "expected x y z");
        if (ss >> extra) throw ParseError(path, lineno, "unexpected trailing field");
        try {
            std::size_t pos = 0;
            double z = std::stod(zs, &pos);
            if (pos != zs.size()) throw std::invalid_argument("malformed number: " + zs);
            samples.push_back(
                {AttrSet::from_hex(n_attributes, xh), AttrSet::from_hex(n_attributes, yh), z});
        } catch (const std::invalid_argument& e) {
            throw ParseError(path, lineno, e.what());
        } catch (const std::out_of_range& e) {
            throw ParseError(path, lineno, e.what());
        }
    }
    return samples;
}

bool squared_targets(const Closure2VecConfig& cfg) {
    switch (cfg.target) {
        case TargetTransform::Plain: return false;
        case TargetTransform::Squared: return true;
        case TargetTransform::Auto: break;
    }
    return cfg.delta == PairDistance::Euclidean;
}

namespace {

struct BranchTape {
    std::vector<Vec> pre;
    std::vector<Vec> post;
};

Vec run_branch(const DenseNet& trunk, const Vec& x, BranchTape& tape) {
    tape.pre.clear();
    tape.post.clear();
    const Vec* cur = &x;
    for (const Layer& lay : trunk.layers) {
        tape.pre.push_back(layer_pre(lay, *cur));
        tape.post.push_back(activation_apply(lay.act, tape.pre.back()));
        cur = &tape.post.back();
    }
    return tape.post.back();
}

// dL/d(embedding of branch 1) for the chosen distance; branch 2 uses the
// mirrored call. Returns zeros at nondifferentiable/degenerate points.
Vec distance_grad(PairDistance delta, const Vec& e1, const Vec& e2, double dist) {
    Vec g(e1.size(), 0.0);
    if (delta == PairDistance::Euclidean) {
        if (dist < 1e-12) return g;
        for (std::size_t i = 0; i < e1.size(); ++i) g[i] = (e1[i] - e2[i]) / dist;
        return g;
    }
    double dot = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        dot += e1[i] * e2[i];
        n1 += e1[i] * e1[i];
        n2 += e2[i] * e2[i];
    }
    double l1 = std::sqrt(n1), l2 = std::sqrt(n2);
    if (l1 * l2 < 1e-12) return g;
    // d(1 - cos)/de1 = -(e2/(l1*l2) - dot*e1/(l1^3*l2))
    for (std::size_t i = 0; i < e1.size(); ++i)
        g[i] = -(e2[i] / (l1 * l2) - dot * e1[i] / (n1 * l1 * l2));
    return g;
}

void branch_backward(const DenseNet& trunk, const Vec& input, const BranchTape& tape, Vec dembed,
                     std::vector<std::vector<double>>& gw, std::vector<std::vector<double>>& gb) {
    std::size_t n_layers = trunk.layers.size();
    Vec da = std::move(dembed);
    for (std::size_t l = n_layers; l-- > 0;) {
        Vec dz = activation_backward(trunk.layers[l].act, tape.pre[l], tape.post[l], da);
        const Vec& in = l == 0 ? input : tape.post[l - 1];
        Vec dx;
        layer_backward(trunk.layers[l], in, dz, gw[l], gb[l], l > 0 ? &dx : nullptr);
        if (l > 0) da = std::move(dx);
    }
}

}  // namespace

SiameseTrainResult train_closure2vec(const FormalContext& ctx,
                                     const std::vector<ChdSample>& samples,
                                     const Closure2VecConfig& cfg) {
    const int n_m = ctx.attribute_count();
    const int n_g = ctx.object_count();
    if (cfg.d < 1) throw std::invalid_argument("embedding dimension must be >= 1");
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (cfg.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (cfg.lr0 < 0.0) throw std::invalid_argument("lr0 must be >= 0");
    if (samples.empty()) throw std::invalid_argument("no samples to train on");
    for (const ChdSample& s : samples)
        if (s.x.width() != n_m || s.y.width() != n_m)
            throw std::invalid_argument("sample width does not match context");

    SiameseTrainResult result;
    result.model.delta = cfg.delta;
    result.model.trunk = make_net(n_m, {{n_g, Activation::Relu, true},
                                        {n_m, Activation::Relu, true},
                                        {cfg.d, Activation::Relu, true}});
    DenseNet& trunk = result.model.trunk;
    init_weights(trunk, derive_seed(cfg.seed, "closure2vec-init"));

    const bool square = squared_targets(cfg);
    std::mt19937_64 rng(derive_seed(cfg.seed, "closure2vec-order"));
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<std::vector<double>> gw, gb;
    for (const Layer& lay : trunk.layers) {
        gw.emplace_back(lay.w.size(), 0.0);
        gb.emplace_back(lay.b.size(), 0.0);
    }

    BranchTape tape_x, tape_y;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_sum = 0.0;
        for (std::size_t lo = 0; lo < order.size(); lo += cfg.batch_size) {
            std::size_t hi = std::min(lo + cfg.batch_size, order.size());
            for (auto& g : gw) std::fill(g.begin(), g.end(), 0.0);
            for (auto& g : gb) std::fill(g.begin(), g.end(), 0.0);
            double batch_sum = 0.0;
            for (std::size_t k = lo; k < hi; ++k) {
                const ChdSample& s = samples[order[k]];
                Vec in_x = encode_attrset(s.x);
                Vec in_y = encode_attrset(s.y);
                Vec ex = run_branch(trunk, in_x, tape_x);
                Vec ey = run_branch(trunk, in_y, tape_y);
                double pred = vector_distance(cfg.delta, ex, ey);
                double target = square ? s.z * s.z : s.z;
                double err = pred - target;
                batch_sum += err * err;
                double dpred = 2.0 * err;
                Vec gx = distance_grad(cfg.delta, ex, ey, pred);
                Vec gy = distance_grad(cfg.delta, ey, ex, pred);
                for (double& v : gx) v *= dpred;
                for (double& v : gy) v *= dpred;
                branch_backward(trunk, in_x, tape_x, std::move(gx), gw, gb);
                branch_backward(trunk, in_y, tape_y, std::move(gy), gw, gb);
            }
            if (!std::isfinite(batch_sum))
                throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                         std::to_string(epoch));
            epoch_sum += batch_sum;
            double lr = cfg.lr0 / static_cast<double>(hi - lo);
            for (std::size_t l = 0; l < trunk.layers.size(); ++l) {
                Layer& lay = trunk.layers[l];
                for (std::size_t i = 0; i < lay.w.size(); ++i) lay.w[i] -= lr * gw[l][i];
                for (std::size_t i = 0; i < lay.b.size(); ++i) lay.b[i] -= lr * gb[l][i];
            }
        }
        result.epoch_loss.push_back(epoch_sum / static_cast<double>(samples.size()));
    }
    return result;
}

Vec embed_attrset(const SiameseModel& model, const AttrSet& b) {
    return forward(model.trunk, encode_attrset(b));
}

double pair_distance(const SiameseModel& model, const AttrSet& a, const AttrSet& b) {
    return vector_distance(model.delta, embed_attrset(model, a), embed_attrset(model, b));
}

void save_attrset_embeddings(const SiameseModel& model, const std::vector<AttrSet>& sets,
                             const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const AttrSet& s : sets) {
        out << s.to_hex();
        for (double v : embed_attrset(model, s)) out << '\t' << format_double(v);
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace fca2vec
