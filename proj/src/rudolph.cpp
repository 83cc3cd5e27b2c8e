#include "fca2vec/rudolph.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace fca2vec {

ClosureNet build_closure_net(const FormalContext& ctx) {
    ClosureNet net;
    net.neg_in.reserve(ctx.object_count());
    for (int g = 0; g < ctx.object_count(); ++g) net.neg_in.push_back(ctx.row(g).complement());
    net.neg_out.reserve(ctx.attribute_count());
    for (int m = 0; m < ctx.attribute_count(); ++m) net.neg_out.push_back(ctx.col(m).complement());
    return net;
}

ObjSet closure_net_hidden(const ClosureNet& net, const AttrSet& input) {
    ObjSet hidden(net.object_count());
    for (int g = 0; g < net.object_count(); ++g) {
        // Pre-activation is -(number of -1 weights hit by the input); the
        // threshold fires exactly when none are hit.
        if (!input.intersects(net.neg_in[g])) hidden.set(g);
    }
    return hidden;
}

AttrSet closure_net_forward(const ClosureNet& net, const AttrSet& input) {
    ObjSet hidden = closure_net_hidden(net, input);
    AttrSet out(net.attribute_count());
    for (int m = 0; m < net.attribute_count(); ++m)
        if (!hidden.intersects(net.neg_out[m])) out.set(m);
    return out;
}

void flip_weight(ClosureNet& net, int layer, int obj, int attr) {
    if (layer == 0)
        net.neg_in.at(obj).flip(attr);
    else if (layer == 1)
        net.neg_out.at(attr).flip(obj);
    else
        throw std::invalid_argument("flip_weight: layer must be 0 or 1");
}

VerifyResult verify_closure_net(const FormalContext& ctx, const ClosureNet& net,
                                std::size_t samples, std::uint64_t seed) {
    if (net.object_count() != ctx.object_count() ||
        net.attribute_count() != ctx.attribute_count())
        throw std::invalid_argument("verify_closure_net: net shape does not match context");
    const int n_m = ctx.attribute_count();

    VerifyResult result;
    auto check_one = [&](const AttrSet& b) {
        ++result.tested;
        if (closure_net_hidden(net, b) != derive_objs(ctx, b) ||
            closure_net_forward(net, b) != closure_attrs(ctx, b)) {
            result.ok = false;
            result.counterexample = b;
            return false;
        }
        return true;
    };

    if (n_m <= 20) {
        result.exhaustive = true;
        AttrSet b(n_m);
        // Gray-code walk over all subsets: flip the bit at the lowest set
        // position of the counter.
        if (!check_one(b)) return result;
        for (unsigned long counter = 1; counter < (1ul << n_m); ++counter) {
            int bit = 0;
            while (!(counter & (1ul << bit))) ++bit;
            b.flip(bit);
            if (!check_one(b)) return result;
        }
        return result;
    }

    result.exhaustive = false;
    if (!check_one(AttrSet(n_m))) return result;
    if (!check_one(AttrSet::full(n_m))) return result;
    std::mt19937_64 rng(seed);
    for (std::size_t s = 2; s < samples; ++s) {
        AttrSet b(n_m);
        for (int i = 0; i < n_m; ++i)
            if (rng() & 1u) b.set(i);
        if (!check_one(b)) return result;
    }
    return result;
}

namespace {

// Solves (A + eps*I) x = rhs for several right-hand sides; A is symmetric
// positive semidefinite (Gram matrix). Gaussian elimination with partial
// pivoting; dimensions are tiny (<= 13).
std::vector<std::vector<double>> solve_ridge(std::vector<std::vector<double>> a,
                                             std::vector<std::vector<double>> rhs, double eps) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) a[i][i] += eps;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        double d = a[col][col];
        if (d == 0.0) continue;  // ridge makes this unreachable in practice
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            for (std::size_t c = 0; c < rhs[r].size(); ++c) rhs[r][c] -= f * rhs[col][c];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < rhs[i].size(); ++c)
            rhs[i][c] = a[i][i] != 0.0 ? rhs[i][c] / a[i][i] : 0.0;
    return rhs;
}

}  // namespace

double best_affine_fit_residual(const FormalContext& ctx) {
    const int n_m = ctx.attribute_count();
    if (n_m > 12)
        throw std::invalid_argument("best_affine_fit_residual: exhaustive fit needs |M| <= 12");
    const std::size_t n_rows = 1ul << n_m;
    const std::size_t n_cols = static_cast<std::size_t>(n_m) + 1;  // leading 1 then enc(B)

    // Gram matrix X^T X and X^T Y accumulated directly; X would have 2^|M|
    // rows of [1 enc(B)], Y the closure encodings.
    std::vector<std::vector<double>> gram(n_cols, std::vector<double>(n_cols, 0.0));
    std::vector<std::vector<double>> xty(n_cols, std::vector<double>(n_m, 0.0));
    std::vector<AttrSet> closures;
    closures.reserve(n_rows);
    for (std::size_t mask = 0; mask < n_rows; ++mask) {
        AttrSet b(n_m);
        for (int i = 0; i < n_m; ++i)
            if (mask & (1ul << i)) b.set(i);
        AttrSet c = closure_attrs(ctx, b);
        closures.push_back(c);
        std::vector<double> x(n_cols, 0.0);
        x[0] = 1.0;
        for (int i = 0; i < n_m; ++i) x[i + 1] = b.test(i) ? 1.0 : 0.0;
        for (std::size_t r = 0; r < n_cols; ++r) {
            if (x[r] == 0.0) continue;
            for (std::size_t s = 0; s < n_cols; ++s) gram[r][s] += x[r] * x[s];
            for (int j = 0; j < n_m; ++j)
                if (c.test(j)) xty[r][j] += x[r];
        }
    }

    std::vector<std::vector<double>> coef = solve_ridge(gram, xty, 1e-10);

    double worst = 0.0;
    for (std::size_t mask = 0; mask < n_rows; ++mask) {
        for (int j = 0; j < n_m; ++j) {
            double pred = coef[0][j];
            for (int i = 0; i < n_m; ++i)
                if (mask & (1ul << i)) pred += coef[i + 1][j];
            double want = closures[mask].test(j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(pred - want));
        }
    }
    return worst;
}

DenseNet closure_net_to_dense(const ClosureNet& net) {
    const int n_g = net.object_count();
    const int n_m = net.attribute_count();
    DenseNet dense = make_net(n_m, {{n_g, Activation::Threshold01, false},
                                    {n_m, Activation::Threshold01, false}});
    for (int g = 0; g < n_g; ++g)
        for (int m = 0; m < n_m; ++m)
            dense.layers[0].w[static_cast<std::size_t>(g) * n_m + m] =
                net.neg_in[g].test(m) ? -1.0 : 0.0;
    for (int m = 0; m < n_m; ++m)
        for (int g = 0; g < n_g; ++g)
            dense.layers[1].w[static_cast<std::size_t>(m) * n_g + g] =
                net.neg_out[m].test(g) ? -1.0 : 0.0;
    return dense;
}

}  // namespace fca2vec
