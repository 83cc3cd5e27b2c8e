#include <doctest.h>

#include <filesystem>
#include <random>

#include "fca2vec/rudolph.hpp"
#include "fixtures.hpp"

using namespace fca2vec;

TEST_CASE("closure net computes derivation and closure on the three-object example") {
    FormalContext ctx = fixtures::tiny3x3();
    ClosureNet net = build_closure_net(ctx);

    AttrSet b1 = AttrSet::from_indices(3, {0});  // {1}
    CHECK(closure_net_forward(net, b1) == AttrSet::from_indices(3, {0, 2}));  // {1,3}

    AttrSet empty(3);
    CHECK(closure_net_forward(net, empty) == closure_attrs(ctx, empty));
    CHECK(closure_net_hidden(net, empty) == ObjSet::full(3));
}

TEST_CASE("hidden layer encodes the attribute derivation") {
    FormalContext ctx = fixtures::living_beings();
    ClosureNet net = build_closure_net(ctx);
    // Attributes 4,5,6 are shared exactly by objects a, f, g.
    AttrSet b = AttrSet::from_indices(9, {3, 4, 5});
    CHECK(closure_net_hidden(net, b) == ObjSet::from_indices(8, {0, 5, 6}));
    CHECK(closure_net_hidden(net, b) == derive_objs(ctx, b));
}

TEST_CASE("verification is exhaustive for small attribute sets") {
    FormalContext ctx = fixtures::tiny3x3();
    VerifyResult r = verify_closure_net(ctx, build_closure_net(ctx));
    CHECK(r.ok);
    CHECK(r.exhaustive);
    CHECK(r.tested == 8);
    CHECK_FALSE(r.counterexample.has_value());

    FormalContext lb = fixtures::living_beings();
    VerifyResult rl = verify_closure_net(lb, build_closure_net(lb));
    CHECK(rl.ok);
    CHECK(rl.tested == 512);
}

TEST_CASE("closure nets are exact on random contexts") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 100; ++trial) {
        FormalContext ctx = fixtures::random_context(8, 8, 0.2 + 0.06 * (trial % 10), rng);
        VerifyResult r = verify_closure_net(ctx, build_closure_net(ctx));
        CHECK(r.ok);
        CHECK(r.exhaustive);
    }
}

TEST_CASE("wide contexts fall back to sampled verification") {
    std::mt19937_64 rng(71);
    FormalContext ctx = fixtures::random_context(10, 25, 0.3, rng);
    VerifyResult r = verify_closure_net(ctx, build_closure_net(ctx), 2000, 5);
    CHECK(r.ok);
    CHECK_FALSE(r.exhaustive);
    CHECK(r.tested == 2000);
}

TEST_CASE("a flipped weight is caught with a concrete counterexample") {
    FormalContext ctx = fixtures::tiny3x3();

    ClosureNet first_layer = build_closure_net(ctx);
    flip_weight(first_layer, 0, 2, 0);
    VerifyResult r1 = verify_closure_net(ctx, first_layer);
    CHECK_FALSE(r1.ok);
    REQUIRE(r1.counterexample.has_value());
    const AttrSet& b = *r1.counterexample;
    bool witnesses = closure_net_hidden(first_layer, b) != derive_objs(ctx, b) ||
                     closure_net_forward(first_layer, b) != closure_attrs(ctx, b);
    CHECK(witnesses);

    ClosureNet second_layer = build_closure_net(ctx);
    flip_weight(second_layer, 1, 0, 0);
    CHECK_FALSE(verify_closure_net(ctx, second_layer).ok);

    ClosureNet net = build_closure_net(ctx);
    CHECK_THROWS_AS(flip_weight(net, 2, 0, 0), std::invalid_argument);
    FormalContext lb = fixtures::living_beings();
    CHECK_THROWS_AS(verify_closure_net(lb, net), std::invalid_argument);
}

TEST_CASE("no affine map reproduces a non-affine closure operator") {
    FormalContext ctx = fixtures::tiny3x3();
    double residual = best_affine_fit_residual(ctx);
    CHECK(residual > 0.2);
}

TEST_CASE("identity closures are affine with zero residual") {
    // Contranominal scale: every attribute subset is closed.
    FormalContext ctx = fixtures::contranominal(4);
    for (unsigned long mask = 0; mask < 16; ++mask) {
        AttrSet b(4);
        for (int i = 0; i < 4; ++i)
            if (mask & (1ul << i)) b.set(i);
        REQUIRE(closure_attrs(ctx, b) == b);
    }
    CHECK(best_affine_fit_residual(ctx) < 1e-6);
}

TEST_CASE("affine residual is invariant under object permutation") {
    FormalContext ctx = fixtures::tiny3x3();
    std::vector<AttrSet> rows = {ctx.row(1), ctx.row(2), ctx.row(0)};
    FormalContext permuted = make_context({"b", "c", "a"}, ctx.attributes(), rows);
    CHECK(best_affine_fit_residual(permuted) ==
          doctest::Approx(best_affine_fit_residual(ctx)).epsilon(1e-12));
}

TEST_CASE("affine residual guards its input size") {
    std::mt19937_64 rng(73);
    FormalContext wide = fixtures::random_context(5, 13, 0.4, rng);
    CHECK_THROWS_AS(best_affine_fit_residual(wide), std::invalid_argument);
}

TEST_CASE("dense export is frozen and equivalent") {
    FormalContext ctx = fixtures::living_beings();
    ClosureNet net = build_closure_net(ctx);
    DenseNet dense = closure_net_to_dense(net);
    CHECK(is_frozen(dense));

    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 50; ++trial) {
        AttrSet b(9);
        for (int i = 0; i < 9; ++i)
            if (rng() & 1u) b.set(i);
        Vec x(9, 0.0);
        b.for_each_set([&](int i) { x[i] = 1.0; });
        Vec y = forward(dense, x);
        AttrSet closed = closure_net_forward(net, b);
        for (int i = 0; i < 9; ++i) CHECK(y[i] == (closed.test(i) ? 1.0 : 0.0));
    }

    auto p = std::filesystem::temp_directory_path() / "fca2vec_test_closurenet.ckpt";
    save_checkpoint(dense, p.string());
    DenseNet back = load_checkpoint(p.string());
    CHECK(back.layers[0].w == dense.layers[0].w);
    CHECK(back.layers[1].w == dense.layers[1].w);
    std::filesystem::remove(p);
}
