#pragma once

#include <random>
#include <string>
#include <vector>

#include "fca2vec/context.hpp"

namespace fixtures {

using fca2vec::AttrSet;
using fca2vec::FormalContext;

// Three objects a,b,c over attributes 1,2,3 with rows a={2,3}, b={1,3}, c={2}.
inline FormalContext tiny3x3() {
    std::vector<std::string> objects = {"a", "b", "c"};
    std::vector<std::string> attributes = {"1", "2", "3"};
    std::vector<AttrSet> rows = {
        AttrSet::from_indices(3, {1, 2}),
        AttrSet::from_indices(3, {0, 2}),
        AttrSet::from_indices(3, {1}),
    };
    return fca2vec::make_context(objects, attributes, rows);
}

// The classic eight-animal / nine-attribute teaching context.
inline FormalContext living_beings() {
    std::vector<std::string> objects = {"a", "b", "c", "d", "e", "f", "g", "h"};
    std::vector<std::string> attributes = {"1", "2", "3", "4", "5", "6", "7", "8", "9"};
    auto row = [](std::initializer_list<int> one_based) {
        std::vector<int> idx;
        for (int v : one_based) idx.push_back(v - 1);
        return AttrSet::from_indices(9, idx);
    };
    std::vector<AttrSet> rows = {
        row({4, 5, 6, 9}),     // a
        row({1, 2, 3, 6}),     // b
        row({1, 2, 4, 6, 8}),  // c
        row({1, 2, 3, 4, 6}),  // d
        row({1, 3, 6}),        // e
        row({4, 5, 6, 7}),     // f
        row({3, 4, 5, 6, 7}),  // g
        row({3, 5, 6, 7}),     // h
    };
    return fca2vec::make_context(objects, attributes, rows);
}

// Contranominal scale: g_i has every attribute except m_i. Every attribute
// subset is closed.
inline FormalContext contranominal(int n) {
    std::vector<std::string> objects, attributes;
    std::vector<AttrSet> rows;
    for (int i = 0; i < n; ++i) {
        objects.push_back("g" + std::to_string(i));
        attributes.push_back("m" + std::to_string(i));
        AttrSet r = AttrSet::full(n);
        r.reset(i);
        rows.push_back(r);
    }
    return fca2vec::make_context(objects, attributes, rows);
}

// Random context with roughly the given density; empty rows/columns are
// permitted unless `fix_empties` is set, which fills them with one incidence.
inline FormalContext random_context(int n_objects, int n_attributes, double density,
                                    std::mt19937_64& rng, bool fix_empties = true) {
    std::bernoulli_distribution coin(density);
    std::vector<std::string> objects, attributes;
    std::vector<AttrSet> rows;
    for (int g = 0; g < n_objects; ++g) objects.push_back("g" + std::to_string(g));
    for (int m = 0; m < n_attributes; ++m) attributes.push_back("m" + std::to_string(m));
    for (int g = 0; g < n_objects; ++g) {
        AttrSet r(n_attributes);
        for (int m = 0; m < n_attributes; ++m)
            if (coin(rng)) r.set(m);
        rows.push_back(std::move(r));
    }
    if (fix_empties) {
        for (int g = 0; g < n_objects; ++g)
            if (rows[g].none()) rows[g].set(static_cast<int>(rng() % n_attributes));
        for (int m = 0; m < n_attributes; ++m) {
            bool hit = false;
            for (int g = 0; g < n_objects && !hit; ++g) hit = rows[g].test(m);
            if (!hit) rows[static_cast<int>(rng() % n_objects)].set(m);
        }
    }
    return fca2vec::make_context(objects, attributes, rows);
}

}  // namespace fixtures
