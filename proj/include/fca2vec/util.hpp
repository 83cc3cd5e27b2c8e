#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

namespace fca2vec {

// Round-trippable decimal rendering for doubles. All numeric report output goes
// through this so that repeated runs are byte-identical.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

// Derive an independent, reproducible seed for a named sub-task of a run.
// Different labels give unrelated streams; the same (seed, label) always
// gives the same stream.
inline std::uint64_t derive_seed(std::uint64_t seed, const std::string& label) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](unsigned char b) {
        h ^= b;
        h *= 1099511628211ull;
    };
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
    for (unsigned char c : label) mix(c);
    return h;
}

// Partial Fisher-Yates: choose k distinct elements of [0, n) uniformly,
// in random order.
inline std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k,
                                                           std::mt19937_64& rng) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> dist(i, n - 1);
        std::swap(pool[i], pool[dist(rng)]);
    }
    pool.resize(k);
    return pool;
}

inline double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
inline double sample_stdev(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    double m = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

}  // namespace fca2vec
