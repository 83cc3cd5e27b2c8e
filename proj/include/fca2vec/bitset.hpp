#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fca2vec {

// Fixed-width bit vector. Bit i of a set over {0,...,width-1} lives in
// word i/64 at position i%64, so bit 0 is the least significant bit of
// the value the whole vector encodes.
class Bitset {
public:
    Bitset() = default;

    explicit Bitset(int width) : width_(width), words_((width + 63) / 64, 0) {
        if (width < 0) throw std::invalid_argument("Bitset: negative width");
    }

    static Bitset full(int width) {
        Bitset b(width);
        for (auto& w : b.words_) w = ~std::uint64_t{0};
        b.trim();
        return b;
    }

    int width() const { return width_; }

    bool test(int i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(int i) {
        check_index(i);
        words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }

    void reset(int i) {
        check_index(i);
        words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    void flip(int i) {
        check_index(i);
        words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }

    void clear() {
        for (auto& w : words_) w = 0;
    }

    int count() const {
        int c = 0;
        for (auto w : words_) c += std::popcount(w);
        return c;
    }

    bool none() const {
        for (auto w : words_) if (w) return false;
        return true;
    }

    bool any() const { return !none(); }

    // true iff other is a subset of *this
    bool contains(const Bitset& other) const {
        check_same_width(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (other.words_[i] & ~words_[i]) return false;
        return true;
    }

    bool intersects(const Bitset& other) const {
        check_same_width(other);
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i] & other.words_[i]) return true;
        return false;
    }

    Bitset& operator&=(const Bitset& o) {
        check_same_width(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    Bitset& operator|=(const Bitset& o) {
        check_same_width(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    Bitset& operator^=(const Bitset& o) {
        check_same_width(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
        return *this;
    }

    // *this \ o
    Bitset& subtract(const Bitset& o) {
        check_same_width(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
    friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
    friend Bitset operator^(Bitset a, const Bitset& b) { return a ^= b; }

    Bitset complement() const {
        Bitset r(width_);
        for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
        r.trim();
        return r;
    }

    bool operator==(const Bitset& o) const {
        check_same_width(o);
        return words_ == o.words_;
    }
    bool operator!=(const Bitset& o) const { return !(*this == o); }

    int hamming(const Bitset& o) const {
        check_same_width(o);
        int c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += std::popcount(words_[i] ^ o.words_[i]);
        return c;
    }

    // Total order by encoded value (bit 0 least significant). Sorting closed
    // attribute sets by this order reproduces the lectic enumeration order.
    static bool value_less(const Bitset& a, const Bitset& b) {
        a.check_same_width(b);
        for (std::size_t i = a.words_.size(); i-- > 0;)
            if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
        return false;
    }

    // Smallest set bit, or -1 when empty.
    int lowest() const {
        for (std::size_t i = 0; i < words_.size(); ++i)
            if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
        return -1;
    }

    // Keeps bits with index > i, clears the rest.
    void keep_above(int i) {
        for (int w = 0; w < static_cast<int>(words_.size()); ++w) {
            if ((w + 1) * 64 <= i + 1) {
                words_[w] = 0;
            } else if (w * 64 > i) {
                break;
            } else {
                int drop = i + 1 - w * 64;  // in [1,64]
                words_[w] &= (drop >= 64) ? 0 : ~std::uint64_t{0} << drop;
            }
        }
    }

    template <class F>
    void for_each_set(F&& f) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                int b = std::countr_zero(w);
                f(static_cast<int>(wi * 64 + b));
                w &= w - 1;
            }
        }
    }

    std::vector<int> to_indices() const {
        std::vector<int> idx;
        idx.reserve(count());
        for_each_set([&](int i) { idx.push_back(i); });
        return idx;
    }

    static Bitset from_indices(int width, const std::vector<int>& idx) {
        Bitset b(width);
        for (int i : idx) b.set(i);
        return b;
    }

    // Fixed-width hex encoding of the value, most significant nibble first.
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        int ndig = (width_ + 3) / 4;
        std::string s(ndig == 0 ? 1 : ndig, '0');
        for (int d = 0; d < ndig; ++d) {
            int lo = 4 * d;
            unsigned v = 0;
            for (int b = 0; b < 4 && lo + b < width_; ++b)
                v |= static_cast<unsigned>((words_[(lo + b) >> 6] >> ((lo + b) & 63)) & 1u) << b;
            s[s.size() - 1 - d] = digits[v];
        }
        return s;
    }

    static Bitset from_hex(int width, std::string_view s) {
        Bitset b(width);
        int ndig = static_cast<int>(s.size());
        if (ndig != (width + 3) / 4)
            throw std::invalid_argument("Bitset::from_hex: expected " +
                                        std::to_string((width + 3) / 4) + " digits, got " +
                                        std::to_string(ndig));
        for (int d = 0; d < ndig; ++d) {
            char c = s[ndig - 1 - d];
            unsigned v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = 10 + (c - 'a');
            else if (c >= 'A' && c <= 'F') v = 10 + (c - 'A');
            else throw std::invalid_argument("Bitset::from_hex: bad digit");
            for (int bit = 0; bit < 4; ++bit) {
                if (!(v >> bit & 1u)) continue;
                int i = 4 * d + bit;
                if (i >= width) throw std::invalid_argument("Bitset::from_hex: value exceeds width");
                b.set(i);
            }
        }
        return b;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    void check_index(int i) const {
        if (i < 0 || i >= width_) throw std::out_of_range("Bitset: index out of range");
    }

    void check_same_width(const Bitset& o) const {
        if (width_ != o.width_)
            throw std::invalid_argument("Bitset: width mismatch (" + std::to_string(width_) +
                                        " vs " + std::to_string(o.width_) + ")");
    }

    void trim() {
        int rem = width_ & 63;
        if (rem && !words_.empty()) words_.back() &= (~std::uint64_t{0}) >> (64 - rem);
    }

    int width_ = 0;
    std::vector<std::uint64_t> words_;
};

// Sets are always interpreted against an owning context: AttrSet width is the
// attribute count, ObjSet width the object count.
using AttrSet = Bitset;
using ObjSet = Bitset;

}  // namespace fca2vec
