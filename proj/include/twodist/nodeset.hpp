// Fixed-capacity bitset over graph nodes. Sized for county-level dual graphs
// (256 nodes covers every US state's county count); the hot enumeration loops
// run entirely on these.
#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>

namespace twodist {

inline constexpr int kMaxNodes = 256;

struct NodeSet {
    std::array<std::uint64_t, 4> w{};

    static NodeSet single(int i) {
        NodeSet s;
        s.set(i);
        return s;
    }
    // {0, 1, ..., n-1}
    static NodeSet full(int n) {
        NodeSet s;
        for (int i = 0; i < n / 64; ++i) s.w[i] = ~std::uint64_t{0};
        if (n % 64) s.w[n / 64] = (std::uint64_t{1} << (n % 64)) - 1;
        return s;
    }

    void set(int i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(int i) { w[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    bool test(int i) const { return (w[i >> 6] >> (i & 63)) & 1; }

    bool empty() const { return (w[0] | w[1] | w[2] | w[3]) == 0; }
    bool any() const { return !empty(); }
    int count() const {
        return std::popcount(w[0]) + std::popcount(w[1]) + std::popcount(w[2]) +
               std::popcount(w[3]);
    }
    int lowest() const {  // index of lowest set bit; -1 if empty
        for (int i = 0; i < 4; ++i)
            if (w[i]) return i * 64 + std::countr_zero(w[i]);
        return -1;
    }

    NodeSet operator&(const NodeSet& o) const {
        return {{w[0] & o.w[0], w[1] & o.w[1], w[2] & o.w[2], w[3] & o.w[3]}};
    }
    NodeSet operator|(const NodeSet& o) const {
        return {{w[0] | o.w[0], w[1] | o.w[1], w[2] | o.w[2], w[3] | o.w[3]}};
    }
    NodeSet operator~() const { return {{~w[0], ~w[1], ~w[2], ~w[3]}}; }
    // set difference
    NodeSet operator-(const NodeSet& o) const {
        return {{w[0] & ~o.w[0], w[1] & ~o.w[1], w[2] & ~o.w[2], w[3] & ~o.w[3]}};
    }
    NodeSet& operator|=(const NodeSet& o) {
        for (int i = 0; i < 4; ++i) w[i] |= o.w[i];
        return *this;
    }
    NodeSet& operator&=(const NodeSet& o) {
        for (int i = 0; i < 4; ++i) w[i] &= o.w[i];
        return *this;
    }
    NodeSet& operator-=(const NodeSet& o) {
        for (int i = 0; i < 4; ++i) w[i] &= ~o.w[i];
        return *this;
    }

    bool intersects(const NodeSet& o) const {
        return ((w[0] & o.w[0]) | (w[1] & o.w[1]) | (w[2] & o.w[2]) | (w[3] & o.w[3])) != 0;
    }
    bool is_subset_of(const NodeSet& o) const {
        return ((w[0] & ~o.w[0]) | (w[1] & ~o.w[1]) | (w[2] & ~o.w[2]) | (w[3] & ~o.w[3])) == 0;
    }

    bool operator==(const NodeSet& o) const = default;
    // lexicographic on words, usable as a map key
    bool operator<(const NodeSet& o) const {
        for (int i = 3; i >= 0; --i)
            if (w[i] != o.w[i]) return w[i] < o.w[i];
        return false;
    }

    // Visits set bits in ascending index order.
    template <typename F>
    void for_each(F&& f) const {
        for (int i = 0; i < 4; ++i) {
            std::uint64_t x = w[i];
            while (x) {
                f(i * 64 + std::countr_zero(x));
                x &= x - 1;
            }
        }
    }

    std::size_t hash() const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (std::uint64_t x : w) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

struct NodeSetHash {
    std::size_t operator()(const NodeSet& s) const { return s.hash(); }
};

}  // namespace twodist
