#pragma once

#include <cstdint>
#include <vector>

#include "syz/errors.hpp"

namespace syz {

// Exact binomial coefficient in int64; the desk-scale ranges here stay far
// below overflow (n <= 64 in practice; guarded anyway).
inline std::int64_t binom64(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        std::int64_t num = n - k + i;
        if (r > INT64_MAX / num)
            throw internal_error("binom64: overflow");
        r = r * num / i;
    }
    return r;
}

// Lexicographically ordered p-subsets of {0,...,n-1}; fixes the basis order
// of every wedge power so matrix encodings are stable.
class WedgeIndexer {
  public:
    WedgeIndexer(int n, int p) : n_(n), p_(p), dim_(binom64(n, p)) {}

    int n() const { return n_; }
    int p() const { return p_; }
    std::int64_t dim() const { return dim_; }

    std::vector<int> unrank(std::int64_t idx) const {
        std::vector<int> s;
        s.reserve(static_cast<std::size_t>(p_));
        int lo = 0;
        for (int slot = p_; slot > 0; --slot) {
            for (int v = lo;; ++v) {
                std::int64_t block = binom64(n_ - v - 1, slot - 1);
                if (idx < block) {
                    s.push_back(v);
                    lo = v + 1;
                    break;
                }
                idx -= block;
            }
        }
        return s;
    }

    std::int64_t rank(const std::vector<int>& subset) const {
        std::int64_t idx = 0;
        int lo = 0;
        int slot = p_;
        for (int v : subset) {
            for (int w = lo; w < v; ++w)
                idx += binom64(n_ - w - 1, slot - 1);
            lo = v + 1;
            --slot;
        }
        return idx;
    }

  private:
    int n_, p_;
    std::int64_t dim_;
};

} // namespace syz
