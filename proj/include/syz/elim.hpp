#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <vector>

#include "syz/errors.hpp"
#include "syz/sparse.hpp"

namespace syz {

template <Field K>
using SparseRow = std::vector<std::pair<std::uint32_t, K>>;

// Reference pivoting rule: rows are consumed in input order and each new
// pivot is the first nonzero column of the reduced row. `reverse` feeds rows
// backwards; ranks must agree, which the tests exercise.
enum class PivotOrder { forward, reverse };

template <Field K>
struct Echelon {
    std::uint32_t ncols = 0;
    std::vector<SparseRow<K>> rows;       // reduced echelon, unit pivots
    std::vector<std::uint32_t> pivot_cols; // ascending, parallel to rows
    std::uint32_t rank() const { return static_cast<std::uint32_t>(rows.size()); }
};

namespace detail {

template <Field K>
void subtract_multiple(SparseRow<K>& target, const K& factor,
                       const SparseRow<K>& src) {
    SparseRow<K> out;
    out.reserve(target.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < target.size() || j < src.size()) {
        if (j == src.size() ||
            (i < target.size() && target[i].first < src[j].first)) {
            out.push_back(target[i++]);
        } else if (i == target.size() || src[j].first < target[i].first) {
            out.emplace_back(src[j].first, -(factor * src[j].second));
            ++j;
        } else {
            K v = target[i].second - factor * src[j].second;
            if (!v.is_zero())
                out.emplace_back(target[i].first, v);
            ++i;
            ++j;
        }
    }
    target = std::move(out);
}

} // namespace detail

template <Field K>
Echelon<K> echelonize(std::vector<SparseRow<K>> input, std::uint32_t ncols,
                      PivotOrder order = PivotOrder::forward) {
    if (order == PivotOrder::reverse)
        std::reverse(input.begin(), input.end());

    Echelon<K> ech;
    ech.ncols = ncols;
    std::vector<std::int32_t> pivot_row_of(ncols, -1);
    std::vector<K> acc(ncols, K::zero());
    std::vector<char> queued(ncols, 0);
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>,
                        std::greater<std::uint32_t>>
        pq;

    for (auto& row : input) {
        for (auto& [c, v] : row) {
            if (c >= ncols)
                throw internal_error("echelonize: column out of range");
            acc[c] = acc[c] + v;
            if (!queued[c]) {
                queued[c] = 1;
                pq.push(c);
            }
        }
        SparseRow<K> kept;
        std::int32_t pivot = -1;
        while (!pq.empty()) {
            std::uint32_t c = pq.top();
            pq.pop();
            queued[c] = 0;
            K v = acc[c];
            if (v.is_zero())
                continue;
            std::int32_t pr = pivot_row_of[c];
            if (pr >= 0) {
                // cancel against the unit pivot; fill-in lies right of c
                const auto& prow = ech.rows[static_cast<std::size_t>(pr)];
                for (std::size_t k = 1; k < prow.size(); ++k) {
                    std::uint32_t cc = prow[k].first;
                    acc[cc] = acc[cc] - v * prow[k].second;
                    if (!queued[cc] && !acc[cc].is_zero()) {
                        queued[cc] = 1;
                        pq.push(cc);
                    }
                }
                acc[c] = K::zero();
            } else {
                if (pivot < 0)
                    pivot = static_cast<std::int32_t>(c);
                kept.emplace_back(c, v);
                acc[c] = K::zero();
            }
        }
        if (pivot >= 0) {
            K inv = kept.front().second.inv();
            for (auto& [c, v] : kept)
                v = v * inv;
            pivot_row_of[static_cast<std::uint32_t>(pivot)] =
                static_cast<std::int32_t>(ech.rows.size());
            ech.rows.push_back(std::move(kept));
            ech.pivot_cols.push_back(static_cast<std::uint32_t>(pivot));
        }
    }

    // sort rows by pivot column
    std::vector<std::size_t> perm(ech.rows.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        return ech.pivot_cols[a] < ech.pivot_cols[b];
    });
    std::vector<SparseRow<K>> rows_sorted;
    std::vector<std::uint32_t> piv_sorted;
    rows_sorted.reserve(perm.size());
    piv_sorted.reserve(perm.size());
    for (std::size_t i : perm) {
        rows_sorted.push_back(std::move(ech.rows[i]));
        piv_sorted.push_back(ech.pivot_cols[i]);
    }
    ech.rows = std::move(rows_sorted);
    ech.pivot_cols = std::move(piv_sorted);

    // back-substitution: clear each pivot column above its row
    for (std::size_t i = ech.rows.size(); i-- > 0;) {
        std::uint32_t p = ech.pivot_cols[i];
        for (std::size_t j = 0; j < i; ++j) {
            auto& rj = ech.rows[j];
            auto it = std::lower_bound(
                rj.begin(), rj.end(), p,
                [](const std::pair<std::uint32_t, K>& e, std::uint32_t c) {
                    return e.first < c;
                });
            if (it != rj.end() && it->first == p)
                detail::subtract_multiple(rj, it->second, ech.rows[i]);
        }
    }
    return ech;
}

template <Field K>
Echelon<K> echelonize(const SparseMatrix<K>& m,
                      PivotOrder order = PivotOrder::forward) {
    return echelonize(m.rows(), m.ncols(), order);
}

template <Field K>
std::uint32_t rank(const SparseMatrix<K>& m,
                   PivotOrder order = PivotOrder::forward) {
    return echelonize(m, order).rank();
}

// Dense right-kernel rows read off the reduced echelon form, one per free
// column (value 1 there, zeros at the other free columns).
template <Field K>
std::vector<std::vector<K>> kernel_rows(const Echelon<K>& ech) {
    std::vector<char> is_pivot(ech.ncols, 0);
    for (std::uint32_t p : ech.pivot_cols)
        is_pivot[p] = 1;
    std::vector<std::vector<K>> out;
    for (std::uint32_t f = 0; f < ech.ncols; ++f) {
        if (is_pivot[f])
            continue;
        std::vector<K> v(ech.ncols, K::zero());
        v[f] = K::one();
        for (std::size_t r = 0; r < ech.rows.size(); ++r) {
            for (const auto& [c, val] : ech.rows[r]) {
                if (c == f) {
                    v[ech.pivot_cols[r]] = -val;
                    break;
                }
            }
        }
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace syz
