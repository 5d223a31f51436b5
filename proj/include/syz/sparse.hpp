#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "syz/errors.hpp"
#include "syz/field.hpp"

namespace syz {

template <Field K>
struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    K val;
};

// Immutable sparse matrix. Entries are kept sorted by (row, col) with no
// explicit zeros, so equal matrices have equal encodings.
template <Field K>
class SparseMatrix {
  public:
    SparseMatrix() : nrows_(0), ncols_(0) {}

    static SparseMatrix from_triplets(std::uint32_t nrows, std::uint32_t ncols,
                                      std::vector<Entry<K>> entries) {
        std::sort(entries.begin(), entries.end(), [](const Entry<K>& a, const Entry<K>& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        std::vector<Entry<K>> merged;
        merged.reserve(entries.size());
        for (auto& e : entries) {
            if (e.row >= nrows || e.col >= ncols)
                throw internal_error("SparseMatrix: index out of range");
            if (!merged.empty() && merged.back().row == e.row &&
                merged.back().col == e.col)
                merged.back().val = merged.back().val + e.val;
            else
                merged.push_back(e);
        }
        std::erase_if(merged, [](const Entry<K>& e) { return e.val.is_zero(); });
        SparseMatrix m;
        m.nrows_ = nrows;
        m.ncols_ = ncols;
        m.entries_ = std::move(merged);
        return m;
    }

    static SparseMatrix zero(std::uint32_t nrows, std::uint32_t ncols) {
        return from_triplets(nrows, ncols, {});
    }

    static SparseMatrix identity(std::uint32_t n) {
        std::vector<Entry<K>> e;
        e.reserve(n);
        for (std::uint32_t i = 0; i < n; ++i)
            e.push_back({i, i, K::one()});
        return from_triplets(n, n, std::move(e));
    }

    static SparseMatrix from_dense_rows(const std::vector<std::vector<K>>& rows,
                                        std::uint32_t ncols) {
        std::vector<Entry<K>> e;
        for (std::uint32_t i = 0; i < rows.size(); ++i)
            for (std::uint32_t j = 0; j < rows[i].size(); ++j)
                if (!rows[i][j].is_zero())
                    e.push_back({i, j, rows[i][j]});
        return from_triplets(static_cast<std::uint32_t>(rows.size()), ncols,
                             std::move(e));
    }

    std::uint32_t nrows() const { return nrows_; }
    std::uint32_t ncols() const { return ncols_; }
    const std::vector<Entry<K>>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }

    SparseMatrix transpose() const {
        std::vector<Entry<K>> e;
        e.reserve(entries_.size());
        for (const auto& x : entries_)
            e.push_back({x.col, x.row, x.val});
        return from_triplets(ncols_, nrows_, std::move(e));
    }

    std::vector<std::vector<std::pair<std::uint32_t, K>>> rows() const {
        std::vector<std::vector<std::pair<std::uint32_t, K>>> r(nrows_);
        for (const auto& e : entries_)
            r[e.row].emplace_back(e.col, e.val);
        return r;
    }

    std::vector<std::vector<K>> dense() const {
        std::vector<std::vector<K>> d(nrows_, std::vector<K>(ncols_, K::zero()));
        for (const auto& e : entries_)
            d[e.row][e.col] = e.val;
        return d;
    }

    bool operator==(const SparseMatrix& o) const {
        if (nrows_ != o.nrows_ || ncols_ != o.ncols_ ||
            entries_.size() != o.entries_.size())
            return false;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            if (entries_[i].row != o.entries_[i].row ||
                entries_[i].col != o.entries_[i].col ||
                !(entries_[i].val == o.entries_[i].val))
                return false;
        return true;
    }

  private:
    std::uint32_t nrows_, ncols_;
    std::vector<Entry<K>> entries_;
};

// SMS sparse text format: "nrows ncols M", one 1-indexed "i j value" line per
// entry, closed by "0 0 0".
template <Field K>
void write_sms(std::ostream& os, const SparseMatrix<K>& m) {
    os << m.nrows() << ' ' << m.ncols() << " M\n";
    for (const auto& e : m.entries())
        os << e.row + 1 << ' ' << e.col + 1 << ' ' << e.val.str() << '\n';
    os << "0 0 0\n";
}

template <Field K>
SparseMatrix<K> read_sms(std::istream& is) {
    std::uint32_t nrows = 0, ncols = 0;
    std::string marker;
    if (!(is >> nrows >> ncols >> marker) || marker != "M")
        throw model_error("SMS: bad header");
    std::vector<Entry<K>> entries;
    for (;;) {
        long long i = 0, j = 0;
        std::string val;
        if (!(is >> i >> j >> val))
            throw model_error("SMS: truncated stream");
        if (i == 0 && j == 0)
            break;
        if (i < 1 || j < 1)
            throw model_error("SMS: bad index");
        entries.push_back({static_cast<std::uint32_t>(i - 1),
                           static_cast<std::uint32_t>(j - 1), K::parse(val)});
    }
    return SparseMatrix<K>::from_triplets(nrows, ncols, std::move(entries));
}

} // namespace syz
