#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "syz/elim.hpp"

namespace syz {

// Linear subspace of K^ambient held as a reduced-echelon row basis, which is
// canonical: two subspaces are equal iff their representations are.
template <Field K>
class Subspace {
  public:
    Subspace() : ambient_(0) {}

    static Subspace zero(std::uint32_t ambient) {
        Subspace s;
        s.ambient_ = ambient;
        return s;
    }

    static Subspace full(std::uint32_t ambient) {
        std::vector<std::vector<K>> rows(ambient,
                                         std::vector<K>(ambient, K::zero()));
        for (std::uint32_t i = 0; i < ambient; ++i)
            rows[i][i] = K::one();
        return from_rows(ambient, std::move(rows));
    }

    static Subspace from_rows(std::uint32_t ambient,
                              std::vector<std::vector<K>> rows) {
        std::vector<SparseRow<K>> sparse;
        sparse.reserve(rows.size());
        for (const auto& r : rows) {
            if (r.size() != ambient)
                throw internal_error("Subspace: row length mismatch");
            SparseRow<K> sr;
            for (std::uint32_t c = 0; c < ambient; ++c)
                if (!r[c].is_zero())
                    sr.emplace_back(c, r[c]);
            sparse.push_back(std::move(sr));
        }
        return from_echelon(echelonize(std::move(sparse), ambient));
    }

    static Subspace from_echelon(const Echelon<K>& ech) {
        Subspace s;
        s.ambient_ = ech.ncols;
        s.pivots_ = ech.pivot_cols;
        s.rows_.reserve(ech.rows.size());
        for (const auto& r : ech.rows) {
            std::vector<K> dense(ech.ncols, K::zero());
            for (const auto& [c, v] : r)
                dense[c] = v;
            s.rows_.push_back(std::move(dense));
        }
        return s;
    }

    std::uint32_t ambient() const { return ambient_; }
    std::uint32_t dim() const { return static_cast<std::uint32_t>(rows_.size()); }
    const std::vector<std::vector<K>>& basis() const { return rows_; }
    const std::vector<std::uint32_t>& pivots() const { return pivots_; }

    // v reduced modulo the subspace; zero iff v is a member.
    std::vector<K> reduce(std::vector<K> v) const {
        check_ambient(v);
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            K c = v[pivots_[r]];
            if (c.is_zero())
                continue;
            for (std::uint32_t j = 0; j < ambient_; ++j)
                v[j] = v[j] - c * rows_[r][j];
        }
        return v;
    }

    bool contains(const std::vector<K>& v) const {
        for (const K& x : reduce(v))
            if (!x.is_zero())
                return false;
        return true;
    }

    // Coordinates of v in the echelon basis, if v lies in the subspace.
    std::optional<std::vector<K>> express(const std::vector<K>& v) const {
        check_ambient(v);
        std::vector<K> coords(rows_.size(), K::zero());
        std::vector<K> rem = v;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            K c = rem[pivots_[r]];
            coords[r] = c;
            if (c.is_zero())
                continue;
            for (std::uint32_t j = 0; j < ambient_; ++j)
                rem[j] = rem[j] - c * rows_[r][j];
        }
        for (const K& x : rem)
            if (!x.is_zero())
                return std::nullopt;
        return coords;
    }

    static Subspace sum(const Subspace& a, const Subspace& b) {
        check_pair(a, b);
        std::vector<std::vector<K>> rows = a.rows_;
        rows.insert(rows.end(), b.rows_.begin(), b.rows_.end());
        return from_rows(a.ambient_, std::move(rows));
    }

    // Zassenhaus: echelonize [A|A; B|0]; rows with zero left half carry the
    // intersection in their right half.
    static Subspace intersection(const Subspace& a, const Subspace& b) {
        check_pair(a, b);
        std::uint32_t n = a.ambient_;
        std::vector<SparseRow<K>> rows;
        for (const auto& r : a.rows_) {
            SparseRow<K> sr;
            for (std::uint32_t c = 0; c < n; ++c)
                if (!r[c].is_zero()) {
                    sr.emplace_back(c, r[c]);
                    sr.emplace_back(c + n, r[c]);
                }
            std::sort(sr.begin(), sr.end());
            rows.push_back(std::move(sr));
        }
        for (const auto& r : b.rows_) {
            SparseRow<K> sr;
            for (std::uint32_t c = 0; c < n; ++c)
                if (!r[c].is_zero())
                    sr.emplace_back(c, r[c]);
            rows.push_back(std::move(sr));
        }
        Echelon<K> ech = echelonize(std::move(rows), 2 * n);
        std::vector<std::vector<K>> inter;
        for (std::size_t i = 0; i < ech.rows.size(); ++i) {
            if (ech.pivot_cols[i] < n)
                continue;
            std::vector<K> dense(n, K::zero());
            for (const auto& [c, v] : ech.rows[i])
                dense[c - n] = v;
            inter.push_back(std::move(dense));
        }
        return from_rows(n, std::move(inter));
    }

    // dim of a/(a n b).
    static std::int64_t quotient_dim(const Subspace& a, const Subspace& b) {
        return static_cast<std::int64_t>(a.dim()) -
               static_cast<std::int64_t>(intersection(a, b).dim());
    }

    bool operator==(const Subspace& o) const {
        return ambient_ == o.ambient_ && pivots_ == o.pivots_ && rows_ == o.rows_;
    }

  private:
    void check_ambient(const std::vector<K>& v) const {
        if (v.size() != ambient_)
            throw internal_error("Subspace: ambient dimension mismatch");
    }
    static void check_pair(const Subspace& a, const Subspace& b) {
        if (a.ambient_ != b.ambient_)
            throw model_error("Subspace: ambient dimension mismatch");
    }

    std::uint32_t ambient_;
    std::vector<std::vector<K>> rows_;
    std::vector<std::uint32_t> pivots_;
};

template <Field K>
Subspace<K> kernel_basis(const SparseMatrix<K>& m,
                         PivotOrder order = PivotOrder::forward) {
    Echelon<K> ech = echelonize(m, order);
    return Subspace<K>::from_rows(m.ncols(), kernel_rows(ech));
}

// Row space as a subspace.
template <Field K>
Subspace<K> row_space(const SparseMatrix<K>& m) {
    return Subspace<K>::from_echelon(echelonize(m));
}

} // namespace syz
