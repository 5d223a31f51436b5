#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "syz/combin.hpp"
#include "syz/sections.hpp"

namespace syz {

// Euler form of the weight-(p+1) strand: k_{p,1} - k_{p-1,2} for 1 <= p <= r-1.
inline long long euler_b(int g, int r, int d, int p) {
    if (p < 1 || p > r - 1)
        throw std::invalid_argument("euler_b: need 1 <= p <= r-1");
    return binom64(r + 1, p) * (g - d + r) - binom64(r + 1, p + 1) * g +
           binom64(r - 1, p) * d + binom64(r, p + 1) * (g - 1);
}

// Koszul complex of (X, L) against a twisting sheaf F and a subspace W of
// H^0(L): differentials
//   d_{p,q} : wedge^p W (x) H^0(F L^q) -> wedge^{p-1} W (x) H^0(F L^{q+1}),
//   w_1^...^w_p (x) s |-> sum_k (-1)^k w_1^...^{w_k dropped}^...^w_p (x) w_k s.
// Wedge bases are ordered lexicographically by index tuple; basis element
// (S, j) sits at column rank(S)*h0_q + j, which fixes every matrix encoding.
template <Field K>
class KoszulComplex {
  public:
    using MatrixSink =
        std::function<void(const std::string&, const SparseMatrix<K>&)>;

    KoszulComplex(const GluedCurve<K>& X, SheafSpec<K> L, SheafSpec<K> twist,
                  std::vector<std::vector<K>> W, std::uint64_t cap = 2'000'000)
        : X_(&X), L_(std::move(L)), twist_(std::move(twist)), W_(std::move(W)),
          cap_(cap) {}

    static KoszulComplex untwisted(const GluedCurve<K>& X, const SheafSpec<K>& L,
                                   std::uint64_t cap = 2'000'000) {
        return KoszulComplex(X, L, SheafSpec<K>::structure(X.ncomps()),
                             section_basis(X, L).vectors(), cap);
    }
    static KoszulComplex with_twist(const GluedCurve<K>& X, const SheafSpec<K>& L,
                                    const SheafSpec<K>& F,
                                    std::uint64_t cap = 2'000'000) {
        return KoszulComplex(X, L, F, section_basis(X, L).vectors(), cap);
    }

    int n() const { return static_cast<int>(W_.size()); }
    const GluedCurve<K>& curve() const { return *X_; }
    const SheafSpec<K>& bundle() const { return L_; }

    const SectionSpace<K>& space(int q) {
        auto it = spaces_.find(q);
        if (it == spaces_.end())
            it = spaces_.emplace(q, section_basis(*X_, twist_.tensor(L_.power(q))))
                     .first;
        return it->second;
    }

    // d_{p,q}; zero-sized maps come back as empty matrices of the right shape.
    SparseMatrix<K> matrix(int p, int q) {
        const long long cols_w = binom64(n(), p);
        const long long rows_w = p >= 1 ? binom64(n(), p - 1) : 0;
        const int h0q = space(q).h0();
        const int h0q1 = space(q + 1).h0();
        const auto nrows = static_cast<std::uint32_t>(rows_w * h0q1);
        const auto ncols = static_cast<std::uint32_t>(cols_w * h0q);
        if (static_cast<std::uint64_t>(nrows) * ncols > cap_)
            throw cap_error("koszul: matrix size " + std::to_string(nrows) + "x" +
                            std::to_string(ncols) + " exceeds cap " +
                            std::to_string(cap_));
        if (p < 1 || p > n() || h0q == 0)
            return SparseMatrix<K>::zero(nrows, ncols);

        const auto& prods = products(q);
        WedgeIndexer src(n(), p);
        WedgeIndexer dst(n(), p - 1);
        std::vector<Entry<K>> entries;
        for (long long si = 0; si < src.dim(); ++si) {
            std::vector<int> S = src.unrank(si);
            for (int j = 0; j < h0q; ++j) {
                const auto col = static_cast<std::uint32_t>(si * h0q + j);
                for (int k = 1; k <= p; ++k) {
                    const int ik = S[static_cast<std::size_t>(k - 1)];
                    std::vector<int> T;
                    T.reserve(static_cast<std::size_t>(p - 1));
                    for (int x : S)
                        if (x != ik)
                            T.push_back(x);
                    const long long ti = dst.rank(T);
                    const bool negative = (k % 2) == 1;
                    const auto& coords =
                        prods[static_cast<std::size_t>(ik)][static_cast<std::size_t>(j)];
                    for (int l = 0; l < h0q1; ++l) {
                        const K& c = coords[static_cast<std::size_t>(l)];
                        if (c.is_zero())
                            continue;
                        entries.push_back(
                            {static_cast<std::uint32_t>(ti * h0q1 + l), col,
                             negative ? -c : c});
                    }
                }
            }
        }
        auto m = SparseMatrix<K>::from_triplets(nrows, ncols, std::move(entries));
        if (sink_)
            sink_("d_p" + std::to_string(p) + "_q" + std::to_string(q), m);
        return m;
    }

    long long rank_d(int p, int q) {
        if (p < 1 || p > n())
            return 0;
        auto key = std::make_pair(p, q);
        auto it = ranks_.find(key);
        if (it == ranks_.end())
            it = ranks_.emplace(key, rank(matrix(p, q))).first;
        return it->second;
    }

    // k_{p,q} = dim ker d_{p,q} - rank d_{p+1,q-1}
    long long dim_cell(int p, int q) {
        if (p < 0 || p > n())
            return 0;
        const long long total = binom64(n(), p) * space(q).h0();
        const long long k = total - rank_d(p, q) - rank_d(p + 1, q - 1);
        if (k < 0)
            throw internal_error("koszul: negative cohomology dimension");
        return k;
    }

    Subspace<K> kernel(int p, int q) { return kernel_basis(matrix(p, q)); }
    Subspace<K> image(int p, int q) {
        return row_space(matrix(p, q).transpose());
    }

    void set_sink(MatrixSink sink) { sink_ = std::move(sink); }

  private:
    // products(q)[i][j] = coordinates of W_i * basis_j(H^0(F L^q)) in the
    // echelon basis of H^0(F L^{q+1}); shared by every p at this weight.
    const std::vector<std::vector<std::vector<K>>>& products(int q) {
        auto it = prods_.find(q);
        if (it != prods_.end())
            return it->second;
        const SectionSpace<K>& src = space(q);
        const SectionSpace<K>& dst = space(q + 1);
        const SectionSpace<K>& SL = Lspace();
        std::vector<std::vector<std::vector<K>>> table(W_.size());
        for (std::size_t i = 0; i < W_.size(); ++i) {
            table[i].resize(static_cast<std::size_t>(src.h0()));
            for (int j = 0; j < src.h0(); ++j) {
                auto prod = multiply_sections(SL, W_[i], src,
                                              src.vectors()[static_cast<std::size_t>(j)],
                                              dst.layout);
                auto coords = dst.basis.express(prod);
                if (!coords)
                    throw internal_error("koszul: product escapes the section space");
                table[i][static_cast<std::size_t>(j)] = std::move(*coords);
            }
        }
        return prods_.emplace(q, std::move(table)).first->second;
    }

    const SectionSpace<K>& Lspace() {
        if (!Lspace_)
            Lspace_ = section_basis(*X_, L_);
        return *Lspace_;
    }

    const GluedCurve<K>* X_;
    SheafSpec<K> L_, twist_;
    std::vector<std::vector<K>> W_;
    std::uint64_t cap_;
    std::map<int, SectionSpace<K>> spaces_;
    std::map<int, std::vector<std::vector<std::vector<K>>>> prods_;
    std::map<std::pair<int, int>, long long> ranks_;
    std::optional<SectionSpace<K>> Lspace_;
    MatrixSink sink_;
};

struct DualityCell {
    int p, q;
    long long lhs; // k_{p,q}(X, L)
    long long rhs; // k_{r-1-p,2-q}(X, L; omega)
};

struct DualityReport {
    std::vector<DualityCell> cells;
    bool all_equal = true;
};

struct BettiTable {
    int g = 0, r = 0, d = 0, h1 = 0;
    long long rho = 0;
    std::vector<std::array<long long, 5>> grid; // [p][q+1], q in -1..3
    bool euler_ok = true;
    bool duality_ok = true;
    // whether k_{r-1,2} agrees with rho; a genericity report, never asserted
    bool rho_matches = true;

    long long at(int p, int q) const {
        if (p < 0 || p > r || q < -1 || q > 3)
            return 0;
        return grid[static_cast<std::size_t>(p)][static_cast<std::size_t>(q + 1)];
    }
};

template <Field K>
DualityReport duality_check(KoszulComplex<K>& plain, KoszulComplex<K>& dual,
                            int r) {
    DualityReport rep;
    for (int p = 0; p <= r; ++p) {
        for (int q = -1; q <= 3; ++q) {
            long long lhs = plain.dim_cell(p, q);
            long long rhs = dual.dim_cell(r - 1 - p, 2 - q);
            rep.cells.push_back({p, q, lhs, rhs});
            if (lhs != rhs)
                rep.all_equal = false;
        }
    }
    return rep;
}

template <Field K>
BettiTable betti_table(const GluedCurve<K>& X, const SheafSpec<K>& L,
                       std::uint64_t cap = 2'000'000, bool with_duality = true,
                       DualityReport* duality_out = nullptr) {
    BettiTable t;
    t.g = X.genus();
    t.d = static_cast<int>(L.degree(X));
    t.h1 = h1(X, L);
    auto plain = KoszulComplex<K>::untwisted(X, L, cap);
    t.r = plain.n() - 1;
    t.rho = static_cast<long long>(t.g) -
            static_cast<long long>(t.r + 1) * (t.g - t.d + t.r);
    t.grid.assign(static_cast<std::size_t>(t.r) + 1, {0, 0, 0, 0, 0});
    for (int p = 0; p <= t.r; ++p)
        for (int q = -1; q <= 3; ++q)
            t.grid[static_cast<std::size_t>(p)][static_cast<std::size_t>(q + 1)] =
                plain.dim_cell(p, q);
    for (int p = 1; p <= t.r - 1; ++p)
        if (t.at(p, 1) - t.at(p - 1, 2) != euler_b(t.g, t.r, t.d, p))
            t.euler_ok = false;
    if (t.r >= 1)
        t.rho_matches = t.at(t.r - 1, 2) == t.rho;
    if (with_duality) {
        auto dual = KoszulComplex<K>::with_twist(X, L,
                                                 SheafSpec<K>::dualizing(X.ncomps()),
                                                 cap);
        DualityReport rep = duality_check(plain, dual, t.r);
        t.duality_ok = rep.all_equal;
        if (duality_out)
            *duality_out = std::move(rep);
    }
    return t;
}

// Table 2 orientation: weight q increases upward, index p increases leftward.
inline std::string betti_ascii(const BettiTable& t) {
    std::string out;
    out += "Betti table  g=" + std::to_string(t.g) + " r=" + std::to_string(t.r) +
           " d=" + std::to_string(t.d) + " h1=" + std::to_string(t.h1) +
           " rho=" + std::to_string(t.rho) + "\n";
    std::size_t width = 1;
    for (int p = 0; p <= t.r; ++p)
        for (int q = -1; q <= 3; ++q)
            width = std::max(width, std::to_string(t.at(p, q)).size());
    for (int q = 3; q >= -1; --q) {
        std::string line = "q=" + std::to_string(q) + (q >= 0 ? " " : "") + " |";
        for (int p = t.r; p >= 0; --p) {
            std::string cell = std::to_string(t.at(p, q));
            line += std::string(width + 1 - cell.size(), ' ') + cell;
        }
        out += line + "\n";
    }
    std::string footer = "      ";
    for (int p = t.r; p >= 0; --p) {
        std::string cell = "p" + std::to_string(p);
        footer += std::string(width + 1 > cell.size() ? width + 1 - cell.size() : 1, ' ') + cell;
    }
    out += footer + "\n";
    out += std::string("euler_ok=") + (t.euler_ok ? "true" : "false") +
           " duality_ok=" + (t.duality_ok ? "true" : "false") +
           " rho_row_match=" + (t.rho_matches ? "true" : "false") + "\n";
    return out;
}

} // namespace syz
