#pragma once

#include <vector>

#include "syz/combin.hpp"
#include "syz/poly.hpp"
#include "syz/sparse.hpp"
#include "syz/subspace.hpp"

namespace syz {

// Rational curve t -> [f_0(t), ..., f_r(t)]; common polynomial factors are
// divided out on construction so the entries are coprime.
template <Field K>
struct ParamCurve {
    std::vector<Poly<K>> coords;

    explicit ParamCurve(std::vector<Poly<K>> cs) : coords(std::move(cs)) {
        if (coords.size() < 2)
            throw model_error("param curve: need at least two coordinates");
        Poly<K> g;
        for (const auto& c : coords)
            g = poly_gcd(g, c);
        if (g.degree() > 0)
            for (auto& c : coords)
                c = poly_divexact(c, g);
        if (degree() < 1)
            throw model_error("param curve: constant map");
    }

    int ambient() const { return static_cast<int>(coords.size()) - 1; }
    int degree() const {
        int d = -1;
        for (const auto& c : coords)
            d = std::max(d, c.degree());
        return d;
    }
    std::vector<Poly<K>> derivative() const {
        std::vector<Poly<K>> ds;
        ds.reserve(coords.size());
        for (const auto& c : coords)
            ds.push_back(c.derivative());
        return ds;
    }
};

template <Field K>
ParamCurve<K> rational_normal_curve(int d) {
    std::vector<Poly<K>> cs;
    for (int i = 0; i <= d; ++i)
        cs.push_back(Poly<K>::monomial(i));
    return ParamCurve<K>(std::move(cs));
}

// Projection of the rational normal curve of degree 2r-3 away from the odd
// coordinate points below 2r-5: exponents (0, 2, ..., 2r-6, 2r-5, 2r-4, 2r-3).
// The image has a unique singular point at t=0 (a cusp for r >= 5).
template <Field K>
ParamCurve<K> cuspidal_projection(int r) {
    if (r < 5)
        throw std::invalid_argument("cuspidal_projection: need r >= 5");
    std::vector<Poly<K>> cs;
    for (int e = 0; e <= 2 * r - 6; e += 2)
        cs.push_back(Poly<K>::monomial(e));
    for (int e = 2 * r - 5; e <= 2 * r - 3; ++e)
        cs.push_back(Poly<K>::monomial(e));
    return ParamCurve<K>(std::move(cs));
}

// Quadric forms on P^n are stored as coefficient vectors over the monomials
// x_i x_j (i <= j, lexicographic); the symmetric-matrix view halves the
// off-diagonal coefficients.
inline std::uint32_t quadric_dim(int n) {
    return static_cast<std::uint32_t>((n + 1) * (n + 2) / 2);
}
inline std::uint32_t quadric_index(int n, int i, int j) {
    if (i > j)
        std::swap(i, j);
    return static_cast<std::uint32_t>(i * (n + 1) - i * (i - 1) / 2 + (j - i));
}

template <Field K>
class Quadric {
  public:
    Quadric(int n, std::vector<K> form) : n_(n), form_(std::move(form)) {
        if (form_.size() != quadric_dim(n))
            throw internal_error("quadric: bad coefficient count");
    }
    static Quadric zero(int n) {
        return Quadric(n, std::vector<K>(quadric_dim(n), K::zero()));
    }

    int ambient() const { return n_; }
    const std::vector<K>& form() const { return form_; }
    bool is_zero() const {
        for (const auto& c : form_)
            if (!c.is_zero())
                return false;
        return true;
    }

    Quadric operator+(const Quadric& o) const {
        std::vector<K> f(form_);
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = f[i] + o.form_[i];
        return Quadric(n_, std::move(f));
    }
    Quadric operator-() const {
        std::vector<K> f(form_);
        for (auto& c : f)
            c = -c;
        return Quadric(n_, std::move(f));
    }
    Quadric operator-(const Quadric& o) const { return *this + (-o); }
    Quadric operator*(const K& a) const {
        std::vector<K> f(form_);
        for (auto& c : f)
            c = c * a;
        return Quadric(n_, std::move(f));
    }
    bool operator==(const Quadric& o) const {
        return n_ == o.n_ && form_ == o.form_;
    }

    K matrix_entry(int i, int j) const {
        K c = form_[quadric_index(n_, i, j)];
        return i == j ? c : c / K::from_int(2);
    }

    // symmetric (n+1)x(n+1) matrix, exact halves off the diagonal
    SparseMatrix<K> matrix() const {
        std::vector<Entry<K>> e;
        for (int i = 0; i <= n_; ++i)
            for (int j = 0; j <= n_; ++j) {
                K v = matrix_entry(i, j);
                if (!v.is_zero())
                    e.push_back({static_cast<std::uint32_t>(i),
                                 static_cast<std::uint32_t>(j), v});
            }
        return SparseMatrix<K>::from_triplets(
            static_cast<std::uint32_t>(n_ + 1),
            static_cast<std::uint32_t>(n_ + 1), std::move(e));
    }

    Poly<K> eval(const std::vector<Poly<K>>& x) const {
        Poly<K> acc;
        for (int i = 0; i <= n_; ++i)
            for (int j = i; j <= n_; ++j) {
                const K& c = form_[quadric_index(n_, i, j)];
                if (!c.is_zero())
                    acc = acc + x[static_cast<std::size_t>(i)] *
                                    x[static_cast<std::size_t>(j)] * c;
            }
        return acc;
    }

    // 2 * B_Q(x, y): doubled polarized form, integral in the form coefficients
    Poly<K> polarized2(const std::vector<Poly<K>>& x,
                       const std::vector<Poly<K>>& y) const {
        Poly<K> acc;
        for (int i = 0; i <= n_; ++i)
            for (int j = i; j <= n_; ++j) {
                const K& c = form_[quadric_index(n_, i, j)];
                if (c.is_zero())
                    continue;
                Poly<K> term;
                if (i == j)
                    term = x[static_cast<std::size_t>(i)] *
                           y[static_cast<std::size_t>(i)] * K::from_int(2);
                else
                    term = x[static_cast<std::size_t>(i)] *
                               y[static_cast<std::size_t>(j)] +
                           x[static_cast<std::size_t>(j)] *
                               y[static_cast<std::size_t>(i)];
                acc = acc + term * c;
            }
        return acc;
    }

  private:
    int n_;
    std::vector<K> form_;
};

namespace detail {

// Linear system rows: one row per t-coefficient of the given polynomial
// contribution of each quadric monomial.
template <Field K>
void append_coeff_rows(std::vector<SparseRow<K>>& rows,
                       const std::vector<Poly<K>>& contribs) {
    int maxdeg = -1;
    for (const auto& p : contribs)
        maxdeg = std::max(maxdeg, p.degree());
    for (int k = 0; k <= maxdeg; ++k) {
        SparseRow<K> row;
        for (std::uint32_t u = 0; u < contribs.size(); ++u) {
            K c = contribs[u].coeff(k);
            if (!c.is_zero())
                row.emplace_back(u, c);
        }
        if (!row.empty())
            rows.push_back(std::move(row));
    }
}

// evaluation contributions: monomial x_i x_j contributes x_i(t) x_j(t)
template <Field K>
std::vector<Poly<K>> eval_contribs(int n, const std::vector<Poly<K>>& x) {
    std::vector<Poly<K>> contribs(quadric_dim(n));
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            contribs[quadric_index(n, i, j)] =
                x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    return contribs;
}

// doubled polarized contributions of 2 B_Q(x, y), integral in the form
template <Field K>
std::vector<Poly<K>> polarized_contribs(int n, const std::vector<Poly<K>>& x,
                                        const std::vector<Poly<K>>& y) {
    std::vector<Poly<K>> contribs(quadric_dim(n));
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
            Poly<K> p;
            if (i == j)
                p = x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)] *
                    K::from_int(2);
            else
                p = x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] +
                    x[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(i)];
            contribs[quadric_index(n, i, j)] = std::move(p);
        }
    return contribs;
}

} // namespace detail

// Vanishing of Q on every component image: Q(c(t)) identically zero, decided
// by exact coefficient comparison.
template <Field K>
std::vector<SparseRow<K>> through_rows(const std::vector<ParamCurve<K>>& comps) {
    if (comps.empty())
        throw model_error("quadrics: no components");
    const int n = comps[0].ambient();
    std::vector<SparseRow<K>> rows;
    for (const auto& c : comps) {
        if (c.ambient() != n)
            throw model_error("quadrics: mixed ambient dimensions");
        detail::append_coeff_rows(rows, detail::eval_contribs<K>(n, c.coords));
    }
    return rows;
}

// Vanishing on every tangent line: Q(c) = 0, B_Q(c, c') = 0 and Q(c') = 0
// identically in t. The polarized row alone is the t-derivative of the first
// and adds nothing; the Q(c') rows are what cut the tangent lines out.
template <Field K>
std::vector<SparseRow<K>> tangential_rows(const std::vector<ParamCurve<K>>& comps) {
    std::vector<SparseRow<K>> rows = through_rows(comps);
    const int n = comps[0].ambient();
    for (const auto& c : comps) {
        auto d = c.derivative();
        detail::append_coeff_rows(rows,
                                  detail::polarized_contribs<K>(n, c.coords, d));
        detail::append_coeff_rows(rows, detail::eval_contribs<K>(n, d));
    }
    return rows;
}

template <Field K>
Subspace<K> quadrics_through(const ParamCurve<K>& c) {
    std::vector<ParamCurve<K>> v{c};
    auto rows = through_rows(v);
    return Subspace<K>::from_rows(
        quadric_dim(c.ambient()),
        kernel_rows(echelonize(std::move(rows), quadric_dim(c.ambient()))));
}

template <Field K>
Subspace<K> tangential_quadrics(const ParamCurve<K>& c) {
    std::vector<ParamCurve<K>> v{c};
    auto rows = tangential_rows(v);
    return Subspace<K>::from_rows(
        quadric_dim(c.ambient()),
        kernel_rows(echelonize(std::move(rows), quadric_dim(c.ambient()))));
}

// 2x2 minor x_a x_{b+1} - x_{a+1} x_b of the degree-d symbol matrix, with the
// convention delta(a,b) = -delta(b,a) and delta(a,a) = 0.
template <Field K>
Quadric<K> delta_minor(int a, int b, int d) {
    if (a == b)
        return Quadric<K>::zero(d);
    if (a > b)
        return -delta_minor<K>(b, a, d);
    if (a < 0 || b > d - 1)
        throw std::invalid_argument("delta_minor: need 0 <= a < b <= d-1");
    std::vector<K> f(quadric_dim(d), K::zero());
    f[quadric_index(d, a, b + 1)] = f[quadric_index(d, a, b + 1)] + K::one();
    f[quadric_index(d, a + 1, b)] = f[quadric_index(d, a + 1, b)] - K::one();
    return Quadric<K>(d, std::move(f));
}

// gamma(a,b) = delta(a+2,b) - 2 delta(a+1,b+1) + delta(a,b+2); vanishes on
// the tangential variety of the rational normal curve.
template <Field K>
Quadric<K> gamma_quadric(int a, int b, int d) {
    if (a < 0 || b < 0 || a > d - 3 || b > d - 3)
        throw std::invalid_argument("gamma_quadric: need 0 <= a,b <= d-3");
    return delta_minor<K>(a + 2, b, d) -
           delta_minor<K>(a + 1, b + 1, d) * K::from_int(2) +
           delta_minor<K>(a, b + 2, d);
}

struct TcQuadricCount {
    int r = 0;
    long long direct = 0;     // dim of quadrics through the tangential variety
                              // of the projected curve, in P^r
    long long structured = 0; // gamma-span members singular along the center
    long long formula = 0;    // binom(r-4, 2)
    long long strat_low = 0;  // antidiagonal strata 4 <= k <= 2r-3
    long long strat_high = 0; // antidiagonal strata 2r-3 < k <= 4r-10
};

// Both computations of the projected tangential quadric count: the direct
// kernel in P^r and the center-of-projection count inside the gamma span in
// P^{2r-3}, stratified over antidiagonals.
template <Field K>
TcQuadricCount count_tc_quadrics(int r) {
    if (r < 5)
        throw std::invalid_argument("count_tc_quadrics: need r >= 5");
    TcQuadricCount out;
    out.r = r;
    out.formula = binom64(r - 4, 2);
    out.direct =
        static_cast<long long>(tangential_quadrics(cuspidal_projection<K>(r)).dim());

    const int d = 2 * r - 3;
    // center of projection: the odd coordinate points below 2r-5
    std::vector<int> center;
    for (int i = 1; i <= 2 * r - 7; i += 2)
        center.push_back(i);
    std::vector<std::uint32_t> cond_coords;
    for (int i : center)
        for (int j = 0; j <= d; ++j)
            cond_coords.push_back(quadric_index(d, i, j));
    std::sort(cond_coords.begin(), cond_coords.end());
    cond_coords.erase(std::unique(cond_coords.begin(), cond_coords.end()),
                      cond_coords.end());

    auto constrained_dim = [&](const std::vector<Quadric<K>>& gens) -> long long {
        if (gens.empty())
            return 0;
        std::vector<std::vector<K>> rows;
        for (const auto& g : gens)
            rows.push_back(g.form());
        auto span = Subspace<K>::from_rows(quadric_dim(d), rows);
        // rank of the span basis restricted to the condition coordinates
        std::vector<Entry<K>> entries;
        for (std::uint32_t i = 0; i < span.dim(); ++i)
            for (std::uint32_t cidx = 0; cidx < cond_coords.size(); ++cidx) {
                const K& v = span.basis()[i][cond_coords[cidx]];
                if (!v.is_zero())
                    entries.push_back({i, cidx, v});
            }
        auto m = SparseMatrix<K>::from_triplets(
            span.dim(), static_cast<std::uint32_t>(cond_coords.size()),
            std::move(entries));
        return static_cast<long long>(span.dim()) - rank(m);
    };

    std::vector<Quadric<K>> all;
    for (int a = 0; a <= d - 3; ++a)
        for (int b = a + 1; b <= d - 3; ++b)
            all.push_back(gamma_quadric<K>(a, b, d));
    out.structured = constrained_dim(all);

    long long strat_total = 0;
    for (int k = 4; k <= 4 * r - 10; ++k) {
        std::vector<Quadric<K>> stratum;
        for (int a = 0; a <= d - 3; ++a) {
            int b = k - 3 - a;
            if (b > a && b <= d - 3)
                stratum.push_back(gamma_quadric<K>(a, b, d));
        }
        long long c = constrained_dim(stratum);
        strat_total += c;
        if (k <= 2 * r - 3)
            out.strat_low += c;
        else
            out.strat_high += c;
    }
    if (strat_total != out.structured)
        throw internal_error("count_tc_quadrics: stratified sum mismatch");
    return out;
}

} // namespace syz
