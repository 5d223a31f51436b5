#pragma once

#include <map>
#include <vector>

#include "syz/curve.hpp"
#include "syz/poly.hpp"
#include "syz/subspace.hpp"

namespace syz {

// Pole-bounded coefficient encoding, fixed once and shared by every module:
// on each component a section of omega^m(div) is num(t)/den(t) * (dt)^m with
//   den = prod (t-x)^max(mult,0) over finite divisor points
//         * prod (t-b)^max(m,0) over node branch parameters,
//   deg num <= deg den + mult_infinity - 2m.
// The global coefficient vector stacks the numerator coefficients of all
// components (ascending degree, components in order).
template <Field K>
struct CompLayout {
    std::vector<std::pair<K, int>> den; // (point, exponent>0), sorted by point
    int num_deg = -1;                   // < 0 means the zero block
    std::uint32_t offset = 0;

    std::uint32_t size() const {
        return num_deg < 0 ? 0u : static_cast<std::uint32_t>(num_deg) + 1;
    }
    int den_exp_at(const K& x) const {
        for (const auto& [pt, e] : den)
            if (pt == x)
                return e;
        return 0;
    }
    Poly<K> den_without(const K& x) const {
        Poly<K> r = Poly<K>::constant(K::one());
        for (const auto& [pt, e] : den) {
            if (pt == x)
                continue;
            for (int i = 0; i < e; ++i)
                r = r * Poly<K>::linear_root(pt);
        }
        return r;
    }
    std::map<K, int> den_map() const {
        std::map<K, int> m;
        for (const auto& [pt, e] : den)
            m[pt] = e;
        return m;
    }
};

template <Field K>
struct SectionLayout {
    std::vector<CompLayout<K>> comps;
    std::uint32_t total = 0;
};

// Pole allowance at a node branch: the omega exponent plus any divisor
// multiplicity sitting on the branch parameter. Divisor entries at branch
// parameters encode mixed restrictions (e.g. a bundle restricting to
// K_C(-D) on one component and a plain divisor class on another); they
// shift the trivialized matching order at that branch.
template <Field K>
int branch_allowance(const SheafSpec<K>& S, const BranchPoint<K>& p) {
    const auto& fin = S.div.finite(p.comp);
    auto it = fin.find(p.param);
    return S.omega_exp + (it == fin.end() ? 0 : it->second);
}

template <Field K>
SectionLayout<K> section_layout(const GluedCurve<K>& X, const SheafSpec<K>& S) {
    if (S.div.ncomps() != X.ncomps())
        throw model_error("sheaf: divisor component count mismatch");
    const int m = S.omega_exp;
    SectionLayout<K> layout;
    layout.comps.resize(X.ncomps());
    std::uint32_t offset = 0;
    for (std::uint32_t c = 0; c < X.ncomps(); ++c) {
        auto& cl = layout.comps[c];
        std::map<K, int> den;
        for (const auto& [pt, mult] : S.div.finite(c))
            if (mult > 0 && !X.is_node_param(c, pt))
                den[pt] = mult;
        for (const K& b : X.branch_params(c)) {
            int a = branch_allowance(S, BranchPoint<K>{c, b});
            if (a > 0)
                den[b] += a;
        }
        int den_deg = 0;
        for (const auto& [pt, e] : den) {
            cl.den.emplace_back(pt, e);
            den_deg += e;
        }
        cl.num_deg = den_deg + S.div.infinity(c) - 2 * m;
        cl.offset = offset;
        offset += cl.size();
    }
    layout.total = offset;
    return layout;
}

// Row functional over a component block: w[l] = coefficient of (t-x)^order
// in t^l / den(t). Exact in any characteristic (synthetic Taylor shifts and
// power-series inversion, no factorials).
template <Field K>
std::vector<K> laurent_functional(const CompLayout<K>& cl, const K& x, int order) {
    std::vector<K> w(cl.size(), K::zero());
    if (cl.size() == 0)
        return w;
    const int ex = cl.den_exp_at(x);
    const int n = order + ex;
    if (n < 0)
        return w;
    Poly<K> rest = cl.den_without(x);
    std::vector<K> inv = series_inverse(rest.taylor_at(x, n + 1), n + 1);
    std::vector<K> T(static_cast<std::size_t>(n) + 1, K::zero());
    T[0] = K::one(); // Taylor coefficients of t^l at x, updated in place
    for (int l = 0; l <= cl.num_deg; ++l) {
        if (l > 0) {
            for (int s = n; s >= 1; --s)
                T[static_cast<std::size_t>(s)] =
                    x * T[static_cast<std::size_t>(s)] + T[static_cast<std::size_t>(s - 1)];
            T[0] = x * T[0];
        }
        K acc = K::zero();
        const int smax = std::min(l, n);
        for (int s = 0; s <= smax; ++s)
            acc = acc + T[static_cast<std::size_t>(s)] * inv[static_cast<std::size_t>(n - s)];
        w[static_cast<std::size_t>(l)] = acc;
    }
    return w;
}

template <Field K>
K laurent_coeff(const CompLayout<K>& cl, const std::vector<K>& coeffs,
                std::uint32_t comp_start, const K& x, int order) {
    auto w = laurent_functional(cl, x, order);
    K acc = K::zero();
    for (std::uint32_t l = 0; l < w.size(); ++l)
        acc = acc + w[l] * coeffs[comp_start + l];
    return acc;
}

template <Field K>
struct SectionSpace {
    SheafSpec<K> spec;
    SectionLayout<K> layout;
    Subspace<K> basis;

    int h0() const { return static_cast<int>(basis.dim()); }
    const std::vector<std::vector<K>>& vectors() const { return basis.basis(); }
    Poly<K> numerator_on(const std::vector<K>& v, std::uint32_t comp) const {
        const auto& cl = layout.comps[comp];
        std::vector<K> c(v.begin() + cl.offset, v.begin() + cl.offset + cl.size());
        return Poly<K>(std::move(c));
    }
};

namespace detail {

template <Field K>
SparseRow<K> compress_row(SparseRow<K> row) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseRow<K> out;
    for (auto& [c, v] : row) {
        if (!out.empty() && out.back().first == c)
            out.back().second = out.back().second + v;
        else
            out.emplace_back(c, v);
    }
    std::erase_if(out, [](const auto& e) { return e.second.is_zero(); });
    return out;
}

} // namespace detail

// Exact basis of H^0: the kernel of the node-matching and vanishing
// constraints on the stacked numerator coefficients. Node condition for
// omega-exponent m with gluing lambda^k:
//   lead_a = (-1)^m lambda^k lead_b,
// where lead is the coefficient of (t-branch)^(-m); this is value matching
// for m=0 and residue cancellation for m=1.
template <Field K>
SectionSpace<K> section_basis(const GluedCurve<K>& X, const SheafSpec<K>& S) {
    SectionLayout<K> layout = section_layout(X, S);
    const int m = S.omega_exp;
    std::vector<SparseRow<K>> rows;

    auto block = [&](SparseRow<K>& row, const BranchPoint<K>& p, int order,
                     const K& scale) {
        const auto& cl = layout.comps[p.comp];
        auto w = laurent_functional(cl, p.param, order);
        for (std::uint32_t l = 0; l < w.size(); ++l)
            if (!w[l].is_zero())
                row.emplace_back(cl.offset + l, scale * w[l]);
    };

    for (const auto& n : X.nodes()) {
        const int aa = branch_allowance(S, n.a);
        const int ab = branch_allowance(S, n.b);
        SparseRow<K> row;
        block(row, n.a, -aa, K::one());
        K s = field_pow(n.lambda, static_cast<long long>(S.lambda_exp));
        if (((m % 2) + 2) % 2 == 1)
            s = -s;
        block(row, n.b, -ab, -s);
        row = detail::compress_row(std::move(row));
        if (!row.empty())
            rows.push_back(std::move(row));
        // negative allowance means the sections vanish at the branch
        for (const auto& [p, a] : {std::pair{n.a, aa}, {n.b, ab}}) {
            for (int j = 0; j < -a; ++j) {
                SparseRow<K> vrow;
                block(vrow, p, j, K::one());
                vrow = detail::compress_row(std::move(vrow));
                if (!vrow.empty())
                    rows.push_back(std::move(vrow));
            }
        }
    }
    for (std::uint32_t c = 0; c < X.ncomps(); ++c) {
        for (const auto& [pt, mult] : S.div.finite(c)) {
            if (mult >= 0 || X.is_node_param(c, pt))
                continue;
            for (int j = 0; j < -mult; ++j) {
                SparseRow<K> row;
                block(row, {c, pt}, j, K::one());
                row = detail::compress_row(std::move(row));
                if (!row.empty())
                    rows.push_back(std::move(row));
            }
        }
    }

    Echelon<K> ech = echelonize(std::move(rows), layout.total);
    Subspace<K> basis = Subspace<K>::from_rows(layout.total, kernel_rows(ech));
    return SectionSpace<K>{S, std::move(layout), std::move(basis)};
}

template <Field K>
int h0(const GluedCurve<K>& X, const SheafSpec<K>& S) {
    return section_basis(X, S).h0();
}

template <Field K>
int h1(const GluedCurve<K>& X, const SheafSpec<K>& S) {
    return section_basis(X, S.serre_dual()).h0();
}

namespace detail {

// Re-shape num / prod (t-x)^have[x] into a target component layout; exact
// division failures mean the value does not lie in the target sheaf.
template <Field K>
Poly<K> fit_block(Poly<K> num, const std::map<K, int>& have,
                  const CompLayout<K>& target) {
    std::map<K, int> want = target.den_map();
    for (const auto& [x, e] : have) {
        int delta = (want.count(x) ? want[x] : 0) - e;
        want.erase(x);
        if (delta > 0) {
            for (int i = 0; i < delta; ++i)
                num = num * Poly<K>::linear_root(x);
        } else if (delta < 0) {
            auto q = num.div_linear_power(x, -delta);
            if (!q)
                throw model_error("section: pole exceeds the target layout");
            num = *q;
        }
    }
    for (const auto& [x, e] : want)
        for (int i = 0; i < e; ++i)
            num = num * Poly<K>::linear_root(x);
    if (num.degree() > target.num_deg)
        throw model_error("section: pole at infinity exceeds the target layout");
    return num;
}

} // namespace detail

// Componentwise product of two sections, written in the layout of the
// product sheaf (which the caller supplies, normally from a cached space).
template <Field K>
std::vector<K> multiply_sections(const SectionSpace<K>& A, const std::vector<K>& a,
                                 const SectionSpace<K>& B, const std::vector<K>& b,
                                 const SectionLayout<K>& target) {
    std::vector<K> out(target.total, K::zero());
    for (std::uint32_t c = 0; c < target.comps.size(); ++c) {
        Poly<K> num = A.numerator_on(a, c) * B.numerator_on(b, c);
        std::map<K, int> have = A.layout.comps[c].den_map();
        for (const auto& [x, e] : B.layout.comps[c].den_map())
            have[x] += e;
        Poly<K> fitted = detail::fit_block(std::move(num), have, target.comps[c]);
        for (int l = 0; l <= fitted.degree(); ++l)
            out[target.comps[c].offset + static_cast<std::uint32_t>(l)] =
                fitted.coeff(l);
    }
    return out;
}

// Same rational function, different layout (e.g. dropping a pole allowance
// once a product is known to be regular there).
template <Field K>
std::vector<K> reencode_section(const SectionLayout<K>& from, const std::vector<K>& v,
                                const SectionLayout<K>& to) {
    std::vector<K> out(to.total, K::zero());
    for (std::uint32_t c = 0; c < to.comps.size(); ++c) {
        const auto& cf = from.comps[c];
        std::vector<K> cs(v.begin() + cf.offset, v.begin() + cf.offset + cf.size());
        Poly<K> fitted =
            detail::fit_block(Poly<K>(std::move(cs)), cf.den_map(), to.comps[c]);
        for (int l = 0; l <= fitted.degree(); ++l)
            out[to.comps[c].offset + static_cast<std::uint32_t>(l)] = fitted.coeff(l);
    }
    return out;
}

// Basis sigma_0,...,sigma_r with vanishing order at u exactly k, leading
// Taylor coefficient normalized to one. Throws when the vanishing filtration
// at u is degenerate (ramification); callers resample u.
template <Field K>
std::vector<std::vector<K>> adapted_basis(const SectionSpace<K>& L,
                                          const BranchPoint<K>& u) {
    const auto& cl = L.layout.comps[u.comp];
    if (cl.den_exp_at(u.param) > 0)
        throw model_error("adapted basis: bundle has a pole at the marked point");
    const int dim = L.h0();
    std::vector<std::vector<K>> vecs = L.vectors();
    if (dim == 0)
        return vecs;
    const int nterms = cl.num_deg + 1;
    std::vector<K> inv =
        series_inverse(cl.den_without(u.param).taylor_at(u.param, nterms), nterms);
    std::vector<std::vector<K>> ser(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        auto tn = L.numerator_on(vecs[static_cast<std::size_t>(i)], u.comp)
                      .taylor_at(u.param, nterms);
        ser[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(nterms),
                                                K::zero());
        for (int s = 0; s < nterms; ++s) {
            K acc = K::zero();
            for (int j = 0; j <= s; ++j)
                acc = acc + tn[static_cast<std::size_t>(j)] *
                                inv[static_cast<std::size_t>(s - j)];
            ser[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)] = acc;
        }
    }
    std::vector<std::vector<K>> out;
    std::vector<int> alive(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i)
        alive[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < dim; ++k) {
        if (k >= nterms)
            throw model_error("adapted basis: degenerate vanishing filtration");
        int chosen = -1;
        for (std::size_t ai = 0; ai < alive.size(); ++ai) {
            if (!ser[static_cast<std::size_t>(alive[ai])][static_cast<std::size_t>(k)]
                     .is_zero()) {
                chosen = static_cast<int>(ai);
                break;
            }
        }
        if (chosen < 0)
            throw model_error("adapted basis: degenerate vanishing filtration");
        int i = alive[static_cast<std::size_t>(chosen)];
        K c = ser[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].inv();
        for (auto& x : ser[static_cast<std::size_t>(i)])
            x = x * c;
        for (auto& x : vecs[static_cast<std::size_t>(i)])
            x = x * c;
        alive.erase(alive.begin() + chosen);
        for (int j : alive) {
            K f = ser[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            if (f.is_zero())
                continue;
            for (int s = 0; s < nterms; ++s)
                ser[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] =
                    ser[static_cast<std::size_t>(j)][static_cast<std::size_t>(s)] -
                    f * ser[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)];
            for (std::uint32_t s = 0; s < vecs[static_cast<std::size_t>(j)].size(); ++s)
                vecs[static_cast<std::size_t>(j)][s] =
                    vecs[static_cast<std::size_t>(j)][s] -
                    f * vecs[static_cast<std::size_t>(i)][s];
        }
        out.push_back(vecs[static_cast<std::size_t>(i)]);
    }
    return out;
}

// Sections whose restriction to the given component vanishes identically.
template <Field K>
std::vector<std::vector<K>> sections_vanishing_on(const SectionSpace<K>& L,
                                                  std::uint32_t comp) {
    const auto& cl = L.layout.comps[comp];
    const auto& B = L.vectors();
    std::vector<Entry<K>> entries;
    for (std::uint32_t l = 0; l < cl.size(); ++l)
        for (std::uint32_t j = 0; j < B.size(); ++j) {
            K v = B[j][cl.offset + l];
            if (!v.is_zero())
                entries.push_back({l, j, v});
        }
    auto m = SparseMatrix<K>::from_triplets(
        cl.size(), static_cast<std::uint32_t>(B.size()), std::move(entries));
    auto ker = kernel_basis(m);
    std::vector<std::vector<K>> out;
    for (const auto& combo : ker.basis()) {
        std::vector<K> v(L.layout.total, K::zero());
        for (std::uint32_t j = 0; j < B.size(); ++j) {
            if (combo[j].is_zero())
                continue;
            for (std::uint32_t s = 0; s < L.layout.total; ++s)
                v[s] = v[s] + combo[j] * B[j][s];
        }
        out.push_back(std::move(v));
    }
    return out;
}

// Sheaf with prescribed special index: s=0 by a random effective twist,
// s=1 as omega(-D). Retries random choices; genuinely impossible degree
// bookkeeping raises infeasible_error.
template <Field K>
SheafSpec<K> special_bundle(const GluedCurve<K>& X, int d, int s, Rng& rng,
                            int tries = 48) {
    const int g = X.genus();
    if (s == 0) {
        if (d < g - 1)
            throw infeasible_error("special_bundle: h1=0 impossible below degree g-1");
        for (int t = 0; t < tries; ++t) {
            Rng sub = rng.child(static_cast<std::uint64_t>(t) + 101);
            auto L = SheafSpec<K>::bundle(random_effective_divisor(X, d, sub));
            if (h1(X, L) == 0)
                return L;
        }
        throw infeasible_error("special_bundle: no nonspecial witness found");
    }
    if (s == 1) {
        const int degD = 2 * g - 2 - d;
        if (degD < 0)
            throw infeasible_error("special_bundle: d > 2g-2 with h1 >= 1");
        for (int t = 0; t < tries; ++t) {
            Rng sub = rng.child(static_cast<std::uint64_t>(t) + 2020);
            SheafSpec<K> L{1, 0, -random_effective_divisor(X, degD, sub)};
            if (h1(X, L) == 1 && h0(X, L) == d - g + 2)
                return L;
        }
        throw infeasible_error("special_bundle: no h1=1 witness found");
    }
    throw infeasible_error("special_bundle: target h1 > 1 needs special divisors "
                           "that generic models do not carry");
}

} // namespace syz
