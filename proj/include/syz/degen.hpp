#pragma once

#include <optional>
#include <string>
#include <vector>

#include "syz/koszul.hpp"
#include "syz/quadrics.hpp"

namespace syz {

// ---------------------------------------------------------------------------
// multiplication maps

// mu : S^2 H^0(L) -> H^0(L^2) over the monomial basis sigma_i sigma_j,
// i <= j, indexed like quadric forms so kernel vectors are quadrics in the
// sigma coordinates.
template <Field K>
SparseMatrix<K> mu_matrix_s2(const SectionSpace<K>& SL, const SectionSpace<K>& SL2) {
    const int r = SL.h0() - 1;
    const auto& B = SL.vectors();
    std::vector<Entry<K>> entries;
    for (int i = 0; i <= r; ++i)
        for (int j = i; j <= r; ++j) {
            auto prod = multiply_sections(SL, B[static_cast<std::size_t>(i)], SL,
                                          B[static_cast<std::size_t>(j)], SL2.layout);
            auto coords = SL2.basis.express(prod);
            if (!coords)
                throw internal_error("mu: product escapes H0(L^2)");
            const std::uint32_t col = quadric_index(r, i, j);
            for (std::uint32_t l = 0; l < coords->size(); ++l)
                if (!(*coords)[l].is_zero())
                    entries.push_back({l, col, (*coords)[l]});
        }
    return SparseMatrix<K>::from_triplets(static_cast<std::uint32_t>(SL2.h0()),
                                          quadric_dim(r), std::move(entries));
}

// full tensor-level multiplication A (x) B -> target, column (i, j) at
// i * dim(B) + j
template <Field K>
SparseMatrix<K> mu_matrix_tensor(const SectionSpace<K>& A,
                                 const std::vector<std::vector<K>>& avecs,
                                 const SectionSpace<K>& B,
                                 const std::vector<std::vector<K>>& bvecs,
                                 const SectionSpace<K>& target) {
    std::vector<Entry<K>> entries;
    for (std::size_t i = 0; i < avecs.size(); ++i)
        for (std::size_t j = 0; j < bvecs.size(); ++j) {
            auto prod = multiply_sections(A, avecs[i], B, bvecs[j], target.layout);
            auto coords = target.basis.express(prod);
            if (!coords)
                throw internal_error("mu: product escapes the target space");
            const auto col = static_cast<std::uint32_t>(i * bvecs.size() + j);
            for (std::uint32_t l = 0; l < coords->size(); ++l)
                if (!(*coords)[l].is_zero())
                    entries.push_back({l, col, (*coords)[l]});
        }
    return SparseMatrix<K>::from_triplets(
        static_cast<std::uint32_t>(target.h0()),
        static_cast<std::uint32_t>(avecs.size() * bvecs.size()),
        std::move(entries));
}

// ---------------------------------------------------------------------------
// maximal rank witnesses

struct MrcTrial {
    int index = 0;
    int s2_dim = 0;
    int h0_L2 = 0;
    int mu_rank = 0;
    std::string outcome; // injective / surjective / bijective / neither
};

struct MrcVerdict {
    int g = 0, r = 0, d = 0, h1 = 0;
    long long rho = 0;
    std::uint64_t seed = 0;
    std::vector<MrcTrial> trials;
    bool any_maximal = false;
};

template <Field K>
using MatrixSink = typename KoszulComplex<K>::MatrixSink;

// Random nodal witness carrying a g^r_d; a single maximal-rank trial
// certifies the general curve by semicontinuity, failures stay recorded.
template <Field K>
MrcVerdict mrc_check(int g, int r, int d, std::uint64_t seed, int trials = 3,
                     MatrixSink<K> sink = {}) {
    MrcVerdict v;
    v.g = g;
    v.r = r;
    v.d = d;
    v.h1 = g - d + r;
    v.rho = static_cast<long long>(g) -
            static_cast<long long>(r + 1) * (g - d + r);
    v.seed = seed;
    if (v.h1 < 0 || v.h1 > 1)
        throw infeasible_error("mrc: witness construction needs h1 in {0,1}");
    if (v.rho < 0)
        throw infeasible_error("mrc: negative Brill-Noether number");
    Rng master(seed);
    for (int t = 0; t < trials; ++t) {
        Rng rng = master.child(static_cast<std::uint64_t>(t));
        auto X = random_nodal_curve<K>(g, rng);
        auto L = special_bundle(X, d, v.h1, rng);
        auto SL = section_basis(X, L);
        if (SL.h0() != r + 1)
            throw internal_error("mrc: witness is not a g^r_d");
        auto SL2 = section_basis(X, L.power(2));
        auto mu = mu_matrix_s2(SL, SL2);
        if (sink)
            sink("mu_s2_trial" + std::to_string(t), mu);
        MrcTrial trial;
        trial.index = t;
        trial.s2_dim = static_cast<int>(mu.ncols());
        trial.h0_L2 = SL2.h0();
        trial.mu_rank = static_cast<int>(rank(mu));
        const bool inj = trial.mu_rank == trial.s2_dim;
        const bool sur = trial.mu_rank == trial.h0_L2;
        trial.outcome = inj && sur ? "bijective"
                        : inj     ? "injective"
                        : sur     ? "surjective"
                                  : "neither";
        if (inj || sur)
            v.any_maximal = true;
        v.trials.push_back(std::move(trial));
    }
    return v;
}

// ---------------------------------------------------------------------------
// elliptic tails

template <Field K>
struct TailModel {
    GluedCurve<K> X0;
    SheafSpec<K> L0;
};

// X0 = C u E glued at u: E is a one-node rational component carrying the
// marked point v, and L0 restricts to L' on C and to O_E(v) on E. The tail's
// self-node gluing constant is 1 so lambda-twisted bundles restrict to
// honest divisor classes on E; the joining node is separating, so its
// constant is a free choice.
template <Field K>
TailModel<K> attach_elliptic_tail(const GluedCurve<K>& C, const SheafSpec<K>& Lp,
                                  const BranchPoint<K>& u, Rng& rng) {
    if (C.is_node_param(u.comp, u.param))
        throw model_error("attach: u must be a smooth point");
    const std::uint32_t e = C.ncomps();
    std::vector<CurveNode<K>> nodes = C.nodes();
    std::set<K> used;
    auto draw = [&] {
        K x = fresh_param(rng, used);
        used.insert(x);
        return x;
    };
    K alpha = draw(), beta = draw(), w = draw(), vpt = draw();
    nodes.push_back({{e, alpha}, {e, beta}, K::one()});
    nodes.push_back({{u.comp, u.param}, {e, w}, random_nonzero<K>(rng)});
    std::map<std::string, BranchPoint<K>> marked;
    for (const auto& [name, bp] : C.marked())
        if (!(bp.comp == u.comp && bp.param == u.param))
            marked.emplace(name, bp);
    marked.insert_or_assign("v", BranchPoint<K>{e, vpt});
    GluedCurve<K> X0(e + 1, std::move(nodes), std::move(marked));

    const int m = Lp.omega_exp;
    Divisor<K> div(e + 1);
    for (std::uint32_t c = 0; c < C.ncomps(); ++c) {
        for (const auto& [pt, mult] : Lp.div.finite(c))
            div = div + Divisor<K>::point(e + 1, {c, pt}, mult);
        div = div + Divisor<K>::at_infinity(e + 1, c, Lp.div.infinity(c));
    }
    div = div + Divisor<K>::point(e + 1, {e, vpt}, 1);
    if (m != 0) {
        // omega_{X0}^m restricts to K_C^m(m u) on C and O(m w) on E
        div = div + Divisor<K>::point(e + 1, u, -m) +
              Divisor<K>::point(e + 1, {e, w}, -m);
    }
    SheafSpec<K> L0{m, Lp.lambda_exp, std::move(div)};
    return {std::move(X0), std::move(L0)};
}

struct TailWeight0Report {
    int r = 0, p = 0;
    long long precond_k = 0; // k_{r-p,0}(C, L'; K_C)
    bool precond_ok = false;
    long long k_tail = 0; // k_{r-p,0}(X0, L0; omega_{X0})
    long long expected = 0;
    bool match = false;
};

// After attaching a tail, the weight-0 omega-twisted Koszul space is spanned
// by pure tensors from the sections vanishing on the tail: its dimension is
// binom(r, r-p), provided the corresponding space on C vanishes.
template <Field K>
TailWeight0Report tail_weight0_check(const GluedCurve<K>& C, const SheafSpec<K>& Lp,
                                     const TailModel<K>& tail, int p,
                                     std::uint64_t cap = 2'000'000) {
    TailWeight0Report rep;
    auto onC = KoszulComplex<K>::with_twist(C, Lp, SheafSpec<K>::dualizing(C.ncomps()), cap);
    rep.r = onC.n() - 1;
    rep.p = p;
    rep.precond_k = onC.dim_cell(rep.r - p, 0);
    rep.precond_ok = rep.precond_k == 0;
    auto onX0 = KoszulComplex<K>::with_twist(
        tail.X0, tail.L0, SheafSpec<K>::dualizing(tail.X0.ncomps()), cap);
    rep.k_tail = onX0.dim_cell(rep.r - p, 0);
    rep.expected = binom64(rep.r, rep.r - p);
    rep.match = rep.k_tail == rep.expected;
    return rep;
}

// ---------------------------------------------------------------------------
// obstruction classes

struct ObstructionReport {
    int g = 0, r = 0, d = 0, p = 0;
    long long class_count = 0;
    long long precond_k = 0;
    bool precond_ok = false;
    long long image_dim = 0;      // dim Im(delta_0)
    long long span_mod_image = 0; // classes modulo the image
    bool independent = false;
    long long kernel_dim = 0;  // weight-0 kernel of the K_C row
    long long spanning_gap = 0; // kernel vectors outside image + classes
    bool spanning = false;
    long long kernel2u_dim = 0; // weight-0 kernel of the K_C(2u) row
    long long bottom_expected = 0;
    bool bottom_exact = false;
    int omega_tries = 0;
};

// Classes delta_0(sigma_{i_1} ^ ... ^ sigma_{i_{r-p}} (x) omega') for
// 2 <= i_1 < ... < i_{r-p} <= r, with sigma adapted to u and omega' a form
// with a pole of order exactly two at u. The products sigma_i * omega' are
// regular at u (the sigmas vanish to order >= 2), so the classes live in the
// plain K_C strand and are reduced against its image subspace.
template <Field K>
ObstructionReport obstruction_classes(const GluedCurve<K>& C, const SheafSpec<K>& Lp,
                                      int p, const BranchPoint<K>& u,
                                      std::uint64_t seed,
                                      std::uint64_t cap = 2'000'000,
                                      MatrixSink<K> sink = {}) {
    ObstructionReport rep;
    rep.g = C.genus();
    rep.d = static_cast<int>(Lp.degree(C));
    rep.p = p;

    auto SL = section_basis(C, Lp);
    const int r = SL.h0() - 1;
    rep.r = r;
    if (p < 1 || p > r - 1)
        throw infeasible_error("obstruction: need 1 <= p <= r-1");
    const int w = r - p; // wedge size of the classes

    auto sigma = adapted_basis(SL, u);
    auto omega = SheafSpec<K>::dualizing(C.ncomps());
    auto twist2u = omega.twisted(Divisor<K>::point(C.ncomps(), u, 2));

    KoszulComplex<K> kcK(C, Lp, omega, sigma, cap);
    KoszulComplex<K> kcK2u(C, Lp, twist2u, sigma, cap);
    if (sink) {
        kcK.set_sink([sink](const std::string& n, const SparseMatrix<K>& m) {
            sink("omega_row_" + n, m);
        });
        kcK2u.set_sink([sink](const std::string& n, const SparseMatrix<K>& m) {
            sink("omega2u_row_" + n, m);
        });
    }

    rep.precond_k = kcK.dim_cell(w, 0);
    rep.precond_ok = rep.precond_k == 0;
    rep.class_count = binom64(r - 1, w);

    // omega' with pole order exactly two at u
    const auto& S2u = kcK2u.space(0);
    const auto& clu = S2u.layout.comps[u.comp];
    std::vector<K> omega_prime;
    Rng rng(seed);
    for (int tries = 0; tries < 64; ++tries) {
        ++rep.omega_tries;
        std::vector<K> cand(S2u.layout.total, K::zero());
        for (const auto& bvec : S2u.vectors()) {
            K c = random_scalar<K>(rng);
            for (std::uint32_t s = 0; s < cand.size(); ++s)
                cand[s] = cand[s] + c * bvec[s];
        }
        if (!laurent_coeff(clu, cand, clu.offset, u.param, -2).is_zero()) {
            omega_prime = std::move(cand);
            break;
        }
    }
    if (omega_prime.empty())
        throw model_error("obstruction: no form with a double pole at u");

    // class vectors in wedge^{w-1} W (x) H^0(K_C L')
    const auto& SKL = kcK.space(1);
    const auto& SKL2u = kcK2u.space(1);
    std::vector<std::vector<K>> prod_coords(static_cast<std::size_t>(r) + 1);
    for (int i = 2; i <= r; ++i) {
        auto prod = multiply_sections(SL, sigma[static_cast<std::size_t>(i)], S2u,
                                      omega_prime, SKL2u.layout);
        auto regular = reencode_section(SKL2u.layout, prod, SKL.layout);
        auto coords = SKL.basis.express(regular);
        if (!coords)
            throw internal_error("obstruction: class escapes H0(K_C L')");
        prod_coords[static_cast<std::size_t>(i)] = std::move(*coords);
    }
    WedgeIndexer dst(r + 1, w - 1);
    const int h0KL = SKL.h0();
    const std::uint32_t ambient =
        static_cast<std::uint32_t>(dst.dim() * h0KL);
    std::vector<std::vector<K>> classes;
    {
        std::vector<int> pool; // indices {2..r}
        for (int i = 2; i <= r; ++i)
            pool.push_back(i);
        WedgeIndexer sel(static_cast<int>(pool.size()), w);
        for (long long s = 0; s < sel.dim(); ++s) {
            auto pick = sel.unrank(s);
            std::vector<int> I;
            for (int q : pick)
                I.push_back(pool[static_cast<std::size_t>(q)]);
            std::vector<K> vec(ambient, K::zero());
            for (int k = 1; k <= w; ++k) {
                const int ik = I[static_cast<std::size_t>(k - 1)];
                std::vector<int> T;
                for (int x : I)
                    if (x != ik)
                        T.push_back(x);
                const long long ti = dst.rank(T);
                const bool neg = (k % 2) == 1;
                const auto& c = prod_coords[static_cast<std::size_t>(ik)];
                for (int l = 0; l < h0KL; ++l) {
                    K val = c[static_cast<std::size_t>(l)];
                    if (val.is_zero())
                        continue;
                    vec[static_cast<std::uint32_t>(ti * h0KL + l)] =
                        vec[static_cast<std::uint32_t>(ti * h0KL + l)] +
                        (neg ? -val : val);
                }
            }
            classes.push_back(std::move(vec));
        }
    }

    auto image = kcK.image(w, 0);
    rep.image_dim = image.dim();
    auto together = Subspace<K>::sum(
        image, Subspace<K>::from_rows(ambient, classes));
    rep.span_mod_image = static_cast<long long>(together.dim()) - rep.image_dim;
    rep.independent = rep.span_mod_image == rep.class_count;

    auto kernel = kcK.kernel(w - 1, 1);
    rep.kernel_dim = kernel.dim();
    rep.spanning_gap = 0;
    for (const auto& kv : kernel.basis())
        if (!together.contains(kv))
            ++rep.spanning_gap;
    rep.spanning = rep.spanning_gap == 0;

    // exactness of the (2u)-twisted row in the middle
    const long long cols2u = binom64(r + 1, w) * S2u.h0();
    rep.kernel2u_dim = cols2u - kcK2u.rank_d(w, 0);
    rep.bottom_expected =
        binom64(r + 1, w + 1) * h0(C, omega.tensor(Lp.power(-1)));
    rep.bottom_exact = rep.kernel2u_dim == rep.bottom_expected;
    return rep;
}

// ---------------------------------------------------------------------------
// quadric witnesses on embedded models

// Per-component polynomial parametrization of the image of the model under
// the sigma basis (numerators over the shared denominator).
template <Field K>
std::vector<ParamCurve<K>> model_param_curves(const GluedCurve<K>& X,
                                              const SectionSpace<K>& SL) {
    std::vector<ParamCurve<K>> out;
    for (std::uint32_t c = 0; c < X.ncomps(); ++c) {
        std::vector<Poly<K>> coords;
        for (const auto& v : SL.vectors())
            coords.push_back(SL.numerator_on(v, c));
        out.push_back(ParamCurve<K>(std::move(coords)));
    }
    return out;
}

// A quadric containing the embedded model but not its tangential variety,
// if one exists.
template <Field K>
std::optional<Quadric<K>> quadric_witness(const GluedCurve<K>& X,
                                          const SectionSpace<K>& SL,
                                          const SparseMatrix<K>& mu_s2) {
    const int r = SL.h0() - 1;
    auto through = kernel_basis(mu_s2);
    if (through.dim() == 0)
        return std::nullopt;
    auto comps = model_param_curves(X, SL);
    auto rows = tangential_rows(comps);
    for (const auto& v : through.basis()) {
        for (const auto& row : rows) {
            K dot = K::zero();
            for (const auto& [col, val] : row)
                dot = dot + val * v[col];
            if (!dot.is_zero())
                return Quadric<K>(r, v);
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// kernel drop under double vanishing (the mainresult surjective route)

struct KernelDropReport {
    int g = 0, r = 0, d = 0;
    bool witness_exists = false;
    long long quadric_kernel = 0;  // quadrics through the model
    long long ker_mu_tensor = 0;   // H0(L) (x) H0(L) kernel
    long long ker_mu_prime = 0;    // H0(L) (x) H0(L(-2u)) kernel
    long long drop = 0;
    bool identity = false; // drop == 2r, asserted only when a witness exists
};

template <Field K>
KernelDropReport kernel_drop_check(const GluedCurve<K>& C, const SheafSpec<K>& Lp,
                                   const BranchPoint<K>& u,
                                   MatrixSink<K> sink = {}) {
    KernelDropReport rep;
    rep.g = C.genus();
    rep.d = static_cast<int>(Lp.degree(C));
    auto SL = section_basis(C, Lp);
    const int r = SL.h0() - 1;
    rep.r = r;
    auto SL2 = section_basis(C, Lp.power(2));
    auto mu = mu_matrix_s2(SL, SL2);
    rep.quadric_kernel = quadric_dim(r) - rank(mu);
    auto witness = quadric_witness(C, SL, mu);
    rep.witness_exists = witness.has_value();
    if (sink && witness)
        sink("witness_quadric", witness->matrix());

    auto tensor = mu_matrix_tensor(SL, SL.vectors(), SL, SL.vectors(), SL2);
    rep.ker_mu_tensor = static_cast<long long>(tensor.ncols()) - rank(tensor);

    auto twist = Divisor<K>::point(C.ncomps(), u, -2);
    auto SLm = section_basis(C, Lp.twisted(twist));
    auto tensor2 = mu_matrix_tensor(SL, SL.vectors(), SLm, SLm.vectors(), SL2);
    rep.ker_mu_prime = static_cast<long long>(tensor2.ncols()) - rank(tensor2);
    if (sink) {
        sink("mu_s2", mu);
        sink("mu_tensor", tensor);
        sink("mu_prime_tensor", tensor2);
    }
    rep.drop = rep.ker_mu_tensor - rep.ker_mu_prime;
    rep.identity = rep.drop == 2 * static_cast<long long>(r);
    return rep;
}

// ---------------------------------------------------------------------------
// middle exactness of the pole-twisted strand

struct BottomRowReport {
    int g = 0, r = 0, d = 0, p = 0;
    int h1 = 0;
    bool in_regime = false; // p <= r - floor((g+1)/2)
    long long kernel_dim = 0;
    long long expected = 0;
    bool exact = false;
};

template <Field K>
BottomRowReport bottom_row_exactness(const GluedCurve<K>& C, const SheafSpec<K>& Lp,
                                     int p, const BranchPoint<K>& u,
                                     std::uint64_t cap = 2'000'000,
                                     MatrixSink<K> sink = {}) {
    BottomRowReport rep;
    rep.g = C.genus();
    rep.d = static_cast<int>(Lp.degree(C));
    rep.p = p;
    rep.h1 = h1(C, Lp);
    auto SL = section_basis(C, Lp);
    const int r = SL.h0() - 1;
    rep.r = r;
    rep.in_regime = p <= r - (rep.g + 1) / 2;
    auto omega = SheafSpec<K>::dualizing(C.ncomps());
    auto twist2u = omega.twisted(Divisor<K>::point(C.ncomps(), u, 2));
    KoszulComplex<K> kc(C, Lp, twist2u, SL.vectors(), cap);
    if (sink)
        kc.set_sink([sink](const std::string& n, const SparseMatrix<K>& m) {
            sink("omega2u_row_" + n, m);
        });
    const int w = r - p;
    const long long cols = binom64(r + 1, w) * kc.space(0).h0();
    rep.kernel_dim = cols - kc.rank_d(w, 0);
    rep.expected = binom64(r + 1, w + 1) * h0(C, omega.tensor(Lp.power(-1)));
    rep.exact = rep.kernel_dim == rep.expected;
    return rep;
}

// ---------------------------------------------------------------------------
// induction walk over genus

struct WalkStep {
    int g = 0, d = 0;
    long long k11 = 0, k02 = 0;
    std::string route; // injective-side / surjective-side / stuck
    bool premise_ok = false;
    bool cond_numeric = false; // binom(r+2,2) - (2d-g+1) > binom(r-4,2)
    long long tail_k11 = 0;
    bool bottom_exact = false; // surjective route only
};

struct WalkReport {
    int r = 0, h1 = 0, g0 = 0;
    std::uint64_t seed = 0;
    std::vector<WalkStep> steps;
    bool truncated = false;
    std::string reason;
};

// Fix r and h1, raise the genus one elliptic tail at a time. Each step
// verifies the route premise on a fresh witness, attaches a tail, recomputes
// the weight-one strand upstairs and records the numerical condition.
template <Field K>
WalkReport induction_walk(int g0, int r, int h1_target, int steps,
                          std::uint64_t seed, std::uint64_t cap = 2'000'000) {
    WalkReport rep;
    rep.r = r;
    rep.h1 = h1_target;
    rep.g0 = g0;
    rep.seed = seed;
    Rng master(seed);
    for (int s = 0; s < steps; ++s) {
        const int g = g0 + s;
        const int d = g + r - h1_target;
        WalkStep step;
        step.g = g;
        step.d = d;
        bool found = false;
        for (int attempt = 0; attempt < 4 && !found; ++attempt) {
            Rng rng = master.child(static_cast<std::uint64_t>(s) * 16 +
                                   static_cast<std::uint64_t>(attempt));
            GluedCurve<K> C = random_nodal_curve<K>(g, rng);
            SheafSpec<K> L;
            try {
                L = special_bundle(C, d, h1_target, rng);
            } catch (const infeasible_error&) {
                rep.truncated = true;
                rep.reason = "infeasible parameters at g=" + std::to_string(g);
                rep.steps.push_back(step);
                return rep;
            }
            auto kc = KoszulComplex<K>::untwisted(C, L, cap);
            step.k11 = kc.dim_cell(1, 1);
            step.k02 = kc.dim_cell(0, 2);
            if (step.k11 != 0 && step.k02 != 0)
                continue; // not a maximal rank witness; resample
            found = true;
            step.cond_numeric =
                binom64(r + 2, 2) - (2LL * d - g + 1) > binom64(r - 4, 2);
            std::set<K> used = used_params(C, 0);
            BranchPoint<K> u{0, fresh_param(rng, used)};
            if (step.k11 == 0) {
                step.route = "injective-side";
                step.premise_ok = true;
            } else {
                step.route = "surjective-side";
                auto SL = section_basis(C, L);
                auto SL2 = section_basis(C, L.power(2));
                auto mu = mu_matrix_s2(SL, SL2);
                step.premise_ok = quadric_witness(C, SL, mu).has_value();
                step.bottom_exact = bottom_row_exactness(C, L, 1, u, cap).exact;
            }
            auto tail = attach_elliptic_tail(C, L, u, rng);
            auto kcTail = KoszulComplex<K>::untwisted(tail.X0, tail.L0, cap);
            step.tail_k11 = kcTail.dim_cell(1, 1);
        }
        if (!found) {
            step.route = "stuck";
            rep.truncated = true;
            rep.reason = "no maximal-rank witness at g=" + std::to_string(g);
            rep.steps.push_back(step);
            return rep;
        }
        rep.steps.push_back(step);
    }
    return rep;
}

} // namespace syz
