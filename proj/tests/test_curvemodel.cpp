#include <doctest.h>

#include <sstream>

#include "syz/io_json.hpp"
#include "syz/sections.hpp"

using namespace syz;

namespace {

// C (g-nodal, comp 0) joined to a one-node rational tail E (comp 1) at u;
// E carries its self-node at alpha/beta and the join branch at w.
template <Field K>
GluedCurve<K> with_tail(int g_c, Rng& rng, K* join_u = nullptr) {
    auto C = random_nodal_curve<K>(g_c, rng);
    std::vector<CurveNode<K>> nodes = C.nodes();
    std::set<K> used0 = used_params(C, 0);
    K u = fresh_param(rng, used0);
    std::set<K> used1;
    K alpha = fresh_param(rng, used1);
    used1.insert(alpha);
    K beta = fresh_param(rng, used1);
    used1.insert(beta);
    K w = fresh_param(rng, used1);
    used1.insert(w);
    nodes.push_back({{1, alpha}, {1, beta}, random_nonzero<K>(rng)});
    nodes.push_back({{0, u}, {1, w}, random_nonzero<K>(rng)});
    if (join_u)
        *join_u = u;
    K v = fresh_param(rng, used1);
    return GluedCurve<K>(2, std::move(nodes), {{"v", BranchPoint<K>{1, v}}});
}

} // namespace

TEST_CASE("sections of O(d*infinity) on P^1 are the polynomials of degree <= d") {
    for (int d = 0; d <= 5; ++d) {
        auto [X, L] = rational_normal_model<Fp>(d);
        auto S = section_basis(X, L);
        CHECK(S.h0() == d + 1);
        CHECK(h1(X, L) == 0);
    }
}

TEST_CASE("degree-3 bundle on a one-node genus-1 model has h0 = 3") {
    Rng rng(42);
    auto X = random_nodal_curve<Fp>(1, rng);
    auto D = random_effective_divisor(X, 3, rng);
    auto L = SheafSpec<Fp>::bundle(D);
    CHECK(h0(X, L) == 3);
    CHECK(h1(X, L) == 0);
}

TEST_CASE_TEMPLATE("h0(omega) = g on connected models", K, Fp, Rat) {
    Rng rng(7);
    for (int g = 0; g <= 6; ++g) {
        auto X = random_nodal_curve<K>(g, rng);
        CHECK(h0(X, SheafSpec<K>::dualizing(1)) == g);
    }
}

TEST_CASE("dualizing sections on a tailed model split across components") {
    Rng rng(11);
    for (int gc : {5, 6}) {
        auto X = with_tail<Fp>(gc, rng);
        CHECK(X.genus() == gc + 1);
        auto W = section_basis(X, SheafSpec<Fp>::dualizing(2));
        CHECK(W.h0() == gc + 1);
        // forms vanishing on the tail = H^0(K_C); on C = the tail generator
        CHECK(sections_vanishing_on(W, 1).size() == static_cast<std::size_t>(gc));
        CHECK(sections_vanishing_on(W, 0).size() == 1);
    }
}

TEST_CASE("quadratic differentials have dimension 3g-3") {
    Rng rng(13);
    for (int g : {2, 3, 4, 5}) {
        auto X = random_nodal_curve<Fp>(g, rng);
        auto om2 = SheafSpec<Fp>::dualizing(1).power(2);
        CHECK(h0(X, om2) == 3 * g - 3);
    }
}

TEST_CASE_TEMPLATE("Riemann-Roch on random models and sheaves", K, Fp, Rat) {
    Rng rng(101);
    for (int it = 0; it < 12; ++it) {
        int g = static_cast<int>(rng.below(5));
        auto X = random_nodal_curve<K>(g, rng);
        int m = static_cast<int>(rng.below(2));
        int extra = static_cast<int>(rng.below(7)) - 2;
        Divisor<K> D(1);
        if (extra > 0)
            D = random_effective_divisor(X, extra, rng);
        else if (extra < 0)
            D = -random_effective_divisor(X, -extra, rng);
        SheafSpec<K> S{m, m == 0 ? 1 : 0, D};
        long long deg = S.degree(X);
        long long lhs = h0(X, S) - h0(X, S.serre_dual());
        CHECK(lhs == deg - g + 1);
    }
}

TEST_CASE("basis vectors satisfy the node constraints exactly") {
    Rng rng(303);
    auto X = random_nodal_curve<Fp>(3, rng);
    auto D = random_effective_divisor(X, 5, rng);

    for (int m : {0, 1}) {
        SheafSpec<Fp> S{m, 1, D};
        auto sp = section_basis(X, S);
        CHECK(sp.h0() > 0);
        for (const auto& v : sp.vectors()) {
            for (const auto& n : X.nodes()) {
                Fp la = laurent_coeff(sp.layout.comps[n.a.comp], v,
                                      sp.layout.comps[n.a.comp].offset, n.a.param, -m);
                Fp lb = laurent_coeff(sp.layout.comps[n.b.comp], v,
                                      sp.layout.comps[n.b.comp].offset, n.b.param, -m);
                Fp s = field_pow(n.lambda, S.lambda_exp);
                if (m % 2 == 1)
                    s = -s;
                CHECK(la == s * lb);
            }
        }
    }
}

TEST_CASE("products of sections land in the product space") {
    Rng rng(404);
    auto X = random_nodal_curve<Fp>(2, rng);
    auto L = special_bundle(X, 5, 0, rng);
    auto SL = section_basis(X, L);
    auto SL2 = section_basis(X, L.power(2));
    CHECK(SL.h0() == 4);
    for (const auto& a : SL.vectors())
        for (const auto& b : SL.vectors()) {
            auto prod = multiply_sections(SL, a, SL, b, SL2.layout);
            CHECK(SL2.basis.contains(prod));
        }
}

TEST_CASE("multiplication identities on P^1") {
    auto [X, L] = rational_normal_model<Fp>(4);
    auto S2 = section_basis(X, SheafSpec<Fp>::bundle(Divisor<Fp>::at_infinity(1, 0, 2)));
    auto S4 = section_basis(X, L);
    auto S6 = section_basis(X, SheafSpec<Fp>::bundle(Divisor<Fp>::at_infinity(1, 0, 6)));
    // t^i * t^j = t^{i+j}
    auto ti = S2.vectors()[1];
    auto tj = S4.vectors()[3];
    auto prod = multiply_sections(S2, ti, S4, tj, S6.layout);
    auto expect = std::vector<Fp>(7, Fp::zero());
    expect[4] = Fp::one();
    CHECK(prod == expect);
    // 1 * s = s
    auto one = S2.vectors()[0];
    auto s = S4.vectors()[2];
    auto prod2 = multiply_sections(S2, one, S4, s, S6.layout);
    std::vector<Fp> expect2(7, Fp::zero());
    expect2[2] = Fp::one();
    CHECK(prod2 == expect2);
}

TEST_CASE("a product exceeding the target pole bound is a modeling error") {
    auto [X, L] = rational_normal_model<Fp>(3);
    auto SL = section_basis(X, L);
    auto t3 = SL.vectors()[3]; // t^3
    // t^3 * t^3 does not fit back into the degree-3 layout
    CHECK_THROWS_AS(multiply_sections(SL, t3, SL, t3, SL.layout), model_error);
}

TEST_CASE("sections with disjoint supports multiply to zero") {
    Rng rng(505);
    auto X = with_tail<Fp>(3, rng);
    // bundle restricting to degree 4 on C and degree 1 on E
    Divisor<Fp> DC(2);
    std::set<Fp> used = used_params(X, 0);
    for (int i = 0; i < 4; ++i) {
        Fp x = fresh_param(rng, used);
        used.insert(x);
        DC = DC + Divisor<Fp>::point(2, {0, x}, 1);
    }
    auto L0 = SheafSpec<Fp>::bundle(DC + Divisor<Fp>::point(2, X.marked_point("v"), 1));
    auto SL = section_basis(X, L0);
    auto SW = section_basis(X, SheafSpec<Fp>::dualizing(2));
    auto target = section_basis(X, L0.tensor(SheafSpec<Fp>::dualizing(2)));
    auto van_e = sections_vanishing_on(SL, 1);
    auto van_c = sections_vanishing_on(SW, 0);
    REQUIRE(!van_e.empty());
    REQUIRE(van_c.size() == 1);
    auto prod = multiply_sections(SL, van_e[0], SW, van_c[0], target.layout);
    for (const auto& x : prod)
        CHECK(x.is_zero());
}

TEST_CASE("adapted basis on the rational normal curve") {
    auto [X, L] = rational_normal_model<Fp>(4);
    auto S = section_basis(X, L);

    auto at0 = adapted_basis(S, {0, Fp::zero()});
    for (int k = 0; k <= 4; ++k) {
        for (int l = 0; l <= 4; ++l)
            CHECK(at0[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] ==
                  (l == k ? Fp::one() : Fp::zero()));
    }

    auto at1 = adapted_basis(S, {0, Fp::one()});
    for (int k = 0; k <= 4; ++k) {
        auto p = S.numerator_on(at1[static_cast<std::size_t>(k)], 0);
        auto tay = p.taylor_at(Fp::one(), 6);
        for (int j = 0; j < k; ++j)
            CHECK(tay[static_cast<std::size_t>(j)].is_zero());
        CHECK(tay[static_cast<std::size_t>(k)] == Fp::one());
    }
}

TEST_CASE("adapted basis on a genus-4 canonical model has orders 0..3") {
    Rng rng(606);
    auto X = random_nodal_curve<Fp>(4, rng);
    auto S = section_basis(X, SheafSpec<Fp>::dualizing(1));
    REQUIRE(S.h0() == 4);
    std::set<Fp> used = used_params(X, 0);
    Fp u = fresh_param(rng, used);
    auto adapted = adapted_basis(S, {0, u});
    const auto& cl = S.layout.comps[0];
    for (int k = 0; k < 4; ++k) {
        for (int j = 0; j < k; ++j)
            CHECK(laurent_coeff(cl, adapted[static_cast<std::size_t>(k)], cl.offset, u, j)
                      .is_zero());
        CHECK(laurent_coeff(cl, adapted[static_cast<std::size_t>(k)], cl.offset, u, k) ==
              Fp::one());
    }
}

TEST_CASE("special bundles hit the target h1") {
    Rng rng(707);
    SUBCASE("nonspecial") {
        auto X = random_nodal_curve<Fp>(3, rng);
        auto L = special_bundle(X, 6, 0, rng);
        CHECK(h1(X, L) == 0);
        CHECK(h0(X, L) == 4);
    }
    SUBCASE("canonical at d = 2g-2") {
        auto X = random_nodal_curve<Fp>(4, rng);
        auto L = special_bundle(X, 6, 1, rng);
        CHECK(L.omega_exp == 1);
        CHECK(h0(X, L) == 4);
        CHECK(h1(X, L) == 1);
    }
    SUBCASE("g=6 d=7 s=1") {
        auto X = random_nodal_curve<Fp>(6, rng);
        auto L = special_bundle(X, 7, 1, rng);
        CHECK(h0(X, L) == 3);
        CHECK(h0(X, L) - h1(X, L) == 7 - 6 + 1);
    }
    SUBCASE("infeasible bookkeeping") {
        auto X = random_nodal_curve<Fp>(2, rng);
        CHECK_THROWS_AS(special_bundle(X, 5, 1, rng), infeasible_error);
    }
}

TEST_CASE("petri multiplication map is injective on sampled witnesses") {
    Rng rng(808);
    for (int g : {4, 5, 6}) {
        auto X = random_nodal_curve<Fp>(g, rng);
        int d = 2 * g - 2 - 2; // h1 = 1 range
        auto L = special_bundle(X, d, 1, rng);
        auto SL = section_basis(X, L);
        auto SD = section_basis(X, L.serre_dual());
        auto SW = section_basis(X, SheafSpec<Fp>::dualizing(1));
        REQUIRE(SD.h0() == 1);
        std::vector<std::vector<Fp>> rows;
        for (const auto& a : SL.vectors())
            for (const auto& b : SD.vectors())
                rows.push_back(multiply_sections(SL, a, SD, b, SW.layout));
        auto m = SparseMatrix<Fp>::from_dense_rows(rows, SW.layout.total);
        CHECK(rank(m) == static_cast<std::uint32_t>(SL.h0() * SD.h0()));
    }
}

TEST_CASE("degenerate models are rejected") {
    Fp two = Fp::from_int(2);
    CHECK_THROWS_AS(GluedCurve<Fp>(1, {{{0, two}, {0, two}, Fp::one()}}),
                    model_error);
    CHECK_THROWS_AS(GluedCurve<Fp>(1, {{{0, Fp::zero()}, {0, two}, Fp::zero()}}),
                    model_error);
    CHECK_THROWS_AS(GluedCurve<Fp>(2, {}), model_error); // disconnected
}

TEST_CASE("curve json round trip is bit exact") {
    Rng rng(909);
    auto X = with_tail<Fp>(2, rng);
    auto j = curve_to_json(X);
    std::string text = j.dump(2);
    auto back = curve_from_json<Fp>(nlohmann::json::parse(text));
    CHECK(curve_to_json(back).dump(2) == text);
}
