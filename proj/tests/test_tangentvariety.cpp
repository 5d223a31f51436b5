#include <doctest.h>

#include "dense_oracle.hpp"
#include "syz/quadrics.hpp"

using namespace syz;

namespace {

template <Field K>
bool vanishes_on_tangential(const ParamCurve<K>& c, const Quadric<K>& q) {
    if (!q.eval(c.coords).is_zero())
        return false;
    auto d = c.derivative();
    if (!q.polarized2(c.coords, d).is_zero())
        return false;
    return q.eval(d).is_zero();
}

} // namespace

TEST_CASE("quadrics through rational normal curves count binomially") {
    CHECK(quadrics_through(rational_normal_curve<Fp>(3)).dim() == 3);
    CHECK(quadrics_through(rational_normal_curve<Fp>(5)).dim() == 10);
}

TEST_CASE("quadrics through a line in P^2") {
    ParamCurve<Fp> line({Poly<Fp>::constant(Fp::one()), Poly<Fp>::monomial(1),
                         Poly<Fp>::zero()});
    CHECK(quadrics_through(line).dim() == 3);
}

TEST_CASE("tangential quadric counts") {
    CHECK(tangential_quadrics(rational_normal_curve<Fp>(4)).dim() == 1);
    CHECK(tangential_quadrics(rational_normal_curve<Fp>(6)).dim() == 6);
    // a conic's tangent lines fill the plane
    CHECK(tangential_quadrics(rational_normal_curve<Fp>(2)).dim() == 0);
}

TEST_CASE("tangential quadrics sit inside quadrics through the curve") {
    for (int d : {4, 5, 6, 7}) {
        auto c = rational_normal_curve<Fp>(d);
        auto tq = tangential_quadrics(c);
        auto qt = quadrics_through(c);
        CHECK(tq.dim() == binom64(d - 2, 2));
        CHECK(qt.dim() == binom64(d, 2));
        for (const auto& v : tq.basis())
            CHECK(qt.contains(v));
    }
}

TEST_CASE("delta minors") {
    auto d013 = delta_minor<Fp>(0, 1, 3);
    // x0 x2 - x1^2
    std::vector<Fp> expect(quadric_dim(3), Fp::zero());
    expect[quadric_index(3, 0, 2)] = Fp::one();
    expect[quadric_index(3, 1, 1)] = -Fp::one();
    CHECK(d013.form() == expect);

    CHECK(delta_minor<Fp>(2, 2, 5).is_zero());
    CHECK(delta_minor<Fp>(3, 1, 5) == -delta_minor<Fp>(1, 3, 5));
    CHECK_THROWS_AS(delta_minor<Fp>(-1, 2, 5), std::invalid_argument);

    // d=5: ten independent minors, each vanishing on the curve
    auto c5 = rational_normal_curve<Fp>(5);
    auto qt = quadrics_through(c5);
    std::vector<std::vector<Fp>> rows;
    for (int a = 0; a < 5; ++a)
        for (int b = a + 1; b < 5; ++b) {
            auto q = delta_minor<Fp>(a, b, 5);
            CHECK(q.eval(c5.coords).is_zero());
            CHECK(qt.contains(q.form()));
            rows.push_back(q.form());
        }
    auto m = SparseMatrix<Fp>::from_dense_rows(rows, quadric_dim(5));
    CHECK(rank(m) == 10);
    CHECK(oracle::dense_rank(m) == 10);
    // the minors span all quadrics through the curve
    CHECK(row_space(m) == qt);
}

TEST_CASE("gamma quadrics vanish on the tangential variety") {
    auto c4 = rational_normal_curve<Fp>(4);
    auto g01 = gamma_quadric<Fp>(0, 1, 4);
    auto expect = delta_minor<Fp>(0, 3, 4) - delta_minor<Fp>(1, 2, 4) * Fp::from_int(3);
    CHECK(g01 == expect);
    CHECK(vanishes_on_tangential(c4, g01));
    CHECK(gamma_quadric<Fp>(1, 1, 4).is_zero());

    auto c6 = rational_normal_curve<Fp>(6);
    auto tq6 = tangential_quadrics(c6);
    std::vector<std::vector<Fp>> rows;
    for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) {
            auto g = gamma_quadric<Fp>(a, b, 6);
            CHECK(tq6.contains(g.form()));
            if (!g.is_zero())
                rows.push_back(g.form());
        }
    auto span = Subspace<Fp>::from_rows(quadric_dim(6), rows);
    CHECK(span.dim() == 6);
    CHECK(span == tq6);
}

TEST_CASE("cuspidal projection exponents") {
    auto c5 = cuspidal_projection<Fp>(5);
    std::vector<int> deg5;
    for (const auto& p : c5.coords)
        deg5.push_back(p.degree());
    CHECK(deg5 == std::vector<int>{0, 2, 4, 5, 6, 7});

    auto c6 = cuspidal_projection<Fp>(6);
    std::vector<int> deg6;
    for (const auto& p : c6.coords)
        deg6.push_back(p.degree());
    CHECK(deg6 == std::vector<int>{0, 2, 4, 6, 7, 8, 9});
    CHECK(c6.degree() == 2 * 6 - 3);
    CHECK(static_cast<int>(c6.coords.size()) == 7);
    CHECK_THROWS_AS(cuspidal_projection<Fp>(4), std::invalid_argument);
}

TEST_CASE("projected tangential quadric counts match the binomial formula") {
    for (int r : {5, 6, 7, 8, 9}) {
        auto c = count_tc_quadrics<Fp>(r);
        CHECK(c.direct == c.formula);
        CHECK(c.structured == c.formula);
        if (r >= 6) {
            long long sq = static_cast<long long>(r) * r - 8 * r + 16;
            CHECK(c.strat_low == sq / 4);
            CHECK(c.strat_high == sq / 4 - (r - 4) / 2);
        }
    }
    CHECK(count_tc_quadrics<Fp>(5).direct == 0);
    CHECK(count_tc_quadrics<Fp>(6).direct == 1);
    CHECK(count_tc_quadrics<Fp>(9).direct == 10);
}

TEST_CASE("minor and gamma spans equal the quadric kernels for 3 <= d <= 12") {
    for (int d = 3; d <= 12; ++d) {
        auto c = rational_normal_curve<Fp>(d);
        std::vector<std::vector<Fp>> deltas, gammas;
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b)
                deltas.push_back(delta_minor<Fp>(a, b, d).form());
        for (int a = 0; a <= d - 3; ++a)
            for (int b = a + 1; b <= d - 3; ++b)
                gammas.push_back(gamma_quadric<Fp>(a, b, d).form());
        auto dspan = Subspace<Fp>::from_rows(quadric_dim(d), deltas);
        auto gspan = Subspace<Fp>::from_rows(quadric_dim(d), gammas);
        CHECK(dspan.dim() == binom64(d, 2));
        CHECK(gspan.dim() == binom64(d - 2, 2));
        CHECK(dspan == quadrics_through(c));
        CHECK(gspan == tangential_quadrics(c));
    }
}

TEST_CASE("quadric matrix view is symmetric and round-trips over Q") {
    auto q = gamma_quadric<Rat>(0, 1, 4);
    auto m = q.matrix();
    CHECK(m == m.transpose());
    // diagonal entries carry the full coefficient, off-diagonal ones half
    CHECK(q.matrix_entry(1, 2) + q.matrix_entry(2, 1) ==
          q.form()[quadric_index(4, 1, 2)]);
}

TEST_CASE("param curves divide out common factors") {
    // t * (1, t, t^2) parametrizes the same conic
    ParamCurve<Fp> c({Poly<Fp>::monomial(1), Poly<Fp>::monomial(2),
                      Poly<Fp>::monomial(3)});
    CHECK(c.degree() == 2);
    CHECK(quadrics_through(c).dim() == 1);
    CHECK_THROWS_AS(ParamCurve<Fp>({Poly<Fp>::constant(Fp::one()),
                                    Poly<Fp>::constant(Fp::from_int(2))}),
                    model_error);
}
