#include "doctest.h"

#include "vlab/constructors.hpp"
#include "vlab/field.hpp"
#include "vlab/stress.hpp"

using namespace vlab;

namespace {

RatGrid identity_grid(int n) {
    RatGrid g(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rational(1);
    return g;
}

std::shared_ptr<AlgebraSpec> share(AlgebraSpec a) { return std::make_shared<AlgebraSpec>(std::move(a)); }

FockModule vacuum_of(const std::shared_ptr<AlgebraSpec>& a) { return FockModule(a, ModuleSpec::vacuum(*a)); }

// kappa(B) as the matrix of v -> sum_ij b_ij [u_i, [u_j, v]], straight from the structure constants.
RatGrid kappa_matrix(const LieAlgebraData& g, const RatGrid& B) {
    const auto d = static_cast<std::size_t>(g.dimension());
    RatGrid out(d, std::vector<Rational>(d));
    for (std::size_t v = 0; v < d; ++v)
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                if (B[i][j].is_zero()) continue;
                for (std::size_t k = 0; k < d; ++k) {
                    const Rational& f1 = g.structure[j][v][k];
                    if (f1.is_zero()) continue;
                    for (std::size_t l = 0; l < d; ++l) out[l][v] += B[i][j] * f1 * g.structure[i][k][l];
                }
            }
    return out;
}

// (B o Q) as the matrix of v -> sum_ij b_ij Q(u_j, v) u_i
RatGrid compose(const RatGrid& B, const RatGrid& Q) {
    const auto d = B.size();
    RatGrid out(d, std::vector<Rational>(d));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t v = 0; v < d; ++v)
            for (std::size_t j = 0; j < d; ++j) out[i][v] += B[i][j] * Q[j][v];
    return out;
}

void check_sugawara_tensor(const LieAlgebraData& g) {
    const auto s = sugawara(g);
    const auto& B = s.tensor.B;
    const auto d = static_cast<std::size_t>(g.dimension());
    const auto bq = compose(B, g.Q);
    const auto kap = kappa_matrix(g, B);
    Rational trace;
    for (std::size_t i = 0; i < d; ++i) {
        trace += bq[i][i];
        for (std::size_t j = 0; j < d; ++j) {
            CHECK(B[i][j] == B[j][i]);
            CHECK(Rational(2) * bq[i][j] + kap[i][j] == (i == j ? Rational(1) : Rational(0)));
        }
    }
    CHECK(s.tensor.c == Rational(2) * trace);
}

Rational bc_charge(int n) { return Rational(-2 * (6 * n * n - 6 * n + 1)); }

}  // namespace

TEST_CASE("Sugawara for abelian algebras") {
    for (int d = 1; d <= 3; ++d) {
        RatGrid Q = identity_grid(d);
        if (d >= 2) Q[0][1] = Q[1][0] = Rational(1, 3);
        Q[0][0] = Rational(5, 2);
        const auto g = LieAlgebraData::abelian(Q);
        const auto s = sugawara(g);
        // B = (2Q)^-1
        const auto prod = compose(s.tensor.B, Q);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                CHECK(Rational(2) * prod[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                      (i == j ? Rational(1) : Rational(0)));
        CHECK(s.tensor.c == Rational(d));
        check_sugawara_tensor(g);
        const auto alg = share(heisenberg(d, Q));
        CHECK(extract_central_charge(s.T, vacuum_of(alg), 3).c == Rational(d));
    }
}

TEST_CASE("Sugawara for sl2") {
    for (const auto& [q, c] : std::vector<std::pair<Rational, Rational>>{
             {Rational(1), Rational(2)}, {Rational(2), Rational(12, 5)}, {Rational(-1), Rational(6)},
             {Rational(3, 2), Rational(9, 4)}}) {
        CAPTURE(q);
        const auto g = LieAlgebraData::sl2(q);
        check_sugawara_tensor(g);
        const auto s = sugawara(g);
        CHECK(s.tensor.c == c);
        REQUIRE(s.tensor.kappa.has_value());
        const auto alg = share(kac_moody(g));
        CHECK(extract_central_charge(s.T, vacuum_of(alg), 3).c == c);
    }
    try {
        sugawara(LieAlgebraData::sl2(Rational(-1, 2)));
        FAIL("Q = -K/2 accepted");
    } catch (const SugawaraRejected& e) {
        CHECK_FALSE(e.condition.empty());
    }
}

TEST_CASE("dilaton central charges") {
    for (const auto& [lambda, Q, c] : std::vector<std::tuple<Rational, Rational, Rational>>{
             {Rational(0), Rational(1), Rational(1)},
             {Rational(2), Rational(1), Rational(13)},
             {Rational(1), Rational(-1), Rational(-2)},
             {Rational(1, 2), Rational(3), Rational(5, 4)},
             {Rational(3), Rational(-1), Rational(-26)}}) {
        const DilatonSpec spec{lambda, Q};
        CHECK(c == Rational(1) + Rational(3) * lambda * lambda / Q);
        const auto alg = share(dilaton(spec));
        CHECK(extract_central_charge(dilaton_T(spec), vacuum_of(alg), 3).c == c);
    }
    CHECK_THROWS(dilaton_T({Rational(1), Rational(0)}));
}

TEST_CASE("bc central charges and primaries") {
    CHECK(bc_charge(2) == Rational(-26));
    CHECK(bc_charge(-1) == Rational(-26));
    for (int n = -1; n <= 3; ++n) {
        CAPTURE(n);
        const auto alg = share(bc_system(n));
        const auto mod = vacuum_of(alg);
        CHECK(extract_central_charge(bc_T(n), mod, 3).c == bc_charge(n));
        CHECK(verify_primary(bc_T(n), alg->index_of("b"), n, mod, 3).empty());
        CHECK(verify_primary(bc_T(n), alg->index_of("c"), 1 - n, mod, 3).empty());
    }
}

TEST_CASE("inconsistent stress tensors are rejected") {
    const auto alg = share(heisenberg(1, identity_grid(1)));
    const auto mod = vacuum_of(alg);
    const auto T = sugawara(LieAlgebraData::abelian(identity_grid(1))).T;
    CHECK_THROWS_AS(extract_central_charge(T.scaled(Rational(2)), mod, 3), NotVirasoroError);

    // L_0 shifted by the identity is detected
    const ModeMatrixProvider shifted = [&](long m, long from) {
        auto mat = operator_matrix(T, m, mod, from, from - m);
        if (m == 0) mat = mat + RatMatrix::identity(mat.rows());
        return mat;
    };
    const auto dim = [&](long level) { return mod.basis_at(level).size(); };
    CHECK_THROWS_AS(extract_central_charge(shifted, dim, 0, 4, 3, 0), NotVirasoroError);
    const ModeMatrixProvider plain = [&](long m, long from) { return operator_matrix(T, m, mod, from, from - m); };
    CHECK(extract_central_charge(plain, dim, 0, 4, 3, 0).c == Rational(1));
}

TEST_CASE("primary currents") {
    const auto alg = share(heisenberg(2, identity_grid(2)));
    const auto mod = vacuum_of(alg);
    const auto T = sugawara(LieAlgebraData::abelian(identity_grid(2))).T;
    CHECK(verify_primary(T, 0, 1, mod, 3).empty());
    CHECK(verify_primary(T, 1, 1, mod, 3).empty());

    const auto km = share(kac_moody(LieAlgebraData::sl2(Rational(1))));
    const auto kmod = vacuum_of(km);
    const auto Tk = sugawara(LieAlgebraData::sl2(Rational(1))).T;
    for (int g = 0; g < 3; ++g) CHECK(verify_primary(Tk, g, 1, kmod, 2).empty());

    // twisted current is not primary; the anomaly sits in the central m(m+1) term
    const DilatonSpec spec{Rational(2), Rational(1)};
    const auto d = share(dilaton(spec));
    const auto violations = verify_primary(dilaton_T(spec), 0, 1, vacuum_of(d), 3);
    REQUIRE_FALSE(violations.empty());
    for (const auto& v : violations) {
        CHECK(v.m + v.k == 0);
        CHECK(v.m * (v.m + 1) != 0);
    }
    CHECK(verify_primary(dilaton_T({Rational(0), Rational(1)}), 0, 1, vacuum_of(share(dilaton({Rational(0), Rational(1)}))), 3)
              .empty());
}

TEST_CASE("Virasoro relations for every constructed T") {
    struct Case {
        std::shared_ptr<AlgebraSpec> alg;
        FieldExpr T;
        Rational c;
        long max_level;
    };
    std::vector<Case> cases;
    const auto h = share(heisenberg(2, identity_grid(2)));
    cases.push_back({h, sugawara(LieAlgebraData::abelian(identity_grid(2))).T, Rational(2), 4});
    const auto km = share(kac_moody(LieAlgebraData::sl2(Rational(2))));
    cases.push_back({km, sugawara(LieAlgebraData::sl2(Rational(2))).T, Rational(12, 5), 3});
    const DilatonSpec ds{Rational(2), Rational(1)};
    const auto d = share(dilaton(ds));
    cases.push_back({d, dilaton_T(ds), Rational(13), 4});
    for (int n : {-1, 0, 1, 2}) cases.push_back({share(bc_system(n)), bc_T(n), bc_charge(n), 4});
    const auto v = share(virasoro(Rational(7, 3)));
    cases.push_back({v, FieldExpr::generator(*v, "L"), Rational(7, 3), 4});
    for (const auto& cs : cases) {
        CAPTURE(cs.alg->label());
        CHECK(virasoro_relation_check(cs.T, vacuum_of(cs.alg), cs.c, 3, cs.max_level).empty());
        // a wrong central charge is caught
        CHECK_FALSE(virasoro_relation_check(cs.T, vacuum_of(cs.alg), cs.c + Rational(1), 3, cs.max_level).empty());
    }
}

TEST_CASE("Virasoro relations by direct matrix products") {
    const DilatonSpec ds{Rational(1), Rational(-1)};
    const auto d = share(dilaton(ds));
    const auto mod = vacuum_of(d);
    const auto T = dilaton_T(ds);
    const Rational c(-2);
    for (long level = 0; level <= 4; ++level)
        for (long m = -3; m <= 3; ++m)
            for (long k = -3; k <= 3; ++k) {
                const long mid = level - k, out = level - m - k;
                if (mid < 0 || out < 0) continue;
                const auto lhs = operator_matrix(T, m, mod, mid, out) * operator_matrix(T, k, mod, level, mid);
                RatMatrix rhs = operator_matrix(T, m + k, mod, level, out).scaled(Rational(m - k));
                if (m + k == 0)
                    rhs = rhs + RatMatrix::identity(mod.basis_at(level).size()).scaled(c / Rational(12) * Rational(m * m * m - m));
                const long mid2 = level - m;
                RatMatrix rev(lhs.rows(), lhs.cols());
                if (mid2 >= 0) rev = operator_matrix(T, k, mod, mid2, out) * operator_matrix(T, m, mod, level, mid2);
                CHECK(lhs - rev == rhs);
            }
}

TEST_CASE("Bose-Fermi correspondence") {
    for (int n : {0, 1, 2, -1}) {
        CAPTURE(n);
        const auto report = bose_fermi_check(n, 3);
        CHECK(report.current_bracket);
        CHECK(report.ghost_number);
        CHECK(report.stress_match);
    }
    const auto alg = share(bc_system(2));
    const auto mod = vacuum_of(alg);
    const auto j = fermion_current(2);
    const auto c1 = StateVector::basis({{alg->index_of("c"), 1}});
    CHECK(apply_field_mode(j, 0, mod, c1) == c1);
    const auto vac = mod.vacuum();
    const auto comm = apply_field_mode(j, 1, mod, apply_field_mode(j, -1, mod, vac)) -
                      apply_field_mode(j, -1, mod, apply_field_mode(j, 1, mod, vac));
    CHECK(comm == vac);  // [j_1, j_-1] = +1, the dilaton(3, -1) bracket -m Q at m = 1
}
