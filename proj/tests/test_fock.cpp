#include "doctest.h"

#include "vlab/constructors.hpp"
#include "vlab/field.hpp"
#include "vlab/fock.hpp"
#include "vlab/stress.hpp"

#include <map>

using namespace vlab;

namespace {

RatGrid identity_grid(int n) {
    RatGrid g(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rational(1);
    return g;
}

FockModule vacuum_module(const AlgebraSpec& alg) {
    return FockModule(std::make_shared<AlgebraSpec>(alg), ModuleSpec::vacuum(alg));
}

// Graded dimensions from prod (1 - q^l)^-1 (even) and (1 + q^l) (odd) over the creation
// levels l = -m, m <= -weight, as integer polynomials.
std::map<long, long> product_formula_dims(const AlgebraSpec& alg, long max_level) {
    long negative = 0;
    for (const auto& g : alg.generators())
        if (g.parity == Parity::Odd)
            for (long l = g.weight; l < 0; ++l) negative -= l;
    const long top = max_level + negative;
    std::map<long, long> poly{{0, 1}};
    auto trim = [&](std::map<long, long>& p) {
        for (auto it = p.begin(); it != p.end();) it = (it->first > top || it->second == 0) ? p.erase(it) : std::next(it);
    };
    for (const auto& g : alg.generators())
        for (long l = g.weight; l <= top; ++l) {
            std::map<long, long> next;
            if (g.parity == Parity::Odd) {
                for (const auto& [e, c] : poly) {
                    next[e] += c;
                    next[e + l] += c;
                }
            } else {
                REQUIRE(l > 0);
                for (const auto& [e, c] : poly)
                    for (long j = 0; e + j * l <= top; ++j) next[e + j * l] += c;
            }
            trim(next);
            poly = next;
        }
    return poly;
}

std::vector<AlgebraSpec> constructor_algebras() {
    return {heisenberg(1, identity_grid(1)),
            heisenberg(2, {{Rational(2), Rational(-1)}, {Rational(-1), Rational(2)}}),
            kac_moody(LieAlgebraData::sl2(Rational(1))),
            virasoro(Rational(1, 2)),
            dilaton({Rational(1), Rational(-1)}),
            bc_system(-1),
            bc_system(0),
            bc_system(1),
            bc_system(2),
            bc_system(3)};
}

}  // namespace

TEST_CASE("Heisenberg vacuum dimensions") {
    const auto mod = vacuum_module(heisenberg(1, identity_grid(1)));
    const auto basis = mod.build_basis(6);
    const std::vector<std::size_t> expect{1, 1, 2, 3, 5, 7, 11};
    for (long n = 0; n <= 6; ++n) CHECK(basis.at(n).size() == expect[static_cast<std::size_t>(n)]);
    CHECK(vacuum_module(heisenberg(2, identity_grid(2))).basis_at(2).size() == 5);
}

TEST_CASE("graded dimensions match the product formula to level 6") {
    for (const auto& alg : constructor_algebras()) {
        CAPTURE(alg.label());
        const auto mod = vacuum_module(alg);
        const auto oracle = product_formula_dims(alg, 6);
        const auto basis = mod.build_basis(6);
        for (long n = mod.min_level(); n <= 6; ++n) {
            CAPTURE(n);
            const auto it = oracle.find(n);
            CHECK(static_cast<long>(basis.at(n).size()) == (it == oracle.end() ? 0 : it->second));
        }
        for (const auto& [n, d] : oracle)
            if (n < mod.min_level()) CHECK(d == 0);
    }
}

TEST_CASE("bc(2) has a single ghost-one state below the vacuum") {
    const auto mod = vacuum_module(bc_system(2));
    CHECK(mod.min_level() == -1);
    std::vector<Monomial> ghost_one;
    for (const auto& m : mod.basis_at(-1))
        if (mod.ghost_number(m) == 1) ghost_one.push_back(m);
    REQUIRE(ghost_one.size() == 1);
    CHECK(ghost_one[0] == Monomial{{1, 1}});
    // the other level -1 state is c_1 c_0 |0>
    CHECK(mod.basis_at(-1).size() == 2);
}

TEST_CASE("basis invariants") {
    for (const auto& alg : constructor_algebras()) {
        CAPTURE(alg.label());
        const auto mod = vacuum_module(alg);
        for (long n = mod.min_level(); n <= 5; ++n)
            for (const auto& m : mod.basis_at(n)) {
                CHECK(monomial_level(m) == n);
                for (std::size_t i = 0; i < m.size(); ++i) {
                    CHECK(mod.is_creation(m[i].gen, m[i].index));
                    if (i + 1 < m.size()) {
                        CHECK_FALSE(m[i + 1] < m[i]);
                        if (alg.is_odd(m[i].gen)) CHECK(m[i] != m[i + 1]);
                    }
                }
            }
    }
}

TEST_CASE("mode action examples") {
    const auto mod = vacuum_module(heisenberg(1, identity_grid(1)));
    const auto a1 = mod.apply_mode("a", -1, mod.vacuum());
    CHECK(mod.apply_mode("a", 1, a1) == mod.vacuum());
    CHECK(mod.apply_mode("a", 2, mod.vacuum()).is_zero());
    CHECK_THROWS(mod.apply_mode("q", 1, a1));
    CHECK(mod.state_string({{0, -2}, {0, -1}, {0, -1}}) == "a(-2) a(-1)^2 |0>");

    // Weyl module: a_0 = mu on every state
    const auto h = std::make_shared<AlgebraSpec>(heisenberg(1, identity_grid(1)));
    ModuleSpec weyl = ModuleSpec::vacuum(*h);
    weyl.highest_weight[0] = Rational(-3, 2);
    const FockModule wm(h, weyl);
    for (long n = 0; n <= 4; ++n)
        for (const auto& m : wm.basis_at(n)) {
            const auto v = StateVector::basis(m);
            CHECK(wm.apply_mode(0, 0, v) == v.scaled(Rational(-3, 2)));
        }

    // Virasoro highest-weight module: L_0 = h + level
    const Rational hw(2, 5);
    const auto vir = std::make_shared<AlgebraSpec>(virasoro(Rational(3)));
    ModuleSpec vs;
    vs.annihilation_threshold = {0};
    vs.highest_weight[0] = hw;
    vs.hw_label = "|h>";
    const FockModule vm(vir, vs);
    CHECK(vm.basis_at(1).size() == 1);
    for (long n = 0; n <= 4; ++n)
        for (const auto& m : vm.basis_at(n)) {
            const auto v = StateVector::basis(m);
            CHECK(vm.apply_mode(0, 0, v) == v.scaled(hw + Rational(n)));
        }
}

TEST_CASE("commutators and grading on level <= 3 states") {
    for (const auto& alg : constructor_algebras()) {
        CAPTURE(alg.label());
        const auto mod = vacuum_module(alg);
        for (long n = mod.min_level(); n <= 3; ++n)
            for (const auto& mono : mod.basis_at(n)) {
                const auto v = StateVector::basis(mono);
                for (int a = 0; a < alg.size(); ++a)
                    for (long m = -3; m <= 3; ++m) {
                        const auto w = mod.apply_mode(a, m, v);
                        for (const auto& [t, c] : w.terms()) CHECK(monomial_level(t) == n - m);
                        for (int b = 0; b < alg.size(); ++b)
                            for (long k = -2; k <= 2; ++k) {
                                const bool odd = alg.is_odd(a) && alg.is_odd(b);
                                const auto lhs = mod.apply_mode(b, k, w) +
                                                 mod.apply_mode(a, m, mod.apply_mode(b, k, v)).scaled(odd ? 1 : -1);
                                const auto br = alg.bracket(b, k, a, m);
                                StateVector rhs = v.scaled(br.central);
                                for (const auto& [md, c] : br.modes) rhs += mod.apply_mode(md.gen, md.index, v).scaled(c);
                                CHECK(lhs == rhs);
                            }
                    }
            }
    }
}

TEST_CASE("operator matrices") {
    const auto h = std::make_shared<AlgebraSpec>(heisenberg(1, identity_grid(1)));
    const FockModule mod(h, ModuleSpec::vacuum(*h));
    const auto unit = operator_matrix(FieldExpr::unit(), 0, mod, 3, 3);
    CHECK(unit == RatMatrix::identity(3));

    const auto a = FieldExpr::generator(*h, "a");
    const auto T = nop(a, a).scaled(Rational(1, 2));
    CHECK(operator_matrix(T, 0, mod, 3, 3) == RatMatrix::identity(3).scaled(Rational(3)));
    CHECK_THROWS_AS(operator_matrix(T, 0, mod, 3, 2), std::invalid_argument);

    const auto vir = std::make_shared<AlgebraSpec>(virasoro(Rational(1)));
    const FockModule vm(vir, ModuleSpec::vacuum(*vir));
    const auto L = FieldExpr::generator(*vir, "L");
    const auto m = operator_matrix(L, -2, vm, 0, 2);
    CHECK(m == RatMatrix::from_rows({{Rational(1)}}));
    CHECK(mode_matrix(0, -2, vm, 0) == m);
}
