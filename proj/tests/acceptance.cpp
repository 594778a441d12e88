// Acceptance suite: one PASS/FAIL line per criterion. All comparisons are exact
// equalities of rationals; the tolerance is zero and is not configurable.

#include "vlab/blocks.hpp"
#include "vlab/brst.hpp"
#include "vlab/constructors.hpp"
#include "vlab/field.hpp"
#include "vlab/fock.hpp"
#include "vlab/stress.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace vlab;

namespace {

constexpr int kWindow = 3;        // central-charge fit window
constexpr long kCcLevel = 4;      // levels used for the fit
constexpr long kRelationLevel = 4;
constexpr int kRelationModes = 3;
constexpr int kDimLevel = 6;
constexpr long kBrstLevel = 2;
constexpr int kBoseFermiLevel = 3;
constexpr int kCharacterCutoff = 8;
constexpr long kCorrelatorDepth = 3;
const Rational kTolerance(0);     // |measured - expected| must not exceed this

bool exact(const Rational& measured, const Rational& expected) {
    const Rational d = measured - expected;
    return (d.sign() < 0 ? -d : d) <= kTolerance;
}

RatGrid identity_grid(int n) {
    RatGrid g(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Rational(1);
    return g;
}

std::shared_ptr<AlgebraSpec> share(AlgebraSpec a) { return std::make_shared<AlgebraSpec>(std::move(a)); }

// Closed-form central charges.
Rational c_heisenberg(int d) { return Rational(d); }
Rational c_sl2(const Rational& q) { return q * Rational(3) / (q + Rational(1, 2)); }
Rational c_dilaton(const Rational& lambda, const Rational& Q) { return Rational(1) + Rational(3) * lambda * lambda / Q; }
Rational c_bc(int n) { return Rational(-2 * (6 * n * n - 6 * n + 1)); }

struct StressCase {
    std::string label;
    std::shared_ptr<AlgebraSpec> alg;
    FieldExpr T;
    Rational expected;  // from the closed forms above
    Rational table;     // the value listed in the criterion
};

std::vector<StressCase> stress_cases() {
    std::vector<StressCase> out;
    for (int d = 1; d <= 3; ++d)
        out.push_back({"heisenberg(" + std::to_string(d) + ")", share(heisenberg(d, identity_grid(d))),
                       sugawara(LieAlgebraData::abelian(identity_grid(d))).T, c_heisenberg(d), Rational(d)});
    for (const auto& [q, t] : std::vector<std::pair<long, Rational>>{{1, Rational(2)}, {2, Rational(12, 5)}}) {
        const auto g = LieAlgebraData::sl2(Rational(q));
        out.push_back({"sl2(q=" + std::to_string(q) + ")", share(kac_moody(g)), sugawara(g).T, c_sl2(Rational(q)), t});
    }
    for (const auto& [l, Q, t] : std::vector<std::tuple<long, long, long>>{{0, 1, 1}, {2, 1, 13}, {1, -1, -2}}) {
        const DilatonSpec spec{Rational(l), Rational(Q)};
        out.push_back({"dilaton(" + std::to_string(l) + "," + std::to_string(Q) + ")", share(dilaton(spec)),
                       dilaton_T(spec), c_dilaton(Rational(l), Rational(Q)), Rational(t)});
    }
    for (const auto& [n, t] : std::vector<std::pair<int, long>>{{-1, -26}, {0, -2}, {1, -2}, {2, -26}})
        out.push_back({"bc(" + std::to_string(n) + ")", share(bc_system(n)), bc_T(n), c_bc(n), Rational(t)});
    return out;
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void fail(const std::string& why) {
        pass = false;
        notes.push_back(why);
    }
    void note(const std::string& s) { notes.push_back(s); }
};

Outcome criterion1() {
    Outcome o;
    for (const auto& cs : stress_cases()) {
        const FockModule mod(cs.alg, ModuleSpec::vacuum(*cs.alg));
        try {
            const Rational c = extract_central_charge(cs.T, mod, kWindow, kCcLevel).c;
            if (!exact(cs.expected, cs.table)) o.fail(cs.label + ": formula " + cs.expected.str() + " vs table " + cs.table.str());
            if (!exact(c, cs.expected)) o.fail(cs.label + ": measured " + c.str() + ", expected " + cs.expected.str());
            else o.note(cs.label + " c=" + c.str());
        } catch (const std::exception& e) {
            o.fail(cs.label + ": " + e.what());
        }
    }
    return o;
}

Outcome criterion2() {
    Outcome o;
    try {
        sugawara(LieAlgebraData::sl2(Rational(-1, 2)));
        o.fail("sl2 with Q = -K/2 was accepted");
    } catch (const SugawaraRejected& e) {
        if (e.condition.empty()) o.fail("rejected without a witness");
        else o.note("witness: " + e.condition);
    }
    return o;
}

Outcome criterion3() {
    Outcome o;
    auto cases = stress_cases();
    const auto vir = share(virasoro(Rational(1, 2)));
    cases.push_back({"virasoro(1/2)", vir, FieldExpr::generator(*vir, "L"), Rational(1, 2), Rational(1, 2)});
    std::size_t checked = 0;
    for (const auto& cs : cases) {
        const FockModule mod(cs.alg, ModuleSpec::vacuum(*cs.alg));
        const auto v = virasoro_relation_check(cs.T, mod, cs.expected, kRelationModes, kRelationLevel);
        if (!v.empty())
            o.fail(cs.label + ": [L_" + std::to_string(v[0].m) + ", L_" + std::to_string(v[0].k) + "] on " + v[0].state);
        ++checked;
    }
    o.note(std::to_string(checked) + " stress tensors");
    return o;
}

Outcome criterion4() {
    Outcome o;
    std::vector<std::pair<std::string, AlgebraSpec>> algs;
    for (int d = 1; d <= 3; ++d) algs.emplace_back("heisenberg(" + std::to_string(d) + ")", heisenberg(d, identity_grid(d)));
    algs.emplace_back("sl2", kac_moody(LieAlgebraData::sl2(Rational(1))));
    algs.emplace_back("virasoro", virasoro(Rational(1, 2)));
    algs.emplace_back("dilaton", dilaton({Rational(2), Rational(1)}));
    for (int n = -1; n <= 2; ++n) algs.emplace_back("bc(" + std::to_string(n) + ")", bc_system(n));
    for (const auto& [label, alg] : algs) {
        const FockModule mod(share(alg), ModuleSpec::vacuum(alg));
        if (!character(mod, kDimLevel).agrees_with(vacuum_generating_function(alg, kDimLevel))) o.fail(label);
    }
    // lattice sectors: rank-many free bosons each
    LatticeVoa a1(LatticeSpec::with_default_cocycle({{2}}));
    const QSeries p = partition_generating_function(kDimLevel);
    for (const auto& l : a1.window(2))
        if (!character(a1.sector(l), kDimLevel).agrees_with(p)) o.fail("A1 sector " + a1.label(l));
    o.note(std::to_string(algs.size()) + " vacuum modules + 5 lattice sectors to level " + std::to_string(kDimLevel));
    return o;
}

std::map<std::pair<std::string, std::string>, Rational> normalized_square(int rank) {
    const auto cx = BrstComplex::heisenberg(rank, kBrstLevel);
    std::map<std::pair<std::string, std::string>, Rational> out;
    for (const auto& [grading, mat] : brst_square(*cx)) {
        const auto& from = cx->basis(grading.first, grading.second);
        const auto& to = cx->basis(grading.first, grading.second + 2);
        for (const auto& [rc, v] : mat.entries())
            out[{cx->state_string(to[rc.first]), cx->state_string(from[rc.second])}] = v / Rational(rank - 26);
    }
    return out;
}

Outcome criterion5() {
    Outcome o;
    {
        const auto cx = BrstComplex::heisenberg(26, kBrstLevel);
        for (const auto& [grading, mat] : brst_square(*cx))
            if (!mat.is_zero())
                o.fail("rank 26: delta^2 != 0 at level " + std::to_string(grading.first) + ", ghost " +
                       std::to_string(grading.second));
    }
    const auto s25 = normalized_square(25);
    if (s25.empty()) o.fail("rank 25: delta^2 = 0");
    const auto s24 = normalized_square(24), s27 = normalized_square(27);
    std::size_t shared = 0;
    for (const auto& [key, v] : s24) {
        const auto a = s25.find(key), b = s27.find(key);
        if (a == s25.end() || b == s27.end()) {
            o.fail("entry " + key.first + " <- " + key.second + " missing at another rank");
            continue;
        }
        ++shared;
        if (!exact(a->second, v) || !exact(b->second, v)) o.fail("delta^2/(rank-26) differs at " + key.second);
    }
    o.note("rank 25: " + std::to_string(s25.size()) + " nonzero entries, " + std::to_string(shared) +
           " shared with ranks 24, 27");
    const auto gv = ghost_virasoro_check(kWindow);
    if (!exact(gv.c_ghost, Rational(-26))) o.fail("ghost c = " + gv.c_ghost.str());
    if (!gv.b_primary || !gv.c_primary) o.fail("ghost fields not primary");
    try {
        const auto comp = composite_central_charge(Rational(26));
        if (!exact(comp.measured, Rational(0))) o.fail("composite c = " + comp.measured.str());
    } catch (const std::exception& e) {
        o.fail(std::string("composite: ") + e.what());
    }
    o.note("ghost c=" + gv.c_ghost.str() + ", composite 26 -> 0");
    return o;
}

Outcome criterion6() {
    Outcome o;
    for (int n : {0, 1, 2}) {
        const auto r = bose_fermi_check(n, kBoseFermiLevel);
        const std::string tag = "n=" + std::to_string(n);
        if (!r.current_bracket) o.fail(tag + ": j bracket");
        if (!r.ghost_number) o.fail(tag + ": j_0 vs ghost number");
        if (!r.stress_match) o.fail(tag + ": T from j vs bc_T");
        const auto alg = share(bc_system(n));
        const FockModule mod(alg, ModuleSpec::vacuum(*alg));
        const auto ch = character_by_ghost(mod, kCharacterCutoff);
        if (!qy_equal(ch, bc_fermion_character(n, kCharacterCutoff))) o.fail(tag + ": fermionic character");
        if (!qy_equal(ch, bc_boson_character(n, kCharacterCutoff))) o.fail(tag + ": bosonic character");
    }
    return o;
}

Outcome criterion7() {
    Outcome o;
    const std::vector<std::vector<long>> gram{{2}};
    LatticeVoa a1(LatticeSpec::with_default_cocycle(gram));
    const auto T = sugawara(LieAlgebraData::abelian({{Rational(2)}})).T;
    for (const auto& l : a1.window(3)) {
        const Rational expect(l[0] * 2 * l[0], 2);
        const auto& mod = a1.sector(l);
        const StateVector hw = mod.vacuum();
        if (!(apply_field_mode(T, 0, mod, hw) == hw.scaled(expect)) || !exact(a1.sector_weight(l), expect))
            o.fail("sector " + a1.label(l));
    }
    // selection rule and exponents
    const std::vector<std::vector<LatticeVector>> configs{
        {{1}, {-1}}, {{1}, {1}}, {{1}, {1}, {-2}}, {{1}, {-1}, {1}, {-1}}, {{2}, {-1}}, {{2}, {-1}, {-1}}};
    for (const auto& charges : configs) {
        const auto f = lattice_correlator(a1.spec(), charges);
        long total = 0;
        for (const auto& l : charges) total += l[0];
        if (total != 0) {
            if (!f.is_zero()) o.fail("selection rule violated");
            continue;
        }
        if (f.terms().size() != 1) {
            o.fail("expected a single factored term");
            continue;
        }
        for (std::size_t i = 0; i < charges.size(); ++i)
            for (std::size_t j = i + 1; j < charges.size(); ++j) {
                const auto& e = f.terms()[0].exponents;
                const auto it = e.find({static_cast<int>(i) + 1, static_cast<int>(j) + 1});
                if ((it == e.end() ? 0 : it->second) != 2 * charges[i][0] * charges[j][0]) o.fail("exponent mismatch");
            }
    }
    // genus-zero blocks
    const auto heis = share(heisenberg(1, identity_grid(1)));
    const auto bc = share(bc_system(2));
    const std::vector<std::pair<std::string, BlocksResult>> blocks{
        {"heisenberg", genus0_blocks_dim(FockModule(heis, ModuleSpec::vacuum(*heis)), 4)},
        {"bc(2)", genus0_blocks_dim(FockModule(bc, ModuleSpec::vacuum(*bc)), 4)},
        {"A1 window 2", genus0_blocks_dim(a1, 2, 4)}};
    std::string dims;
    for (const auto& [label, r] : blocks) {
        if (r.dim != 1 || !r.stable())
            o.fail(label + ": " + std::to_string(r.dim) + "/" + std::to_string(r.dim_next));
        dims += (dims.empty() ? "" : ", ") + label + " " + std::to_string(r.dim) + "/" + std::to_string(r.dim_next);
    }
    o.note("blocks at cutoffs 4/5: " + dims);
    return o;
}

Outcome criterion8() {
    Outcome o;
    std::size_t cases = 0, coefficients = 0;
    auto record = [&](const std::string& label, const CorrelatorCrossCheck& r) {
        ++cases;
        coefficients += r.coefficients;
        if (!r.agree) o.fail(label);
    };
    const RatGrid Q1{{Rational(1)}};
    const RatGrid Q2{{Rational(2), Rational(-1)}, {Rational(-1), Rational(3, 2)}};
    record("heisenberg 2-point", heisenberg_cross_check(Q1, {0, 0}, kCorrelatorDepth));
    record("heisenberg 4-point", heisenberg_cross_check(Q1, {0, 0, 0, 0}, kCorrelatorDepth));
    record("heisenberg rank 2 4-point", heisenberg_cross_check(Q2, {0, 1, 1, 0}, kCorrelatorDepth));
    LatticeVoa a1(LatticeSpec::with_default_cocycle({{2}}));
    for (const auto& charges : std::vector<std::vector<LatticeVector>>{
             {{1}, {-1}}, {{1}, {1}}, {{1}, {1}, {-2}}, {{1}, {-1}, {1}, {-1}}})
        record("A1 " + std::to_string(charges.size()) + "-point", lattice_cross_check(a1, charges, kCorrelatorDepth));
    LatticeVoa a2(LatticeSpec::with_default_cocycle({{2, -1}, {-1, 2}}));
    record("A2 3-point", lattice_cross_check(a2, {{1, 0}, {0, 1}, {-1, -1}}, 2));
    for (const auto& [n, b, c] : std::vector<std::tuple<int, int, int>>{
             {2, 0, 3}, {2, 1, 0}, {2, 1, 4}, {1, 1, 2}, {1, 0, 1}, {0, 2, 1}, {-1, 3, 0}})
        record("bc(" + std::to_string(n) + ") b^" + std::to_string(b) + " c^" + std::to_string(c),
               bc_cross_check(n, b, c, kCorrelatorDepth));
    o.note(std::to_string(cases) + " correlators, " + std::to_string(coefficients) + " coefficients compared");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"central charges", criterion1},     {"Sugawara rejection", criterion2},
        {"Virasoro relations", criterion3},  {"vacuum dimensions", criterion4},
        {"BRST", criterion5},                {"Bose-Fermi", criterion6},
        {"lattice and blocks", criterion7},  {"correlator cross-check", criterion8}};
    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " (" << criteria[i].first;
        line.setf(std::ios::fixed);
        line.precision(1);
        line << ", " << secs << "s)";
        for (const auto& n : o.notes) line << "; " << n;
        std::cout << line.str() << std::endl;
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
