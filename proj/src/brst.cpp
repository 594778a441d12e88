#include "vlab/brst.hpp"

#include "vlab/constructors.hpp"

#include <sstream>

namespace vlab {

bool BrstStateLess::operator()(const BrstState& a, const BrstState& b) const {
    const long la = monomial_level(a.matter), lb = monomial_level(b.matter);
    if (la != lb) return la < lb;
    MonomialLess less;
    if (less(a.matter, b.matter)) return true;
    if (less(b.matter, a.matter)) return false;
    return less(a.ghost, b.ghost);
}

BrstVector brst_add(BrstVector a, const BrstVector& b, const Rational& scale) {
    for (const auto& [s, c] : b) {
        Rational v = c * scale;
        if (v.is_zero()) continue;
        auto [it, ins] = a.try_emplace(s, v);
        if (!ins) {
            it->second += v;
            if (it->second.is_zero()) a.erase(it);
        }
    }
    return a;
}

namespace {

constexpr int kB = 0;
constexpr int kC = 1;

// (u (x) w) from coefficient maps of the two factors
void add_tensor(BrstVector& out, const StateVector& matter, const StateVector& ghost, const Rational& scale) {
    for (const auto& [u, cu] : matter.terms())
        for (const auto& [w, cw] : ghost.terms()) {
            Rational v = cu * cw * scale;
            auto [it, ins] = out.try_emplace(BrstState{u, w}, v);
            if (!ins) {
                it->second += v;
                if (it->second.is_zero()) out.erase(it);
            }
        }
}

}  // namespace

BrstComplex::BrstComplex(AlgebraPtr matter, const FieldExpr& T_matter, const Rational& c_matter, long level_window)
    : matter_alg_(std::move(matter)), c_matter_(c_matter), window_(level_window) {
    if (!matter_alg_) throw std::invalid_argument("BRST complex without matter");
    for (int g = 0; g < matter_alg_->size(); ++g)
        if (matter_alg_->is_odd(g)) throw std::invalid_argument("BRST matter must be purely even");
    if (level_window < 0) throw std::invalid_argument("BRST level window must be non-negative");
    ghost_alg_ = std::make_shared<const AlgebraSpec>(bc_system(2));
    matter_ = std::make_unique<FockModule>(matter_alg_, ModuleSpec::vacuum(*matter_alg_));
    ghosts_ = std::make_unique<FockModule>(ghost_alg_, ModuleSpec::vacuum(*ghost_alg_));

    CentralChargeResult measured = extract_central_charge(T_matter, *matter_, 2, 0);
    if (measured.c != c_matter)
        throw std::invalid_argument("matter stress tensor measures c = " + measured.c.str() + ", expected " +
                                    c_matter.str());

    L_matter_ = std::make_unique<FieldModeCache>(T_matter, *matter_);
    L_ghost_ = std::make_unique<FieldModeCache>(bc_T(2), *ghosts_);
    FieldExpr b = FieldExpr::generator(*ghost_alg_, kB);
    FieldExpr c = FieldExpr::generator(*ghost_alg_, kC);
    delta_ghost_ = std::make_unique<FieldModeCache>(nop(b, nop(c, c.derivative(1))), *ghosts_);
}

std::unique_ptr<BrstComplex> BrstComplex::heisenberg(int rank, long level_window) {
    RatGrid Q(static_cast<std::size_t>(rank), std::vector<Rational>(static_cast<std::size_t>(rank)));
    for (int i = 0; i < rank; ++i) Q[i][i] = Rational(1);
    SugawaraResult s = sugawara(LieAlgebraData::abelian(Q));
    auto alg = std::make_shared<const AlgebraSpec>(vlab::heisenberg(rank, Q));
    return std::make_unique<BrstComplex>(alg, s.T, s.tensor.c, level_window);
}

void BrstComplex::build_level(long level) const {
    if (bases_.count(level)) return;
    auto& by_ghost = bases_[level];
    const long qmin = ghosts_->min_level();
    for (long p = 0; level - p >= qmin; ++p) {
        const auto& mb = matter_->basis_at(p);
        const auto& gb = ghosts_->basis_at(level - p);
        for (const auto& u : mb)
            for (const auto& w : gb) by_ghost[ghosts_->ghost_number(w)].push_back(BrstState{u, w});
    }
}

std::vector<int> BrstComplex::ghost_numbers(long level) const {
    build_level(level);
    std::vector<int> out;
    for (const auto& [g, states] : bases_.at(level)) out.push_back(g);
    return out;
}

const std::vector<BrstState>& BrstComplex::basis(long level, int ghost) const {
    static const std::vector<BrstState> empty;
    if (level < min_level()) return empty;
    build_level(level);
    const auto& by_ghost = bases_.at(level);
    auto it = by_ghost.find(ghost);
    return it == by_ghost.end() ? empty : it->second;
}

int BrstComplex::ghost_number(const BrstState& s) const { return ghosts_->ghost_number(s.ghost); }

long BrstComplex::level(const BrstState& s) const { return monomial_level(s.matter) + monomial_level(s.ghost); }

std::string BrstComplex::state_string(const BrstState& s) const {
    std::string m = matter_->state_string(s.matter);
    std::string g = ghosts_->state_string(s.ghost);
    // drop the matter vacuum label: "a(-1) |0>" + "c(1) |0>" -> "a(-1) c(1) |0>"
    const std::string vac = matter_->spec().hw_label;
    if (m.size() >= vac.size()) m.resize(m.size() - vac.size());
    return m + g;
}

BrstVector BrstComplex::act_matter_L(long n, const BrstVector& v) const {
    BrstVector out;
    for (const auto& [s, c] : v) add_tensor(out, L_matter_->apply(n, StateVector::basis(s.matter)), StateVector::basis(s.ghost), c);
    return out;
}

BrstVector BrstComplex::act_ghost(const std::function<StateVector(const StateVector&)>& op, const BrstVector& v) const {
    BrstVector out;
    for (const auto& [s, c] : v) add_tensor(out, StateVector::basis(s.matter), op(StateVector::basis(s.ghost)), c);
    return out;
}

BrstVector BrstComplex::apply_delta(const BrstVector& v) const {
    BrstVector out;
    for (const auto& [s, coef] : v) {
        const long p = monomial_level(s.matter);
        const long q = monomial_level(s.ghost);
        const StateVector u = StateVector::basis(s.matter);
        const StateVector w = StateVector::basis(s.ghost);
        // c_n L_{-n}: L_{-n} u needs p + n >= 0, c_n w needs q - n >= min ghost level
        for (long n = -p; q - n >= ghosts_->min_level(); ++n) {
            StateVector cw = ghosts_->apply_mode(kC, n, w);
            if (cw.is_zero()) continue;
            StateVector Lu = L_matter_->apply(-n, u);
            if (Lu.is_zero()) continue;
            add_tensor(out, Lu, cw, coef);
        }
        add_tensor(out, u, delta_ghost_->apply(0, w), coef);
    }
    return out;
}

BrstVector BrstComplex::apply_b(long m, const BrstVector& v) const {
    return act_ghost([&](const StateVector& w) { return ghosts_->apply_mode(kB, m, w); }, v);
}

BrstVector BrstComplex::apply_L_total(long m, const BrstVector& v) const {
    BrstVector out = act_matter_L(m, v);
    return brst_add(out, act_ghost([&](const StateVector& w) { return L_ghost_->apply(m, w); }, v));
}

RatMatrix BrstComplex::delta_matrix(long level, int ghost) const {
    auto key = std::make_pair(level, ghost);
    auto hit = delta_cache_.find(key);
    if (hit != delta_cache_.end()) return hit->second;
    const auto& from = basis(level, ghost);
    const auto& to = basis(level, ghost + 1);
    std::map<BrstState, std::size_t, BrstStateLess> row;
    for (std::size_t i = 0; i < to.size(); ++i) row.emplace(to[i], i);
    RatMatrix m(to.size(), from.size());
    for (std::size_t j = 0; j < from.size(); ++j) {
        BrstVector image = apply_delta(BrstVector{{from[j], Rational(1)}});
        for (const auto& [s, c] : image) {
            auto it = row.find(s);
            if (it == row.end())
                throw std::logic_error("delta leaves grading (" + std::to_string(level) + ", " +
                                       std::to_string(ghost + 1) + ") on " + state_string(from[j]));
            m.set(it->second, j, c);
        }
    }
    delta_cache_.emplace(key, m);
    return m;
}

// ---- families -----------------------------------------------------------------

BrstMatrixFamily brst_operator(const BrstComplex& cx) {
    BrstMatrixFamily out;
    for (long l = cx.min_level(); l <= cx.level_window(); ++l)
        for (int g : cx.ghost_numbers(l)) out.emplace(std::make_pair(l, g), cx.delta_matrix(l, g));
    return out;
}

BrstMatrixFamily brst_square(const BrstComplex& cx) {
    BrstMatrixFamily out;
    for (long l = cx.min_level(); l <= cx.level_window(); ++l)
        for (int g : cx.ghost_numbers(l))
            out.emplace(std::make_pair(l, g), cx.delta_matrix(l, g + 1) * cx.delta_matrix(l, g));
    return out;
}

BrstPropertyReport brst_properties(const BrstComplex& cx, long max_level, long mode_window) {
    BrstPropertyReport rep;
    auto note = [&](bool& flag, const std::string& w) {
        if (flag) rep.witnesses.push_back(w);
        flag = false;
    };
    for (long l = cx.min_level(); l <= max_level; ++l)
        for (int g : cx.ghost_numbers(l))
            for (const auto& s : cx.basis(l, g)) {
                const BrstVector v{{s, Rational(1)}};
                const BrstVector dv = cx.apply_delta(v);
                for (const auto& [t, c] : dv)
                    if (cx.level(t) != l || cx.ghost_number(t) != g + 1) note(rep.degree_one, "degree on " + cx.state_string(s));
                for (long m = -mode_window; m <= mode_window; ++m) {
                    BrstVector anti = brst_add(cx.apply_delta(cx.apply_b(m, v)), cx.apply_b(m, dv));
                    if (anti != cx.apply_L_total(m, v))
                        note(rep.b_anticommutator, "{delta, b_" + std::to_string(m) + "} on " + cx.state_string(s));
                    BrstVector comm = brst_add(cx.apply_delta(cx.apply_L_total(m, v)), cx.apply_L_total(m, dv), Rational(-1));
                    if (!comm.empty())
                        note(rep.commutes_with_T, "[delta, L_" + std::to_string(m) + "] on " + cx.state_string(s));
                }
            }
    return rep;
}

std::size_t brst_cohomology(const BrstComplex& cx, long level, int ghost) {
    const std::size_t dim = cx.basis(level, ghost).size();
    if (dim == 0) return 0;
    RatMatrix out = cx.delta_matrix(level, ghost);
    RatMatrix in = cx.delta_matrix(level, ghost - 1);
    auto require_zero = [&](const RatMatrix& sq, int g) {
        if (!sq.is_zero()) {
            const auto& [rc, v] = *sq.entries().begin();
            throw BrstNotNilpotent("delta^2 != 0 at (level " + std::to_string(level) + ", ghost " + std::to_string(g) +
                                   "): entry " + v.str() + " on " + cx.state_string(cx.basis(level, g)[rc.second]));
        }
    };
    require_zero(out * in, ghost - 1);
    require_zero(cx.delta_matrix(level, ghost + 1) * out, ghost);
    return dim - matrix_rank(out) - matrix_rank(in);
}

// ---- ghost Virasoro and composite charge ------------------------------------------

GhostVirasoroReport ghost_virasoro_check(int window) {
    GhostVirasoroReport rep;
    auto alg = std::make_shared<const AlgebraSpec>(bc_system(2));
    FockModule mod(alg, ModuleSpec::vacuum(*alg));
    FieldExpr S = bc_T(2);
    rep.c_ghost = extract_central_charge(S, mod, window, window).c;
    rep.b_primary = verify_primary(S, kB, 2, mod, window).empty();
    rep.c_primary = verify_primary(S, kC, -1, mod, window).empty();
    auto alg1 = std::make_shared<const AlgebraSpec>(bc_system(1));
    FockModule mod1(alg1, ModuleSpec::vacuum(*alg1));
    rep.control_c = extract_central_charge(bc_T(1), mod1, window, window).c;
    return rep;
}

CompositeChargeResult composite_central_charge(const Rational& matter_c) {
    const AlgebraSpec vir = virasoro(matter_c);
    const AlgebraSpec bc = bc_system(2);
    auto total = std::make_shared<const AlgebraSpec>(direct_sum(vir, bc, "virasoro+bc"));
    FockModule mod(total, module_direct_sum(ModuleSpec::vacuum(vir), vir.size(), ModuleSpec::vacuum(bc)));
    FieldExpr T = FieldExpr::generator(*total, 0) + shift_generators(bc_T(2), bc, *total, vir.size());
    CompositeChargeResult out{matter_c - Rational(26), extract_central_charge(T, mod, 3, 3).c};
    if (out.formula != out.measured)
        throw std::runtime_error("composite central charge " + out.measured.str() + " differs from c_matter - 26 = " +
                                 out.formula.str());
    return out;
}

}  // namespace vlab
