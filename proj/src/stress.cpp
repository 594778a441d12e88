#include "vlab/stress.hpp"

#include <map>
#include <sstream>
#include <tuple>

namespace vlab {

// ---- Sugawara -------------------------------------------------------------------

namespace {

struct PairIndex {
    int d;
    int operator()(int i, int j) const {
        if (i > j) std::swap(i, j);
        return i * d - i * (i - 1) / 2 + (j - i);
    }
    int count() const { return d * (d + 1) / 2; }
};

RatGrid unpack(const RatVector& x, int d) {
    PairIndex idx{d};
    RatGrid B(d, std::vector<Rational>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) B[i][j] = x[static_cast<std::size_t>(idx(i, j))];
    return B;
}

// Coefficient rows of 2 (B o Q) + kappa(B) as a linear function of the packed B.
std::vector<std::map<int, Rational>> condition_rows(const LieAlgebraData& g) {
    const int d = g.dimension();
    PairIndex idx{d};
    const auto nz = g.nonzero_structure();
    std::vector<std::map<int, Rational>> rows(static_cast<std::size_t>(d * d));
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) {
            auto& row = rows[static_cast<std::size_t>(x * d + y)];
            // (B o Q)_{xy} = sum_j b_xj Q_jy
            for (int j = 0; j < d; ++j)
                if (!g.Q[j][y].is_zero()) row[idx(x, j)] += Rational(2) * g.Q[j][y];
            // kappa(B)_{xy} = sum_ij b_ij sum_l f_jy^l f_il^x
            for (int j = 0; j < d; ++j)
                for (const auto& [l, f1] : nz[j][y])
                    for (int i = 0; i < d; ++i)
                        if (!g.structure[i][l][x].is_zero()) row[idx(i, j)] += f1 * g.structure[i][l][x];
        }
    return rows;
}

// Invariance: sum_i b_is f_xi^t + sum_j b_tj f_xj^s = 0 for all x, t, s.
std::vector<std::map<int, Rational>> invariance_rows(const LieAlgebraData& g) {
    const int d = g.dimension();
    PairIndex idx{d};
    const auto nz = g.nonzero_structure();
    std::map<std::tuple<int, int, int>, std::map<int, Rational>> rows;
    for (int x = 0; x < d; ++x)
        for (int i = 0; i < d; ++i)
            for (const auto& [t, f] : nz[x][i])
                for (int s = 0; s < d; ++s) {
                    rows[{x, t, s}][idx(i, s)] += f;  // term b_is f_xi^t
                    rows[{x, s, t}][idx(s, i)] += f;  // term b_tj f_xj^s with (t, j, s) -> (s, i, t)
                }
    std::vector<std::map<int, Rational>> out;
    for (auto& [key, row] : rows) out.push_back(std::move(row));
    return out;
}

RatMatrix rows_to_matrix(const std::vector<std::map<int, Rational>>& rows, int cols) {
    RatMatrix m(rows.size(), static_cast<std::size_t>(cols));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (const auto& [c, v] : rows[r])
            if (!v.is_zero()) m.set(r, static_cast<std::size_t>(c), v);
    return m;
}

}  // namespace

SugawaraResult sugawara(const LieAlgebraData& g) {
    g.validate();
    const int d = g.dimension();
    PairIndex idx{d};
    const auto cond = condition_rows(g);
    const auto inv = invariance_rows(g);

    std::vector<std::map<int, Rational>> all = cond;
    all.insert(all.end(), inv.begin(), inv.end());
    RatVector rhs(all.size());
    for (int x = 0; x < d; ++x) rhs[static_cast<std::size_t>(x * d + x)] = Rational(1);
    LinearSolution sol = solve_linear(rows_to_matrix(all, idx.count()), rhs);

    if (!sol.consistent) {
        // Image of the invariant B under B -> 2(B o Q) + kappa(B); Id is not in it.
        LinearSolution invariant = solve_linear(rows_to_matrix(inv, idx.count()), RatVector(inv.size()));
        RatMatrix image(cond.size(), invariant.null_space.size());
        RatMatrix c = rows_to_matrix(cond, idx.count());
        for (std::size_t j = 0; j < invariant.null_space.size(); ++j) {
            RatVector y = c.apply(invariant.null_space[j]);
            for (std::size_t r = 0; r < y.size(); ++r) image.set(r, j, y[r]);
        }
        std::ostringstream os;
        os << "no admissible B: 2(B o Q) + kappa(B) = Id has no symmetric invariant solution (invariant B form a "
           << invariant.null_space.size() << "-dimensional space on which 2(B o Q) + kappa(B) has rank "
           << matrix_rank(image) << ")";
        throw SugawaraRejected(os.str(), "2(B o Q) + kappa(B) = Id");
    }
    if (!sol.null_space.empty())
        throw SugawaraRejected("B is not unique: " + std::to_string(sol.null_space.size()) +
                                   "-dimensional family of solutions",
                               "uniqueness of B");

    SugawaraResult out;
    out.tensor.B = unpack(sol.particular, d);
    const RatGrid& B = out.tensor.B;
    RatGrid kappa(d, std::vector<Rational>(d));
    Rational trace;
    const auto nz = g.nonzero_structure();
    for (int x = 0; x < d; ++x) {
        for (int j = 0; j < d; ++j) trace += B[x][j] * g.Q[j][x];
    }
    // kappa(B) u_y = sum_ij b_ij [u_i, [u_j, u_y]]
    for (int y = 0; y < d; ++y)
        for (int j = 0; j < d; ++j)
            for (const auto& [l, f1] : nz[j][y])
                for (int i = 0; i < d; ++i)
                    for (const auto& [x, f2] : nz[i][l]) kappa[x][y] += B[i][j] * f1 * f2;
    out.tensor.kappa_operator = kappa;
    bool scalar = true;
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            if ((x == y && kappa[x][y] != kappa[0][0]) || (x != y && !kappa[x][y].is_zero())) scalar = false;
    if (scalar) out.tensor.kappa = kappa[0][0];
    out.tensor.c = Rational(2) * trace;

    AlgebraSpec alg = kac_moody(g);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (!B[i][j].is_zero())
                out.T = out.T + nop(FieldExpr::generator(alg, i), FieldExpr::generator(alg, j)).scaled(B[i][j]);
    return out;
}

// ---- explicit stress tensors --------------------------------------------------

FieldExpr dilaton_T(const DilatonSpec& spec) {
    AlgebraSpec alg = dilaton(spec);
    FieldExpr a = FieldExpr::generator(alg, 0);
    Rational two_q = Rational(2) * spec.Q;
    return nop(a, a).scaled(Rational(-1) / two_q) - a.derivative(1).scaled(spec.lambda / two_q);
}

FieldExpr bc_T(int n) {
    AlgebraSpec alg = bc_system(n);
    FieldExpr b = FieldExpr::generator(alg, 0);
    FieldExpr c = FieldExpr::generator(alg, 1);
    return nop(b.derivative(1), c).scaled(Rational(1 - n)) - nop(b, c.derivative(1)).scaled(Rational(n));
}

FieldExpr fermion_current(int n) {
    AlgebraSpec alg = bc_system(n);
    return nop(FieldExpr::generator(alg, 1), FieldExpr::generator(alg, 0));
}

// ---- central charge -------------------------------------------------------------

namespace {

// Returns the scalar s when m == s * Id, nullopt otherwise.
std::optional<Rational> scalar_of(const RatMatrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    if (m.rows() == 0) return Rational(0);
    Rational s = m.at(0, 0);
    for (const auto& [rc, v] : m.entries())
        if (rc.first != rc.second || v != s) return std::nullopt;
    if (!s.is_zero() && m.nonzeros() != m.rows()) return std::nullopt;
    return s;
}

}  // namespace

CentralChargeResult extract_central_charge(const ModeMatrixProvider& L, const std::function<std::size_t(long)>& dim,
                                           long min_level, long max_level, int window,
                                           std::optional<std::size_t> vacuum_index) {
    if (window < 2) throw std::invalid_argument("central charge extraction needs window >= 2");
    std::optional<Rational> c;
    for (long m = 1; m <= window; ++m) {
        for (long l = min_level; l <= max_level; ++l) {
            if (dim(l) == 0) continue;
            RatMatrix D = L(m, l + m) * L(-m, l) - RatMatrix::identity(dim(l)) * L(0, l).scaled(Rational(2 * m));
            if (l - m >= min_level) D = D - L(-m, l - m) * L(m, l);
            auto s = scalar_of(D);
            std::string where = " (m = " + std::to_string(m) + ", level " + std::to_string(l) + ")";
            if (!s) throw NotVirasoroError("not a Virasoro field: [L_m, L_-m] - 2m L_0 is not central" + where, m);
            if (m == 1) {
                if (!s->is_zero()) throw NotVirasoroError("not a Virasoro field: [L_1, L_-1] != 2 L_0" + where, m);
                continue;
            }
            Rational fit = Rational(12) * *s / Rational(m * m * m - m);
            if (!c) c = fit;
            else if (*c != fit)
                throw NotVirasoroError("not a Virasoro field: central term " + fit.str() + " disagrees with " +
                                           c->str() + where,
                                       m);
        }
    }
    if (!c) throw NotVirasoroError("not a Virasoro field: no nonempty level in the window", 2);
    CentralChargeResult out{*c, false};
    if (vacuum_index && min_level <= 0 && max_level >= 0) {
        const std::size_t v = *vacuum_index;
        auto kills = [&](long m) {
            RatMatrix Lm = L(m, 0);
            for (const auto& [rc, val] : Lm.entries())
                if (rc.second == v) return false;
            return true;
        };
        if (kills(-1) && kills(0) && kills(1) && kills(2)) {
            RatMatrix two = L(2, 2) * L(-2, 0);
            for (std::size_t r = 0; r < dim(0); ++r) {
                Rational expect = r == v ? *c / Rational(2) : Rational(0);
                if (two.at(r, v) != expect)
                    throw NotVirasoroError("vacuum check L_2 L_-2 |0> = (c/2)|0> disagrees with the commutator fit", 2);
            }
            out.vacuum_cross_checked = true;
        }
    }
    return out;
}

CentralChargeResult extract_central_charge(const FieldExpr& T, const FockModule& mod, int window, long max_level) {
    if (T.weight() != 2) throw NotVirasoroError("not a Virasoro field: weight " + std::to_string(T.weight()), 0);
    FieldModeCache cache(T, mod);
    std::map<std::pair<long, long>, RatMatrix> memo;
    ModeMatrixProvider L = [&](long m, long from) -> RatMatrix {
        auto key = std::make_pair(m, from);
        auto it = memo.find(key);
        if (it == memo.end()) it = memo.emplace(key, cache.matrix(m, from)).first;
        return it->second;
    };
    auto dim = [&](long l) { return mod.basis_at(l).size(); };
    std::optional<std::size_t> vac;
    if (mod.min_level() <= 0) {
        const auto& b0 = mod.basis_at(0);
        for (std::size_t i = 0; i < b0.size(); ++i)
            if (b0[i].empty()) vac = i;
    }
    return extract_central_charge(L, dim, mod.min_level(), max_level, window, vac);
}

// ---- relation suites ------------------------------------------------------------

std::vector<RelationViolation> virasoro_relation_check(const FieldExpr& T, const FockModule& mod, const Rational& c,
                                                       int window, long max_level) {
    FieldModeCache L(T, mod);
    std::vector<RelationViolation> out;
    for (long l = mod.min_level(); l <= max_level; ++l)
        for (const auto& mono : mod.basis_at(l)) {
            StateVector v = StateVector::basis(mono);
            for (long m = -window; m <= window; ++m)
                for (long k = -window; k <= window; ++k) {
                    StateVector lhs = L.apply(m, L.apply(k, v)) - L.apply(k, L.apply(m, v));
                    StateVector rhs = L.apply(m + k, v).scaled(Rational(m - k));
                    if (m + k == 0) rhs += v.scaled(c / Rational(12) * Rational(m * m * m - m));
                    if (!(lhs == rhs)) out.push_back({m, k, mod.state_string(mono)});
                }
        }
    return out;
}

std::vector<RelationViolation> verify_primary(const FieldExpr& T, int gen, int weight, const FockModule& mod,
                                              int window) {
    FieldModeCache L(T, mod);
    std::vector<RelationViolation> out;
    for (long l = mod.min_level(); l <= window; ++l)
        for (const auto& mono : mod.basis_at(l)) {
            StateVector v = StateVector::basis(mono);
            for (long m = -window; m <= window; ++m)
                for (long k = -window; k <= window; ++k) {
                    StateVector lhs = L.apply(m, mod.apply_mode(gen, k, v)) - mod.apply_mode(gen, k, L.apply(m, v));
                    StateVector rhs = mod.apply_mode(gen, m + k, v).scaled(Rational((weight - 1) * m - k));
                    if (!(lhs == rhs)) out.push_back({m, k, mod.state_string(mono)});
                }
        }
    return out;
}

BoseFermiReport bose_fermi_check(int n, int cutoff) {
    auto alg = std::make_shared<const AlgebraSpec>(bc_system(n));
    FockModule mod(alg, ModuleSpec::vacuum(*alg));
    const DilatonSpec twisted{Rational(2 * n - 1), Rational(-1)};
    const AlgebraSpec target = dilaton(twisted);
    FieldModeCache j(fermion_current(n), mod);
    BoseFermiReport rep;
    rep.current_bracket = rep.ghost_number = rep.stress_match = true;

    for (long l = mod.min_level(); l <= cutoff; ++l)
        for (const auto& mono : mod.basis_at(l)) {
            StateVector v = StateVector::basis(mono);
            for (long m = -cutoff; m <= cutoff; ++m)
                for (long k = -cutoff; k <= cutoff; ++k) {
                    StateVector lhs = j.apply(m, j.apply(k, v)) - j.apply(k, j.apply(m, v));
                    ModeCombination br = target.bracket(0, m, 0, k);
                    StateVector rhs = v.scaled(br.central);
                    if (!(lhs == rhs) && rep.current_bracket) {
                        rep.current_bracket = false;
                        rep.witnesses.push_back("[j_" + std::to_string(m) + ", j_" + std::to_string(k) + "] on " +
                                                mod.state_string(mono));
                    }
                }
            if (!(j.apply(0, v) == v.scaled(Rational(mod.ghost_number(mono)))) && rep.ghost_number) {
                rep.ghost_number = false;
                rep.witnesses.push_back("j_0 on " + mod.state_string(mono));
            }
        }

    FieldExpr from_j = dilaton_T(twisted).substitute(0, fermion_current(n));
    FieldModeCache a(from_j, mod), b(bc_T(n), mod);
    for (long l = mod.min_level(); l <= cutoff && rep.stress_match; ++l)
        for (long m = -cutoff; m <= cutoff; ++m) {
            if (l - m < mod.min_level()) continue;
            if (!(a.matrix(m, l) == b.matrix(m, l))) {
                rep.stress_match = false;
                rep.witnesses.push_back("T-from-j differs from bc_T at mode " + std::to_string(m) + ", level " +
                                        std::to_string(l));
                break;
            }
        }
    return rep;
}

}  // namespace vlab
