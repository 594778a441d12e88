#pragma once

#include "vlab/constructors.hpp"
#include "vlab/field.hpp"
#include "vlab/fock.hpp"
#include "vlab/linalg.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vlab {

/// Solution of the Sugawara conditions: symmetric invariant B with
/// 2 (B o Q) + kappa(B) = Id, where kappa(B) v = sum_ij b_ij [u_i, [u_j, v]].
struct SugawaraTensor {
    RatGrid B;
    RatGrid kappa_operator;
    std::optional<Rational> kappa;  // set when kappa(B) is scalar
    Rational c;                     // 2 Tr(B o Q)
};

struct SugawaraResult {
    SugawaraTensor tensor;
    FieldExpr T;  // sum_ij b_ij :u_i u_j:, generators indexed as in kac_moody(g)
};

struct SugawaraRejected : std::runtime_error {
    SugawaraRejected(const std::string& what, std::string condition)
        : std::runtime_error(what), condition(std::move(condition)) {}
    std::string condition;
};

SugawaraResult sugawara(const LieAlgebraData& g);

/// T = -(1/2Q) :a a: - (lambda/2Q) d1 a on dilaton(spec).
FieldExpr dilaton_T(const DilatonSpec& spec);
/// T = (1-n) :(d1 b) c: - n :b (d1 c): on bc_system(n).
FieldExpr bc_T(int n);
/// j = :c b: on bc_system(n); j_0 is the ghost number.
FieldExpr fermion_current(int n);

struct NotVirasoroError : std::runtime_error {
    NotVirasoroError(const std::string& what, long m) : std::runtime_error(what), witness_m(m) {}
    long witness_m;
};

/// Matrix of L_m from the given level (to level - m).
using ModeMatrixProvider = std::function<RatMatrix(long m, long from_level)>;

struct CentralChargeResult {
    Rational c;
    bool vacuum_cross_checked = false;
};

/// Fits c from [L_m, L_-m] - 2m L_0 = (c/12)(m^3 - m) on every level in [min_level, max_level]
/// for m = 1..window. When the level-0 state at vacuum_index is annihilated by L_-1..L_2, also
/// requires L_2 L_-2 |0> = (c/2)|0>. Throws NotVirasoroError on any inconsistency.
CentralChargeResult extract_central_charge(const ModeMatrixProvider& L, const std::function<std::size_t(long)>& dim,
                                           long min_level, long max_level, int window,
                                           std::optional<std::size_t> vacuum_index);

CentralChargeResult extract_central_charge(const FieldExpr& T, const FockModule& mod, int window, long max_level = 4);

struct RelationViolation {
    long m = 0, k = 0;
    std::string state;
};

/// [L_m, L_k] = (m-k) L_{m+k} + (c/12)(m^3-m) delta_{m+k,0} for |m|,|k| <= window on all
/// basis states of level <= max_level.
std::vector<RelationViolation> virasoro_relation_check(const FieldExpr& T, const FockModule& mod, const Rational& c,
                                                       int window, long max_level);

/// [L_m, g_k] = ((weight-1) m - k) g_{m+k} for |m|,|k| <= window on basis states of level <= window.
std::vector<RelationViolation> verify_primary(const FieldExpr& T, int gen, int weight, const FockModule& mod,
                                              int window);

struct BoseFermiReport {
    bool current_bracket = false;  // [j_m, j_k] equals the dilaton(2n-1, -1) bracket
    bool ghost_number = false;     // j_0 = ghost number on every basis state
    bool stress_match = false;     // dilaton_T(2n-1, -1) rebuilt from j equals bc_T(n)
    std::vector<std::string> witnesses;
    bool ok() const { return current_bracket && ghost_number && stress_match; }
};

BoseFermiReport bose_fermi_check(int n, int cutoff);

}  // namespace vlab
