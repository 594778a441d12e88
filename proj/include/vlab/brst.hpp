#pragma once

#include "vlab/field.hpp"
#include "vlab/fock.hpp"
#include "vlab/linalg.hpp"
#include "vlab/stress.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vlab {

/// Basis vector of matter (x) ghosts. Matter generators are even, so no Koszul signs arise.
struct BrstState {
    Monomial matter;
    Monomial ghost;
    friend bool operator==(const BrstState& a, const BrstState& b) { return a.matter == b.matter && a.ghost == b.ghost; }
};

struct BrstStateLess {
    bool operator()(const BrstState& a, const BrstState& b) const;
};

using BrstVector = std::map<BrstState, Rational, BrstStateLess>;

/// Matter Virasoro module coupled to the bc(2) ghosts. The ghost vacuum is annihilated by
/// b_m (m >= -1) and c_m (m >= 2); gradings are (total level, ghost number).
class BrstComplex {
public:
    /// Throws std::invalid_argument when the matter algebra has odd generators or when T_matter
    /// does not measure c_matter on the matter vacuum.
    BrstComplex(AlgebraPtr matter, const FieldExpr& T_matter, const Rational& c_matter, long level_window);

    /// Rank-r Heisenberg matter with Q = Id (c = r).
    static std::unique_ptr<BrstComplex> heisenberg(int rank, long level_window);

    const FockModule& matter() const { return *matter_; }
    const FockModule& ghosts() const { return *ghosts_; }
    const Rational& matter_central_charge() const { return c_matter_; }
    long level_window() const { return window_; }
    long min_level() const { return ghosts_->min_level(); }

    /// Ghost numbers present at a level, ascending.
    std::vector<int> ghost_numbers(long level) const;
    const std::vector<BrstState>& basis(long level, int ghost) const;
    int ghost_number(const BrstState& s) const;
    long level(const BrstState& s) const;
    std::string state_string(const BrstState& s) const;

    /// delta = sum_n c_n L^matter_{-n} + (:b :c d1 c::)_0
    BrstVector apply_delta(const BrstVector& v) const;
    BrstVector apply_b(long m, const BrstVector& v) const;
    BrstVector apply_L_total(long m, const BrstVector& v) const;

    /// Matrix of delta from (level, ghost) to (level, ghost + 1).
    RatMatrix delta_matrix(long level, int ghost) const;

private:
    BrstVector act_matter_L(long n, const BrstVector& v) const;
    BrstVector act_ghost(const std::function<StateVector(const StateVector&)>& op, const BrstVector& v) const;
    void build_level(long level) const;

    AlgebraPtr matter_alg_;
    AlgebraPtr ghost_alg_;
    std::unique_ptr<FockModule> matter_;
    std::unique_ptr<FockModule> ghosts_;
    Rational c_matter_;
    long window_;
    mutable std::unique_ptr<FieldModeCache> L_matter_;
    mutable std::unique_ptr<FieldModeCache> L_ghost_;
    mutable std::unique_ptr<FieldModeCache> delta_ghost_;
    mutable std::map<long, std::map<int, std::vector<BrstState>>> bases_;
    mutable std::map<std::pair<long, int>, RatMatrix> delta_cache_;
};

BrstVector brst_add(BrstVector a, const BrstVector& b, const Rational& scale = Rational(1));

/// (level, ghost) -> matrix of delta into ghost + 1, for every grading with level <= window.
using BrstMatrixFamily = std::map<std::pair<long, int>, RatMatrix>;

BrstMatrixFamily brst_operator(const BrstComplex& cx);
/// (level, ghost) -> matrix of delta^2 into ghost + 2.
BrstMatrixFamily brst_square(const BrstComplex& cx);

struct BrstPropertyReport {
    bool degree_one = true;        // delta raises ghost number by 1, preserves level
    bool b_anticommutator = true;  // {delta, b_m} = L^total_m
    bool commutes_with_T = true;   // [delta, L^total_m] = 0
    std::vector<std::string> witnesses;
    bool ok() const { return degree_one && b_anticommutator && commutes_with_T; }
};

/// Checks the three properties on all states of level <= max_level for |m| <= mode_window.
BrstPropertyReport brst_properties(const BrstComplex& cx, long max_level, long mode_window);

struct BrstNotNilpotent : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// dim ker(delta at (level, ghost)) - rank(delta into (level, ghost)); requires delta^2 = 0 around it.
std::size_t brst_cohomology(const BrstComplex& cx, long level, int ghost);

struct GhostVirasoroReport {
    Rational c_ghost;
    bool b_primary = false;
    bool c_primary = false;
    Rational control_c;  // same construction in bc(1)
};

GhostVirasoroReport ghost_virasoro_check(int window);

struct CompositeChargeResult {
    Rational formula;   // c_matter - 26
    Rational measured;  // extract_central_charge of T_matter + T_ghost
};

/// Realizes the matter as virasoro(c_matter) and measures the composite charge on
/// virasoro(c_matter) (+) bc(2). Throws std::runtime_error on a mismatch.
CompositeChargeResult composite_central_charge(const Rational& matter_c);

}  // namespace vlab
