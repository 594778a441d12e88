#pragma once

#include "vlab/constructors.hpp"
#include "vlab/fock.hpp"
#include "vlab/qseries.hpp"
#include "vlab/rational.hpp"

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace vlab {

/// scalar * prod_{i<j} (z_i - z_j)^{e_ij}; points are numbered from 1.
struct FactoredTerm {
    Rational scalar;
    std::map<std::pair<int, int>, long> exponents;
};

/// Sum of factored terms; poles only on diagonals.
class RationalFunction {
public:
    explicit RationalFunction(int points = 0) : points_(points) {}

    int points() const { return points_; }
    const std::vector<FactoredTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add_term(FactoredTerm t);

    /// Exact value at pairwise distinct rational points (points[0] is z1).
    Rational evaluate(const std::vector<Rational>& z) const;

    /// Laurent coefficients in |z1| > |z2| > ... > |zn| for every exponent vector with
    /// sum_j (j-1) alpha_j <= max_weight.
    std::map<std::vector<long>, Rational> expand(long max_weight) const;

    /// Smallest sum_j (j-1) alpha_j over the leading monomials of the terms (0 when zero).
    long leading_weight() const;
    /// Largest |alpha_j| over the leading monomials.
    long leading_spread() const;

    /// "(z1-z2)^-2 * (1/1)"; terms joined by " + ", "0" when empty.
    std::string str() const;

private:
    int points_;
    std::vector<FactoredTerm> terms_;
};

/// Sum over j != point of the residue at z_point = z_j, the other coordinates fixed to z
/// (z[point - 1] is ignored). Zero for a weight-one current paired with any configuration.
Rational residue_sum(const RationalFunction& f, int point, const std::vector<Rational>& z);

/// Wick sum of Q(a_i, a_j) (z_i - z_j)^-2 over perfect matchings; gens index the Heisenberg generators.
RationalFunction heisenberg_correlator(const RatGrid& Q, const std::vector<int>& gens);
/// prod_{i<j} eps(l_i, l_j) (z_i - z_j)^{Q(l_i, l_j)} when sum l_i = 0, zero otherwise.
RationalFunction lattice_correlator(const LatticeSpec& spec, const std::vector<LatticeVector>& charges);

/// <b(z_1) .. b(z_B) c(z_{B+1}) .. c(z_{B+C})> against the dual of the zero-mode state
/// (the product of the c_m, |m| <= n-1, or of the b_m, |m| <= -n, in basis order).
/// Zero unless C - B = 2n - 1.
RationalFunction bc_correlator(int n, int b_count, int c_count);
/// The zero-mode state paired against by bc_correlator.
Monomial bc_top_state(int n);

/// Coefficients of the same expansion computed from matrix elements of modes:
/// <top| X1_{k1} ... Xn_{kn} |0> with k_i = -alpha_i - h_i, for alpha_2..alpha_n in [-box, box] and
/// sum_j (j-1) alpha_j <= max_weight.
using SeriesCoefficients = std::map<std::vector<long>, Rational>;

SeriesCoefficients heisenberg_mode_series(const RatGrid& Q, const std::vector<int>& gens, long max_weight, long box);
SeriesCoefficients lattice_mode_series(const LatticeVoa& voa, const std::vector<LatticeVector>& charges,
                                       long max_weight, long box);
SeriesCoefficients bc_mode_series(int n, int b_count, int c_count, long max_weight, long box);

/// Restricts an expansion to alpha_2..alpha_n in [-box, box].
SeriesCoefficients restrict_to_box(const SeriesCoefficients& s, long box);

/// Closed form against the mode sums over `depth` weight steps past the leading term.
struct CorrelatorCrossCheck {
    bool agree = false;
    std::size_t coefficients = 0;  // nonzero coefficients compared
    long max_weight = 0;
    long box = 0;
};

CorrelatorCrossCheck heisenberg_cross_check(const RatGrid& Q, const std::vector<int>& gens, long depth);
CorrelatorCrossCheck lattice_cross_check(const LatticeVoa& voa, const std::vector<LatticeVector>& charges, long depth);
CorrelatorCrossCheck bc_cross_check(int n, int b_count, int c_count, long depth);

struct BlocksResult {
    long level = 0;
    std::size_t dim = 0;       // coinvariants truncated at `level`
    std::size_t dim_next = 0;  // truncated at level + 1
    bool stable() const { return dim == dim_next; }
};

/// dim V_{<=L} / (g_out V)_{<=L}, g_out spanned by g_m with m <= weight(g) - 1.
BlocksResult genus0_blocks_dim(const FockModule& vacuum, long level);
/// Same for the lattice algebra on the sectors |lambda_i| <= radius, adding Gamma_{mu,k} with
/// k <= h_mu - 1; the truncation bounds the conformal weight.
BlocksResult genus0_blocks_dim(const LatticeVoa& voa, long radius, long level);

/// Product formula for the vacuum module: prod (1 - q^l)^-1 per even creation mode, (1 + q^l) per odd.
QSeries vacuum_generating_function(const AlgebraSpec& alg, int cutoff);

/// sum_l dim V_l q^l for l <= cutoff.
QSeries character(const FockModule& mod, int cutoff);
/// Refined by ghost number: y^g.
QYSeries character_by_ghost(const FockModule& mod, int cutoff);
/// prod_{k>=0} (1 + y q^{1-n+k}) (1 + y^-1 q^{n+k}), expanded independently of any basis.
QYSeries bc_fermion_character(int n, int cutoff);
/// sum_N y^N q^{N(N-1)/2 + N(1-n)} / prod_m (1 - q^m)
QYSeries bc_boson_character(int n, int cutoff);

}  // namespace vlab
