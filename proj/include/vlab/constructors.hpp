#pragma once

#include "vlab/algebra.hpp"
#include "vlab/fock.hpp"
#include "vlab/rational.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace vlab {

using RatGrid = std::vector<std::vector<Rational>>;

/// Finite-dimensional Lie algebra with an invariant symmetric form.
struct LieAlgebraData {
    std::vector<std::string> names;
    /// structure[i][j][k] = f_ij^k in [u_i, u_j] = sum_k f_ij^k u_k
    std::vector<RatGrid> structure;
    RatGrid Q;

    int dimension() const { return static_cast<int>(names.size()); }

    /// nonzero[i][j] = the (k, f_ij^k) with f_ij^k != 0
    std::vector<std::vector<std::vector<std::pair<int, Rational>>>> nonzero_structure() const;

    /// Throws std::invalid_argument naming the first violated identity.
    void validate() const;
    RatGrid killing_form() const;

    /// sl2 in the basis (e, h, f) with Q = q * Killing form.
    static LieAlgebraData sl2(const Rational& q);
    /// Abelian algebra with the given form; generator names a1..ad (or a when d = 1).
    static LieAlgebraData abelian(const RatGrid& Q);
};

/// Generator names of a rank-r Heisenberg algebra.
std::vector<std::string> heisenberg_names(int rank);

/// [a^i_m, a^j_k] = m Q_ij delta_{m+k,0}.
AlgebraSpec heisenberg(int rank, const RatGrid& Q);
/// [u^i_m, u^j_k] = f_ij^l u^l_{m+k} + m Q_ij delta_{m+k,0}.
AlgebraSpec kac_moody(const LieAlgebraData& g);
/// [L_m, L_k] = (m-k) L_{m+k} + (c/12)(m^3 - m) delta_{m+k,0}.
AlgebraSpec virasoro(const Rational& c);
/// Odd b (weight n, ghost -1) and c (weight 1-n, ghost +1), {b_m, c_k} = delta_{m+k,0}.
AlgebraSpec bc_system(int n);

struct DilatonSpec {
    Rational lambda;
    Rational Q{1};
};

/// Rank-one current with [a_m, a_k] = -m Q delta_{m+k,0}; lambda and Q are kept in the
/// metadata for the stress tensor.
AlgebraSpec dilaton(const DilatonSpec& spec);

using LatticeVector = std::vector<long>;

/// Even lattice Z^rank with Gram matrix and a bimultiplicative sign cocycle.
struct LatticeSpec {
    std::vector<std::vector<long>> gram;
    std::vector<std::vector<int>> cocycle;  // eps(e_i, e_j) in {+1, -1}

    int rank() const { return static_cast<int>(gram.size()); }
    /// eps(e_i, e_j) = (-1)^{Q_ij} for i > j, +1 otherwise.
    static LatticeSpec with_default_cocycle(std::vector<std::vector<long>> gram);
    void validate() const;

    long form(const LatticeVector& l, const LatticeVector& m) const;
    int epsilon(const LatticeVector& l, const LatticeVector& m) const;
};

/// Lattice vertex algebra: one Heisenberg Weyl module per lattice vector, with the
/// exponential vertex operators between them.
class LatticeVoa {
public:
    explicit LatticeVoa(LatticeSpec spec);

    const LatticeSpec& spec() const { return spec_; }
    const AlgebraPtr& heisenberg_algebra() const { return heis_; }

    /// a^i_0 acts by (Q lambda)_i; module states are indexed by their Heisenberg level.
    const FockModule& sector(const LatticeVector& lambda) const;
    /// L_0 eigenvalue of the sector's highest-weight vector, Q(lambda, lambda)/2.
    Rational sector_weight(const LatticeVector& lambda) const;
    /// All lattice vectors with every coordinate in [-window, window].
    std::vector<LatticeVector> window(long radius) const;

    /// k-th mode of Gamma_lambda on a state of sector mu; the result lives in sector lambda+mu.
    /// Gamma_lambda(z) = eps(lambda, .) z^{lambda_0} E^-(z) E^+(z) e^lambda,
    /// E^+ = exp(-sum_{n>0} lambda_n z^{-n}/n), E^- = exp(sum_{n>0} lambda_{-n} z^n/n).
    StateVector vertex_operator_mode(const LatticeVector& lambda, long k, const LatticeVector& mu,
                                     const StateVector& v) const;

    /// sum_j (-1)^j binom(N, j) [Gamma_{lambda, m+N-j}, Gamma_{mu, k+j}] v with N = max(0, -Q(lambda, mu)).
    /// Zero for every m, k, v exactly when the two vertex operators are mutually local.
    StateVector locality_defect(const LatticeVector& lambda, long m, const LatticeVector& mu, long k,
                                const LatticeVector& nu, const StateVector& v) const;

    std::string label(const LatticeVector& lambda) const;

private:
    LatticeSpec spec_;
    AlgebraPtr heis_;
    mutable std::mutex mutex_;
    mutable std::map<LatticeVector, std::unique_ptr<FockModule>> sectors_;
};

LatticeVector lattice_add(const LatticeVector& a, const LatticeVector& b);

}  // namespace vlab
