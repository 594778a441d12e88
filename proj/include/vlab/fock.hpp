#pragma once

#include "vlab/algebra.hpp"
#include "vlab/rational.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace vlab {

/// Normally ordered product of creation modes acting on the highest-weight vector.
/// Factors are sorted by (index, generator).
using Monomial = std::vector<Mode>;

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

/// L_0 eigenvalue relative to the highest-weight vector.
long monomial_level(const Monomial& m);

/// Finite rational combination of basis monomials; zero coefficients are never stored.
class StateVector {
public:
    using Terms = std::map<Monomial, Rational, MonomialLess>;

    StateVector() = default;
    static StateVector basis(const Monomial& m, const Rational& c = Rational(1));

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }
    Rational coefficient(const Monomial& m) const;

    void add(const Monomial& m, const Rational& c);
    StateVector& operator+=(const StateVector& o);
    StateVector& operator-=(const StateVector& o);
    StateVector scaled(const Rational& s) const;
    friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
    friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
    friend bool operator==(const StateVector& a, const StateVector& b) { return a.terms_ == b.terms_; }

    long min_level() const;
    long max_level() const;

private:
    Terms terms_;
};

/// Highest-weight data of an induced module.
///   g_m |hw> = 0            for m >= threshold[g], except
///   g_0 |hw> = mu_g |hw>    when highest_weight has an entry for g;
/// modes below the threshold create.
struct ModuleSpec {
    std::vector<long> annihilation_threshold;      // per generator
    std::map<int, Rational> highest_weight;        // zero-mode eigenvalues
    std::string hw_label = "|0>";

    /// VOA vacuum: g_m|0> = 0 exactly when m >= 1 - weight(g).
    static ModuleSpec vacuum(const AlgebraSpec& alg);
};

/// Concatenates module data for a direct-sum algebra (second's generators follow first's).
ModuleSpec module_direct_sum(const ModuleSpec& first, int first_size, const ModuleSpec& second);

using Basis = std::map<long, std::vector<Monomial>>;  // level -> ordered states

class FockModule {
public:
    FockModule(AlgebraPtr alg, ModuleSpec spec);

    const AlgebraSpec& algebra() const { return *alg_; }
    const AlgebraPtr& algebra_ptr() const { return alg_; }
    const ModuleSpec& spec() const { return spec_; }

    /// Lowest level carrying states (negative when odd creation modes raise L_0 eigenvalue downward).
    long min_level() const { return min_level_; }
    bool is_creation(int gen, long index) const;

    /// Graded basis for every level in [min_level, max_level].
    Basis build_basis(long max_level) const;
    const std::vector<Monomial>& basis_at(long level) const;

    StateVector apply_mode(int gen, long index, const StateVector& v) const;
    StateVector apply_mode(const std::string& gen, long index, const StateVector& v) const;

    StateVector vacuum() const { return StateVector::basis({}); }
    int ghost_number(const Monomial& m) const;
    std::string state_string(const Monomial& m) const;

private:
    StateVector act(const Mode& x, const Monomial& m, std::size_t start) const;
    StateVector left_multiply(const Mode& y, const StateVector& v) const;
    void ensure_basis(long max_level) const;  // caller holds basis_mutex_

    AlgebraPtr alg_;
    ModuleSpec spec_;
    long min_level_ = 0;

    mutable std::mutex basis_mutex_;
    mutable std::map<long, std::vector<Monomial>> basis_cache_;
    mutable long basis_built_to_ = -1000000;
};

}  // namespace vlab
