#pragma once

#include "vlab/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vlab {

enum class Parity : std::uint8_t { Even, Odd };

/// A generating field g(z) = sum_m g_m z^{-m-weight}; g_m lowers L_0 by m.
struct GeneratorSpec {
    std::string name;
    int weight = 1;
    Parity parity = Parity::Even;
    int ghost = 0;  // ghost / fermion number carried by every mode
};

/// Polynomial in the two mode indices (m of the left factor, k of the right).
class Poly2 {
public:
    Poly2() = default;
    static Poly2 constant(const Rational& c);
    /// c * m^i * k^j
    static Poly2 term(const Rational& c, int i, int j);

    Rational eval(long m, long k) const;
    Poly2 swapped() const;  // p(k, m)
    Poly2 scaled(const Rational& s) const;
    bool is_zero() const { return c_.empty(); }

    friend Poly2 operator+(const Poly2& a, const Poly2& b);
    friend bool operator==(const Poly2& a, const Poly2& b) { return a.c_ == b.c_; }

private:
    std::map<std::pair<int, int>, Rational> c_;
};

/// Polynomial in one mode index.
class Poly1 {
public:
    Poly1() = default;
    explicit Poly1(std::vector<Rational> coeffs);  // coeffs[i] multiplies m^i
    Rational eval(long m) const;
    Poly1 reflected() const;  // p(-m)
    Poly1 scaled(const Rational& s) const;
    bool is_zero() const;
    const std::vector<Rational>& coefficients() const { return c_; }

private:
    std::vector<Rational> c_;
};

struct BracketTerm {
    Poly2 coefficient;
    int target = 0;  // generator index
    int shift = 0;   // target mode index is m + k + shift
};

/// [left_m, right_k] = sum_t coefficient_t(m,k) target_{m+k+shift} + central(m) delta_{m+k,0}
/// (an anticommutator when both generators are odd).
struct BracketRule {
    std::vector<BracketTerm> terms;
    Poly1 central;
};

struct Mode {
    int gen = 0;
    long index = 0;
    friend bool operator==(const Mode& a, const Mode& b) { return a.gen == b.gen && a.index == b.index; }
    friend bool operator!=(const Mode& a, const Mode& b) { return !(a == b); }
    /// index first, then generator
    friend bool operator<(const Mode& a, const Mode& b) {
        return a.index != b.index ? a.index < b.index : a.gen < b.gen;
    }
};

/// Finite combination of modes plus a central scalar.
struct ModeCombination {
    std::vector<std::pair<Mode, Rational>> modes;  // merged, nonzero, ordered by (gen, index)
    Rational central;

    bool is_zero() const { return modes.empty() && central.is_zero(); }
    void add(const Mode& m, const Rational& c);
    ModeCombination scaled(const Rational& s) const;
    friend ModeCombination operator+(const ModeCombination& a, const ModeCombination& b);
    friend bool operator==(const ModeCombination& a, const ModeCombination& b);
    std::string str(const class AlgebraSpec& alg) const;
};

/// A finitely generated mode (super)algebra with polynomial structure functions.
class AlgebraSpec {
public:
    AlgebraSpec(std::string label, std::vector<GeneratorSpec> generators, bool super);

    /// Registers the rule for (left, right). The opposite order is derived by
    /// super-skew-symmetry unless it is supplied explicitly too.
    void set_rule(const std::string& left, const std::string& right, BracketRule rule);
    void set_rule(int left, int right, BracketRule rule);

    const std::string& label() const { return label_; }
    const std::vector<GeneratorSpec>& generators() const { return gens_; }
    const GeneratorSpec& generator(int i) const { return gens_.at(static_cast<std::size_t>(i)); }
    int size() const { return static_cast<int>(gens_.size()); }
    bool is_super() const { return super_; }
    int index_of(const std::string& name) const;  // throws naming the unknown generator
    bool is_odd(int g) const { return gens_.at(static_cast<std::size_t>(g)).parity == Parity::Odd; }

    /// Explicit rule lookup (after completion); nullptr when the pair commutes.
    const BracketRule* rule(int left, int right) const;
    bool rule_is_explicit(int left, int right) const;

    /// [a_m, b_k], an anticommutator when both are odd.
    ModeCombination bracket(int a, long m, int b, long k) const;

    std::optional<Rational> central_charge;           // Virasoro-type algebras
    std::map<std::string, Rational> metadata;         // e.g. dilaton twist "lambda"

    /// Structural equality of generators and the completed bracket table.
    bool same_brackets_as(const AlgebraSpec& other) const;

private:
    struct StoredRule {
        BracketRule rule;
        bool explicit_rule = false;
    };
    std::string label_;
    std::vector<GeneratorSpec> gens_;
    bool super_;
    std::map<std::pair<int, int>, StoredRule> rules_;
};

using AlgebraPtr = std::shared_ptr<const AlgebraSpec>;

/// [a_m, b_k] by generator name.
ModeCombination bracket_modes(const std::string& a, long m, const std::string& b, long k, const AlgebraSpec& alg);

/// Disjoint union of two algebras; generators of different summands (super)commute.
AlgebraSpec direct_sum(const AlgebraSpec& first, const AlgebraSpec& second, std::string label);

/// Ordered product of modes with a sign, used by the normal-ordering rewriter.
struct ModeMonomial {
    std::vector<Mode> factors;
    int sign = 1;
};

/// Order used by normal forms: creation modes (index <= -weight) first by increasing
/// index then generator order, annihilation modes after them in the same order.
bool normal_order_less(const Mode& a, const Mode& b, const AlgebraSpec& alg);

using ModeWord = std::vector<Mode>;
using RewriteResult = std::map<ModeWord, Rational>;

/// Rewrites a product of modes into normally ordered words (the empty word is the
/// central/identity part). Equal as operators to the input.
RewriteResult normal_order_rewrite(const ModeMonomial& mono, const AlgebraSpec& alg);

struct AxiomViolation {
    std::string kind;     // "skew", "jacobi", "module"
    std::string witness;  // the offending modes
};

struct AxiomReport {
    std::vector<AxiomViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Super-skew-symmetry and super-Jacobi for all mode triples with |index| <= window,
/// plus the representation identity on low-level vacuum-module states (which is where
/// an inconsistent central term shows up when it still happens to be a cocycle).
AxiomReport check_axioms(const AlgebraSpec& alg, int index_window);

std::string mode_name(const Mode& m, const AlgebraSpec& alg);

}  // namespace vlab
