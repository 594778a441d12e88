#pragma once

#include "vlab/algebra.hpp"
#include "vlab/fock.hpp"
#include "vlab/linalg.hpp"
#include "vlab/rational.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vlab {

class FieldExpr;

/// One summand's operator content: the unit, a generator, or a normally ordered
/// product :left right:, each carrying a derivative order.
struct FieldAtom {
    enum class Kind { Unit, Gen, Product };
    Kind kind = Kind::Unit;
    int gen = -1;
    std::shared_ptr<const FieldExpr> left, right;
    int derivatives = 0;
};

/// Rational combination of atoms, homogeneous in conformal weight.
class FieldExpr {
public:
    FieldExpr() = default;  // the zero field

    static FieldExpr unit();
    static FieldExpr generator(const AlgebraSpec& alg, int gen);
    static FieldExpr generator(const AlgebraSpec& alg, const std::string& name);

    bool is_zero() const { return terms_.empty(); }
    const std::vector<std::pair<Rational, FieldAtom>>& terms() const { return terms_; }
    int weight() const;  // 0 for the zero field
    bool is_odd() const;

    FieldExpr derivative(int order = 1) const;
    FieldExpr scaled(const Rational& s) const;
    friend FieldExpr operator+(const FieldExpr& a, const FieldExpr& b);
    friend FieldExpr operator-(const FieldExpr& a, const FieldExpr& b);

    /// Replaces every occurrence of generator `gen` by `replacement` (derivatives carried over).
    FieldExpr substitute(int gen, const FieldExpr& replacement) const;

    /// e.g. "(1/2):a a: - (3/2)d1 a"
    std::string str(const AlgebraSpec& alg) const;

private:
    friend FieldExpr nop(const FieldExpr& a, const FieldExpr& b);
    void push(const Rational& c, FieldAtom atom);

    std::vector<std::pair<Rational, FieldAtom>> terms_;
    int weight_ = 0;
    bool odd_ = false;
};

/// Re-indexes a field's generators g -> g + offset (used when embedding into a direct sum).
FieldExpr shift_generators(const FieldExpr& f, const AlgebraSpec& source, const AlgebraSpec& target, int offset);

/// Normally ordered product :a b:.
FieldExpr nop(const FieldExpr& a, const FieldExpr& b);

/// Thrown when a truncated mode sum is not stable under extension.
struct TruncationError : std::logic_error {
    using std::logic_error::logic_error;
};

/// k-th mode of f on v. Products use
///   (:AB:)_k = sum_{n <= -h_A} A_n B_{k-n} + (-1)^{|A||B|} sum_{n > -h_A} B_{k-n} A_n,
/// truncated to the terms that can be nonzero on states of the module. With slack > 0 the
/// sums are extended by that many terms at each end, which must all vanish.
StateVector apply_field_mode(const FieldExpr& f, long k, const FockModule& mod, const StateVector& v,
                             int slack = 0);

/// k-th mode of :ab: applied to v.
StateVector nop_mode(const FieldExpr& a, const FieldExpr& b, long k, const FockModule& mod, const StateVector& v,
                     int slack = 0);

/// Matrix of f_k from the from_level piece to the to_level piece (columns follow the
/// from-basis order). Throws std::invalid_argument unless to_level = from_level - k.
RatMatrix operator_matrix(const FieldExpr& f, long k, const FockModule& mod, long from_level, long to_level);

/// Matrix of the single mode g_k, same conventions.
RatMatrix mode_matrix(int gen, long k, const FockModule& mod, long from_level);

/// Memoizes f_k on basis monomials; one instance per (field, module) evaluation context.
class FieldModeCache {
public:
    FieldModeCache(FieldExpr f, const FockModule& mod) : f_(std::move(f)), mod_(mod) {}

    const FieldExpr& field() const { return f_; }
    StateVector apply(long k, const StateVector& v);
    /// Matrix from from_level to from_level - k.
    RatMatrix matrix(long k, long from_level);

private:
    FieldExpr f_;
    const FockModule& mod_;
    std::map<std::pair<long, Monomial>, StateVector> memo_;
};

/// Coordinates of v in the basis of one level (throws if v has components elsewhere).
RatVector coordinates(const StateVector& v, const FockModule& mod, long level);

}  // namespace vlab
