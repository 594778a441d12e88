#include "vlab/field.hpp"

#include <sstream>
#include <stdexcept>

namespace vlab {

namespace {

std::string atom_str(const FieldAtom& a, const AlgebraSpec& alg) {
    std::string body;
    switch (a.kind) {
        case FieldAtom::Kind::Unit: body = "1"; break;
        case FieldAtom::Kind::Gen: body = alg.generator(a.gen).name; break;
        case FieldAtom::Kind::Product: {
            auto side = [&](const FieldExpr& f) {
                if (f.terms().size() == 1 && f.terms()[0].first == Rational(1)) return atom_str(f.terms()[0].second, alg);
                return "[" + f.str(alg) + "]";
            };
            body = ":" + side(*a.left) + " " + side(*a.right) + ":";
            break;
        }
    }
    if (a.derivatives == 0) return body;
    return "d" + std::to_string(a.derivatives) + " " + body;
}

// (d^j X)_n = (-1)^j (n+h)(n+h+1)...(n+h+j-1) X_n for X of weight h
Rational derivative_factor(int order, long n, int h) {
    Rational f(order % 2 == 0 ? 1 : -1);
    for (int j = 0; j < order; ++j) f *= Rational(n + h + j);
    return f;
}

StateVector apply_product(const FieldExpr& A, const FieldExpr& B, long k, const FockModule& mod, const StateVector& v,
                          int slack) {
    StateVector out;
    if (v.is_zero() || A.is_zero() || B.is_zero()) return out;
    const long M = mod.min_level();
    const long top = v.max_level();
    const long hA = A.weight();
    const bool swap_sign = A.is_odd() && B.is_odd();

    // A_n B_{k-n} v, n <= -hA; B_{k-n} v vanishes below level M.
    const long lo = M + k - top;
    for (long n = lo - slack; n <= -hA; ++n) {
        StateVector w = apply_field_mode(B, k - n, mod, v, slack);
        if (w.is_zero()) continue;
        StateVector term = apply_field_mode(A, n, mod, w, slack);
        if (n < lo && !term.is_zero())
            throw TruncationError("normal-ordered sum not exhausted below n = " + std::to_string(lo));
        out += term;
    }
    // B_{k-n} A_n v, n > -hA; A_n v vanishes for n > top - M.
    const long hi = top - M;
    for (long n = -hA + 1; n <= hi + slack; ++n) {
        StateVector w = apply_field_mode(A, n, mod, v, slack);
        if (w.is_zero()) continue;
        StateVector term = apply_field_mode(B, k - n, mod, w, slack);
        if (n > hi && !term.is_zero())
            throw TruncationError("normal-ordered sum not exhausted above n = " + std::to_string(hi));
        out += swap_sign ? term.scaled(Rational(-1)) : term;
    }
    return out;
}

StateVector apply_atom(const FieldAtom& atom, int base_weight, long k, const FockModule& mod, const StateVector& v,
                       int slack) {
    Rational f = derivative_factor(atom.derivatives, k, base_weight);
    if (f.is_zero()) return {};
    StateVector r;
    switch (atom.kind) {
        case FieldAtom::Kind::Unit:
            if (k != 0) return {};
            r = v;
            break;
        case FieldAtom::Kind::Gen: r = mod.apply_mode(atom.gen, k, v); break;
        case FieldAtom::Kind::Product: r = apply_product(*atom.left, *atom.right, k, mod, v, slack); break;
    }
    return f == Rational(1) ? r : r.scaled(f);
}

int base_weight_of(const FieldAtom& a, int term_weight) { return term_weight - a.derivatives; }

}  // namespace

// ---- FieldExpr --------------------------------------------------------------

void FieldExpr::push(const Rational& c, FieldAtom atom) {
    if (c.is_zero()) return;
    terms_.emplace_back(c, std::move(atom));
}

FieldExpr FieldExpr::unit() {
    FieldExpr f;
    f.push(Rational(1), FieldAtom{});
    return f;
}

FieldExpr FieldExpr::generator(const AlgebraSpec& alg, int gen) {
    FieldExpr f;
    FieldAtom a;
    a.kind = FieldAtom::Kind::Gen;
    a.gen = gen;
    f.push(Rational(1), a);
    f.weight_ = alg.generator(gen).weight;
    f.odd_ = alg.is_odd(gen);
    return f;
}

FieldExpr FieldExpr::generator(const AlgebraSpec& alg, const std::string& name) {
    return generator(alg, alg.index_of(name));
}

int FieldExpr::weight() const { return weight_; }
bool FieldExpr::is_odd() const { return odd_; }

FieldExpr FieldExpr::derivative(int order) const {
    if (order < 0) throw std::invalid_argument("negative derivative order");
    FieldExpr f = *this;
    for (auto& [c, a] : f.terms_) a.derivatives += order;
    if (!f.is_zero()) f.weight_ += order;
    return f;
}

FieldExpr FieldExpr::scaled(const Rational& s) const {
    if (s.is_zero()) return {};
    FieldExpr f = *this;
    for (auto& [c, a] : f.terms_) c *= s;
    return f;
}

FieldExpr operator+(const FieldExpr& a, const FieldExpr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.weight_ != b.weight_ || a.odd_ != b.odd_)
        throw std::invalid_argument("sum of fields with different weight or parity");
    FieldExpr f = a;
    for (const auto& [c, at] : b.terms_) f.push(c, at);
    return f;
}

FieldExpr operator-(const FieldExpr& a, const FieldExpr& b) { return a + b.scaled(Rational(-1)); }

FieldExpr nop(const FieldExpr& a, const FieldExpr& b) {
    FieldExpr f;
    if (a.is_zero() || b.is_zero()) return f;
    FieldAtom at;
    at.kind = FieldAtom::Kind::Product;
    at.left = std::make_shared<const FieldExpr>(a);
    at.right = std::make_shared<const FieldExpr>(b);
    f.push(Rational(1), at);
    f.weight_ = a.weight_ + b.weight_;
    f.odd_ = a.odd_ != b.odd_;
    return f;
}

FieldExpr FieldExpr::substitute(int gen, const FieldExpr& replacement) const {
    FieldExpr out;
    for (const auto& [c, a] : terms_) {
        FieldExpr piece;
        switch (a.kind) {
            case FieldAtom::Kind::Unit: {
                piece = unit();
                piece = piece.derivative(a.derivatives);
                break;
            }
            case FieldAtom::Kind::Gen: {
                if (a.gen == gen) {
                    piece = replacement.derivative(a.derivatives);
                } else {
                    piece.push(Rational(1), a);
                    piece.weight_ = weight_;
                    piece.odd_ = odd_;
                }
                break;
            }
            case FieldAtom::Kind::Product: {
                piece = nop(a.left->substitute(gen, replacement), a.right->substitute(gen, replacement))
                            .derivative(a.derivatives);
                break;
            }
        }
        out = out + piece.scaled(c);
    }
    return out;
}

std::string FieldExpr::str(const AlgebraSpec& alg) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [c, a] : terms_) {
        Rational mag = c.sign() < 0 ? -c : c;
        if (first) {
            if (c.sign() < 0) os << "-";
        } else {
            os << (c.sign() < 0 ? " - " : " + ");
        }
        if (mag != Rational(1)) os << "(" << mag.str() << ")";
        os << atom_str(a, alg);
        first = false;
    }
    return os.str();
}

// ---- modes -----------------------------------------------------------------

StateVector apply_field_mode(const FieldExpr& f, long k, const FockModule& mod, const StateVector& v, int slack) {
    StateVector out;
    if (v.is_zero()) return out;
    for (const auto& [c, a] : f.terms()) {
        out += apply_atom(a, base_weight_of(a, f.weight()), k, mod, v, slack).scaled(c);
    }
    return out;
}

StateVector nop_mode(const FieldExpr& a, const FieldExpr& b, long k, const FockModule& mod, const StateVector& v,
                     int slack) {
    return apply_product(a, b, k, mod, v, slack);
}

RatVector coordinates(const StateVector& v, const FockModule& mod, long level) {
    const auto& basis = mod.basis_at(level);
    RatVector out(basis.size());
    std::map<Monomial, std::size_t, MonomialLess> index;
    for (std::size_t i = 0; i < basis.size(); ++i) index.emplace(basis[i], i);
    for (const auto& [m, c] : v.terms()) {
        auto it = index.find(m);
        if (it == index.end()) throw std::invalid_argument("state has a component outside level " + std::to_string(level));
        out[it->second] = c;
    }
    return out;
}

namespace {

template <typename Op>
RatMatrix build_matrix(const FockModule& mod, long from_level, long to_level, Op op) {
    const auto& from = mod.basis_at(from_level);
    const auto& to = mod.basis_at(to_level);
    std::map<Monomial, std::size_t, MonomialLess> row;
    for (std::size_t i = 0; i < to.size(); ++i) row.emplace(to[i], i);
    RatMatrix m(to.size(), from.size());
    for (std::size_t j = 0; j < from.size(); ++j) {
        StateVector image = op(StateVector::basis(from[j]));
        for (const auto& [mono, c] : image.terms()) {
            auto it = row.find(mono);
            if (it == row.end()) throw std::logic_error("mode image leaves the target level");
            m.set(it->second, j, c);
        }
    }
    return m;
}

}  // namespace

RatMatrix operator_matrix(const FieldExpr& f, long k, const FockModule& mod, long from_level, long to_level) {
    if (to_level != from_level - k)
        throw std::invalid_argument("dimension mismatch: mode " + std::to_string(k) + " maps level " +
                                    std::to_string(from_level) + " to level " + std::to_string(from_level - k) +
                                    ", not " + std::to_string(to_level));
    return build_matrix(mod, from_level, to_level,
                        [&](const StateVector& v) { return apply_field_mode(f, k, mod, v); });
}

RatMatrix mode_matrix(int gen, long k, const FockModule& mod, long from_level) {
    return build_matrix(mod, from_level, from_level - k, [&](const StateVector& v) { return mod.apply_mode(gen, k, v); });
}

StateVector FieldModeCache::apply(long k, const StateVector& v) {
    StateVector out;
    for (const auto& [m, c] : v.terms()) {
        auto key = std::make_pair(k, m);
        auto it = memo_.find(key);
        if (it == memo_.end()) it = memo_.emplace(key, apply_field_mode(f_, k, mod_, StateVector::basis(m))).first;
        out += it->second.scaled(c);
    }
    return out;
}

RatMatrix FieldModeCache::matrix(long k, long from_level) {
    return build_matrix(mod_, from_level, from_level - k, [&](const StateVector& v) { return apply(k, v); });
}

FieldExpr shift_generators(const FieldExpr& f, const AlgebraSpec& source, const AlgebraSpec& target, int offset) {
    if (offset == 0) return f;
    FieldExpr out = f;
    // highest index first so that freshly inserted indices are never rewritten again
    if (offset > 0) {
        for (int g = source.size() - 1; g >= 0; --g) out = out.substitute(g, FieldExpr::generator(target, g + offset));
    } else {
        for (int g = 0; g < source.size(); ++g) out = out.substitute(g, FieldExpr::generator(target, g + offset));
    }
    return out;
}

}  // namespace vlab
