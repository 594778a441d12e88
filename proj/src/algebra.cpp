#include "vlab/algebra.hpp"

#include "vlab/fock.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace vlab {

// ---- polynomials -----------------------------------------------------------

Poly2 Poly2::constant(const Rational& c) { return term(c, 0, 0); }

Poly2 Poly2::term(const Rational& c, int i, int j) {
    Poly2 p;
    if (!c.is_zero()) p.c_[{i, j}] = c;
    return p;
}

Rational Poly2::eval(long m, long k) const {
    Rational acc(0);
    for (const auto& [ij, c] : c_) acc += c * pow(Rational(m), ij.first) * pow(Rational(k), ij.second);
    return acc;
}

Poly2 Poly2::swapped() const {
    Poly2 p;
    for (const auto& [ij, c] : c_) p.c_[{ij.second, ij.first}] = c;
    return p;
}

Poly2 Poly2::scaled(const Rational& s) const {
    Poly2 p;
    if (s.is_zero()) return p;
    for (const auto& [ij, c] : c_) p.c_[ij] = c * s;
    return p;
}

Poly2 operator+(const Poly2& a, const Poly2& b) {
    Poly2 p = a;
    for (const auto& [ij, c] : b.c_) {
        auto [it, ins] = p.c_.try_emplace(ij, c);
        if (!ins) {
            it->second += c;
            if (it->second.is_zero()) p.c_.erase(it);
        }
    }
    return p;
}

Poly1::Poly1(std::vector<Rational> coeffs) : c_(std::move(coeffs)) {}

Rational Poly1::eval(long m) const {
    Rational acc(0);
    Rational x(m), power(1);
    for (const auto& c : c_) {
        acc += c * power;
        power *= x;
    }
    return acc;
}

Poly1 Poly1::reflected() const {
    std::vector<Rational> out = c_;
    for (std::size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
    return Poly1(std::move(out));
}

Poly1 Poly1::scaled(const Rational& s) const {
    std::vector<Rational> out = c_;
    for (auto& c : out) c *= s;
    return Poly1(std::move(out));
}

bool Poly1::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& c) { return c.is_zero(); });
}

// ---- mode combinations -----------------------------------------------------

namespace {
bool mode_key_less(const Mode& a, const Mode& b) { return std::tie(a.gen, a.index) < std::tie(b.gen, b.index); }
}  // namespace

void ModeCombination::add(const Mode& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = std::lower_bound(modes.begin(), modes.end(), m,
                               [](const auto& p, const Mode& x) { return mode_key_less(p.first, x); });
    if (it != modes.end() && it->first == m) {
        it->second += c;
        if (it->second.is_zero()) modes.erase(it);
    } else {
        modes.insert(it, {m, c});
    }
}

ModeCombination ModeCombination::scaled(const Rational& s) const {
    ModeCombination out;
    if (s.is_zero()) return out;
    out.central = central * s;
    for (const auto& [m, c] : modes) out.modes.push_back({m, c * s});
    return out;
}

ModeCombination operator+(const ModeCombination& a, const ModeCombination& b) {
    ModeCombination out = a;
    out.central += b.central;
    for (const auto& [m, c] : b.modes) out.add(m, c);
    return out;
}

bool operator==(const ModeCombination& a, const ModeCombination& b) {
    return a.central == b.central && a.modes == b.modes;
}

std::string mode_name(const Mode& m, const AlgebraSpec& alg) {
    return alg.generator(m.gen).name + "(" + std::to_string(m.index) + ")";
}

std::string ModeCombination::str(const AlgebraSpec& alg) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : modes) {
        os << (first ? "" : " + ") << "(" << c << ")" << mode_name(m, alg);
        first = false;
    }
    if (!central.is_zero() || first) os << (first ? "" : " + ") << "(" << central << ")";
    return os.str();
}

// ---- algebra ---------------------------------------------------------------

AlgebraSpec::AlgebraSpec(std::string label, std::vector<GeneratorSpec> generators, bool super)
    : label_(std::move(label)), gens_(std::move(generators)), super_(super) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        if (gens_[i].name.empty()) throw std::invalid_argument("generator with empty name");
        for (std::size_t j = 0; j < i; ++j)
            if (gens_[i].name == gens_[j].name)
                throw std::invalid_argument("duplicate generator name '" + gens_[i].name + "'");
        if (gens_[i].parity == Parity::Odd && !super_)
            throw std::invalid_argument("odd generator '" + gens_[i].name + "' in a non-super algebra");
    }
}

int AlgebraSpec::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown generator '" + name + "' in algebra " + label_);
}

void AlgebraSpec::set_rule(const std::string& left, const std::string& right, BracketRule rule) {
    set_rule(index_of(left), index_of(right), std::move(rule));
}

void AlgebraSpec::set_rule(int left, int right, BracketRule rule) {
    if (left < 0 || right < 0 || left >= size() || right >= size())
        throw std::invalid_argument("bracket rule references a generator outside the algebra");
    for (const auto& t : rule.terms)
        if (t.target < 0 || t.target >= size())
            throw std::invalid_argument("bracket rule target outside the algebra " + label_);
    // [b_k, a_m] = -(-1)^{|a||b|} [a_m, b_k]
    Rational s = (is_odd(left) && is_odd(right)) ? Rational(1) : Rational(-1);
    BracketRule reversed;
    for (const auto& t : rule.terms) reversed.terms.push_back({t.coefficient.swapped().scaled(s), t.target, t.shift});
    reversed.central = rule.central.reflected().scaled(s);

    rules_[{left, right}] = StoredRule{std::move(rule), true};
    if (left != right) {
        auto it = rules_.find({right, left});
        if (it == rules_.end() || !it->second.explicit_rule) rules_[{right, left}] = StoredRule{std::move(reversed), false};
    }
}

const BracketRule* AlgebraSpec::rule(int left, int right) const {
    auto it = rules_.find({left, right});
    return it == rules_.end() ? nullptr : &it->second.rule;
}

bool AlgebraSpec::rule_is_explicit(int left, int right) const {
    auto it = rules_.find({left, right});
    return it != rules_.end() && it->second.explicit_rule;
}

ModeCombination AlgebraSpec::bracket(int a, long m, int b, long k) const {
    ModeCombination out;
    const BracketRule* r = rule(a, b);
    if (!r) return out;
    for (const auto& t : r->terms) out.add(Mode{t.target, m + k + t.shift}, t.coefficient.eval(m, k));
    if (m + k == 0) out.central = r->central.eval(m);
    return out;
}

bool AlgebraSpec::same_brackets_as(const AlgebraSpec& other) const {
    if (size() != other.size()) return false;
    for (int i = 0; i < size(); ++i) {
        const auto& g = gens_[static_cast<std::size_t>(i)];
        const auto& h = other.gens_[static_cast<std::size_t>(i)];
        if (g.weight != h.weight || g.parity != h.parity || g.ghost != h.ghost) return false;
    }
    // Compare the structure functions on a window wide enough to pin cubic polynomials.
    for (int a = 0; a < size(); ++a)
        for (int b = 0; b < size(); ++b)
            for (long m = -5; m <= 5; ++m)
                for (long k = -5; k <= 5; ++k)
                    if (!(bracket(a, m, b, k) == other.bracket(a, m, b, k))) return false;
    return true;
}

ModeCombination bracket_modes(const std::string& a, long m, const std::string& b, long k, const AlgebraSpec& alg) {
    return alg.bracket(alg.index_of(a), m, alg.index_of(b), k);
}

AlgebraSpec direct_sum(const AlgebraSpec& first, const AlgebraSpec& second, std::string label) {
    std::vector<GeneratorSpec> gens = first.generators();
    gens.insert(gens.end(), second.generators().begin(), second.generators().end());
    AlgebraSpec out(std::move(label), std::move(gens), first.is_super() || second.is_super());
    const int offset = first.size();
    auto copy_rules = [&](const AlgebraSpec& src, int shift) {
        for (int a = 0; a < src.size(); ++a)
            for (int b = 0; b < src.size(); ++b) {
                if (!src.rule_is_explicit(a, b)) continue;
                BracketRule r = *src.rule(a, b);
                for (auto& t : r.terms) t.target += shift;
                out.set_rule(a + shift, b + shift, std::move(r));
            }
    };
    copy_rules(first, 0);
    copy_rules(second, offset);
    out.metadata = first.metadata;
    for (const auto& [k, v] : second.metadata) out.metadata.emplace(k, v);
    return out;
}

// ---- normal ordering -------------------------------------------------------

bool normal_order_less(const Mode& a, const Mode& b, const AlgebraSpec& alg) {
    bool ann_a = a.index > -alg.generator(a.gen).weight;
    bool ann_b = b.index > -alg.generator(b.gen).weight;
    return std::tie(ann_a, a.index, a.gen) < std::tie(ann_b, b.index, b.gen);
}

RewriteResult normal_order_rewrite(const ModeMonomial& mono, const AlgebraSpec& alg) {
    RewriteResult done;
    std::vector<std::pair<ModeWord, Rational>> work{{mono.factors, Rational(mono.sign)}};
    auto accumulate = [](RewriteResult& into, const ModeWord& w, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, ins] = into.try_emplace(w, c);
        if (!ins) {
            it->second += c;
            if (it->second.is_zero()) into.erase(it);
        }
    };
    while (!work.empty()) {
        auto [word, coef] = std::move(work.back());
        work.pop_back();
        std::size_t i = 0;
        for (; i + 1 < word.size(); ++i) {
            const Mode& x = word[i];
            const Mode& y = word[i + 1];
            if (normal_order_less(y, x, alg)) break;
            if (x == y && alg.is_odd(x.gen)) break;
        }
        if (i + 1 >= word.size()) {
            accumulate(done, word, coef);
            continue;
        }
        const Mode x = word[i], y = word[i + 1];
        ModeCombination br = alg.bracket(x.gen, x.index, y.gen, y.index);
        auto replace_pair = [&](const std::vector<Mode>& mid, const Rational& c) {
            if (c.is_zero()) return;
            ModeWord w(word.begin(), word.begin() + static_cast<long>(i));
            w.insert(w.end(), mid.begin(), mid.end());
            w.insert(w.end(), word.begin() + static_cast<long>(i) + 2, word.end());
            work.emplace_back(std::move(w), c);
        };
        if (x == y) {
            // odd square: x x = (1/2){x, x}
            Rational half = Rational(1, 2) * coef;
            for (const auto& [m, c] : br.modes) replace_pair({m}, half * c);
            replace_pair({}, half * br.central);
            continue;
        }
        Rational s = (alg.is_odd(x.gen) && alg.is_odd(y.gen)) ? Rational(-1) : Rational(1);
        replace_pair({y, x}, s * coef);
        for (const auto& [m, c] : br.modes) replace_pair({m}, coef * c);
        replace_pair({}, coef * br.central);
    }
    return done;
}

// ---- axioms ----------------------------------------------------------------

namespace {

ModeCombination bracket_with(const AlgebraSpec& alg, const Mode& x, const ModeCombination& ys) {
    ModeCombination out;
    for (const auto& [y, c] : ys.modes) out = out + alg.bracket(x.gen, x.index, y.gen, y.index).scaled(c);
    return out;
}

ModeCombination bracket_with(const AlgebraSpec& alg, const ModeCombination& xs, const Mode& z) {
    ModeCombination out;
    for (const auto& [x, c] : xs.modes) out = out + alg.bracket(x.gen, x.index, z.gen, z.index).scaled(c);
    return out;
}

Rational parity_sign(const AlgebraSpec& alg, int a, int b) {
    return (alg.is_odd(a) && alg.is_odd(b)) ? Rational(-1) : Rational(1);
}

}  // namespace

AxiomReport check_axioms(const AlgebraSpec& alg, int index_window) {
    if (index_window < 2) throw std::invalid_argument("check_axioms needs index_window >= 2");
    AxiomReport report;
    const int n = alg.size();
    const long w = index_window;

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (long m = -w; m <= w; ++m)
                for (long k = -w; k <= w; ++k) {
                    ModeCombination lhs = alg.bracket(a, m, b, k) + alg.bracket(b, k, a, m).scaled(parity_sign(alg, a, b));
                    if (!lhs.is_zero())
                        report.violations.push_back(
                            {"skew", mode_name({a, m}, alg) + " , " + mode_name({b, k}, alg)});
                }

    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (long m = -w; m <= w; ++m)
                    for (long k = -w; k <= w; ++k)
                        for (long l = -w; l <= w; ++l) {
                            Mode x{a, m}, y{b, k}, z{c, l};
                            ModeCombination lhs = bracket_with(alg, x, alg.bracket(b, k, c, l));
                            ModeCombination rhs = bracket_with(alg, alg.bracket(a, m, b, k), z) +
                                                  bracket_with(alg, y, alg.bracket(a, m, c, l)).scaled(parity_sign(alg, a, b));
                            if (!(lhs == rhs))
                                report.violations.push_back({"jacobi", mode_name(x, alg) + " , " + mode_name(y, alg) +
                                                                           " , " + mode_name(z, alg)});
                        }

    // Representation identity on the vacuum module.
    FockModule vac(std::make_shared<const AlgebraSpec>(alg), ModuleSpec::vacuum(alg));
    auto basis = vac.build_basis(vac.min_level() + 2);
    for (const auto& [level, states] : basis)
        for (const auto& mono : states) {
            StateVector v = StateVector::basis(mono);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (long m = -w; m <= w; ++m)
                        for (long k = -w; k <= w; ++k) {
                            StateVector lhs = vac.apply_mode(a, m, vac.apply_mode(b, k, v)) -
                                              vac.apply_mode(b, k, vac.apply_mode(a, m, v)).scaled(parity_sign(alg, a, b));
                            ModeCombination br = alg.bracket(a, m, b, k);
                            StateVector rhs = v.scaled(br.central);
                            for (const auto& [mode, c] : br.modes) rhs += vac.apply_mode(mode.gen, mode.index, v).scaled(c);
                            if (!(lhs == rhs))
                                report.violations.push_back({"module", mode_name({a, m}, alg) + " , " +
                                                                           mode_name({b, k}, alg) + " on " +
                                                                           vac.state_string(mono)});
                        }
        }
    return report;
}

}  // namespace vlab
