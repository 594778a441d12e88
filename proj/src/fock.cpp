#include "vlab/fock.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace vlab {

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), [](const Mode& x, const Mode& y) {
        return std::tie(x.index, x.gen) < std::tie(y.index, y.gen);
    });
}

long monomial_level(const Monomial& m) {
    long l = 0;
    for (const auto& f : m) l -= f.index;
    return l;
}

// ---- StateVector -----------------------------------------------------------

StateVector StateVector::basis(const Monomial& m, const Rational& c) {
    StateVector v;
    v.add(m, c);
    return v;
}

Rational StateVector::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void StateVector::add(const Monomial& m, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, ins] = terms_.try_emplace(m, c);
    if (!ins) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

StateVector& StateVector::operator+=(const StateVector& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

StateVector& StateVector::operator-=(const StateVector& o) {
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
}

StateVector StateVector::scaled(const Rational& s) const {
    StateVector out;
    if (s.is_zero()) return out;
    out.terms_ = terms_;
    for (auto& [m, c] : out.terms_) c *= s;
    return out;
}

long StateVector::min_level() const {
    long l = 0;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        long x = monomial_level(m);
        if (first || x < l) l = x;
        first = false;
    }
    return l;
}

long StateVector::max_level() const {
    long l = 0;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        long x = monomial_level(m);
        if (first || x > l) l = x;
        first = false;
    }
    return l;
}

// ---- ModuleSpec ------------------------------------------------------------

ModuleSpec ModuleSpec::vacuum(const AlgebraSpec& alg) {
    ModuleSpec s;
    for (const auto& g : alg.generators()) s.annihilation_threshold.push_back(1 - g.weight);
    return s;
}

ModuleSpec module_direct_sum(const ModuleSpec& first, int first_size, const ModuleSpec& second) {
    ModuleSpec out = first;
    out.annihilation_threshold.insert(out.annihilation_threshold.end(), second.annihilation_threshold.begin(),
                                      second.annihilation_threshold.end());
    for (const auto& [g, mu] : second.highest_weight) out.highest_weight[g + first_size] = mu;
    if (second.hw_label != "|0>") out.hw_label = second.hw_label;
    return out;
}

// ---- FockModule ------------------------------------------------------------

FockModule::FockModule(AlgebraPtr alg, ModuleSpec spec) : alg_(std::move(alg)), spec_(std::move(spec)) {
    if (!alg_) throw std::invalid_argument("FockModule without an algebra");
    if (static_cast<int>(spec_.annihilation_threshold.size()) != alg_->size())
        throw std::invalid_argument("module thresholds do not match the generator count of " + alg_->label());
    for (const auto& [g, mu] : spec_.highest_weight) {
        if (g < 0 || g >= alg_->size()) throw std::invalid_argument("highest weight for unknown generator");
        if (spec_.annihilation_threshold[static_cast<std::size_t>(g)] > 0)
            throw std::invalid_argument("zero mode of '" + alg_->generator(g).name +
                                        "' creates, so it cannot carry a highest weight");
    }
    for (int g = 0; g < alg_->size(); ++g) {
        long thr = spec_.annihilation_threshold[static_cast<std::size_t>(g)];
        if (alg_->is_odd(g)) {
            for (long m = 1; m < thr; ++m) min_level_ -= m;
        } else if (thr > 0) {
            throw std::invalid_argument("even generator '" + alg_->generator(g).name +
                                        "' has a creation mode of non-positive level; graded pieces would be infinite");
        }
    }
}

bool FockModule::is_creation(int gen, long index) const {
    return index < spec_.annihilation_threshold.at(static_cast<std::size_t>(gen));
}

int FockModule::ghost_number(const Monomial& m) const {
    int g = 0;
    for (const auto& f : m) g += alg_->generator(f.gen).ghost;
    return g;
}

std::string FockModule::state_string(const Monomial& m) const {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.size();) {
        std::size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        os << alg_->generator(m[i].gen).name << "(" << m[i].index << ")";
        if (j - i > 1) os << "^" << (j - i);
        os << " ";
        i = j;
    }
    os << spec_.hw_label;
    return os.str();
}

Basis FockModule::build_basis(long max_level) const {
    std::lock_guard<std::mutex> lock(basis_mutex_);
    ensure_basis(max_level);
    Basis out;
    for (long l = min_level_; l <= max_level; ++l) out[l] = basis_cache_.at(l);
    return out;
}

void FockModule::ensure_basis(long max_level) const {
    if (max_level > basis_built_to_) {
        // Candidate creation modes, most negative index first.
        std::vector<Mode> cand;
        const long span = max_level - min_level_;
        for (int g = 0; g < alg_->size(); ++g) {
            long thr = spec_.annihilation_threshold[static_cast<std::size_t>(g)];
            for (long m = thr - 1; -m <= span; --m) cand.push_back({g, m});
        }
        std::sort(cand.begin(), cand.end(),
                  [](const Mode& a, const Mode& b) { return std::tie(a.index, a.gen) < std::tie(b.index, b.gen); });
        // neg_tail[i] = most negative level still reachable from candidates i..end
        std::vector<long> neg_tail(cand.size() + 1, 0);
        for (std::size_t i = cand.size(); i-- > 0;) {
            long l = -cand[i].index;
            neg_tail[i] = neg_tail[i + 1] + ((alg_->is_odd(cand[i].gen) && l < 0) ? l : 0);
        }
        std::map<long, std::vector<Monomial>> found;
        Monomial current;
        auto rec = [&](auto&& self, std::size_t i, long level) -> void {
            if (level + neg_tail[i] > max_level) return;
            if (i == cand.size()) {
                found[level].push_back(current);
                return;
            }
            self(self, i + 1, level);
            const Mode x = cand[i];
            const long l = -x.index;
            const std::size_t mark = current.size();
            long lev = level;
            for (int mult = 1;; ++mult) {
                if (alg_->is_odd(x.gen) && mult > 1) break;
                if (l > 0 && lev + l + neg_tail[i + 1] > max_level) break;
                current.push_back(x);
                lev += l;
                self(self, i + 1, lev);
                if (l <= 0) break;  // only odd modes have l <= 0
            }
            current.resize(mark);
        };
        rec(rec, 0, 0);
        for (auto& [lvl, states] : found) std::sort(states.begin(), states.end(), MonomialLess{});
        // existing entries are never replaced, so references handed out by basis_at stay valid
        for (long l = min_level_; l <= max_level; ++l) basis_cache_.try_emplace(l, std::move(found[l]));
        basis_built_to_ = max_level;
    }
}

const std::vector<Monomial>& FockModule::basis_at(long level) const {
    if (level < min_level_) {
        static const std::vector<Monomial> empty;
        return empty;
    }
    std::lock_guard<std::mutex> lock(basis_mutex_);
    ensure_basis(level);
    return basis_cache_.at(level);
}

StateVector FockModule::apply_mode(int gen, long index, const StateVector& v) const {
    if (gen < 0 || gen >= alg_->size()) throw std::invalid_argument("unknown generator index in apply_mode");
    StateVector out;
    const Mode x{gen, index};
    for (const auto& [m, c] : v.terms()) out += act(x, m, 0).scaled(c);
    return out;
}

StateVector FockModule::apply_mode(const std::string& gen, long index, const StateVector& v) const {
    return apply_mode(alg_->index_of(gen), index, v);
}

StateVector FockModule::left_multiply(const Mode& y, const StateVector& v) const {
    StateVector out;
    for (const auto& [m, c] : v.terms()) out += act(y, m, 0).scaled(c);
    return out;
}

// x . (m[start] m[start+1] ... |hw>); the prefix m[0..start) is not part of the state.
StateVector FockModule::act(const Mode& x, const Monomial& m, std::size_t start) const {
    const bool creates = is_creation(x.gen, x.index);
    if (start == m.size()) {
        if (creates) return StateVector::basis({x});
        if (x.index == 0) {
            auto it = spec_.highest_weight.find(x.gen);
            if (it != spec_.highest_weight.end()) return StateVector::basis({}, it->second);
        }
        return {};
    }
    const Mode y = m[start];
    const bool x_first = std::tie(x.index, x.gen) < std::tie(y.index, y.gen);
    if (creates && (x_first || x == y)) {
        if (!(x == y && alg_->is_odd(x.gen))) {
            Monomial out{x};
            out.insert(out.end(), m.begin() + static_cast<long>(start), m.end());
            return StateVector::basis(out);
        }
    }
    Monomial rest(m.begin() + static_cast<long>(start) + 1, m.end());
    StateVector result;
    ModeCombination br = alg_->bracket(x.gen, x.index, y.gen, y.index);
    if (x == y) {
        // odd square: x x = (1/2){x, x}
        for (const auto& [w, c] : br.modes) result += act(w, rest, 0).scaled(c * Rational(1, 2));
        if (!br.central.is_zero()) result.add(rest, br.central * Rational(1, 2));
        return result;
    }
    for (const auto& [w, c] : br.modes) result += act(w, rest, 0).scaled(c);
    if (!br.central.is_zero()) result.add(rest, br.central);
    const bool both_odd = alg_->is_odd(x.gen) && alg_->is_odd(y.gen);
    StateVector inner = act(x, rest, 0);
    result += left_multiply(y, inner).scaled(both_odd ? Rational(-1) : Rational(1));
    return result;
}

}  // namespace vlab
