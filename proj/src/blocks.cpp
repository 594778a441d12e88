#include "vlab/blocks.hpp"

#include "vlab/linalg.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace vlab {

void RationalFunction::add_term(FactoredTerm t) {
    for (auto it = t.exponents.begin(); it != t.exponents.end();) {
        const auto [i, j] = it->first;
        if (i < 1 || j > points_ || i >= j) throw std::invalid_argument("factor (z_i - z_j) needs 1 <= i < j <= points");
        it = it->second == 0 ? t.exponents.erase(it) : std::next(it);
    }
    if (t.scalar.is_zero()) return;
    for (auto it = terms_.begin(); it != terms_.end(); ++it) {
        if (it->exponents != t.exponents) continue;
        it->scalar += t.scalar;
        if (it->scalar.is_zero()) terms_.erase(it);
        return;
    }
    terms_.push_back(std::move(t));
}

Rational RationalFunction::evaluate(const std::vector<Rational>& z) const {
    if (static_cast<int>(z.size()) != points_) throw std::invalid_argument("evaluate: wrong number of points");
    Rational total;
    for (const auto& t : terms_) {
        Rational v = t.scalar;
        for (const auto& [ij, e] : t.exponents) {
            Rational d = z[static_cast<std::size_t>(ij.first - 1)] - z[static_cast<std::size_t>(ij.second - 1)];
            if (d.is_zero()) throw std::domain_error("evaluate: coincident points");
            v *= pow(d, e);
        }
        total += v;
    }
    return total;
}

std::map<std::vector<long>, Rational> RationalFunction::expand(long max_weight) const {
    std::map<std::vector<long>, Rational> out;
    const auto n = static_cast<std::size_t>(points_);
    for (const auto& t : terms_) {
        std::vector<std::pair<std::pair<int, int>, long>> pairs(t.exponents.begin(), t.exponents.end());
        std::vector<long> alpha(n, 0);
        long w0 = 0;
        for (const auto& [ij, e] : pairs) w0 += e * (ij.first - 1);
        // (z_i - z_j)^e = sum_k binom(e, k) (-1)^k z_i^{e-k} z_j^k; each k costs k (j - i) in weight
        auto rec = [&](auto&& self, std::size_t p, long budget, const Rational& coeff) -> void {
            if (p == pairs.size()) {
                auto& slot = out[alpha];
                slot += coeff;
                return;
            }
            const auto [i, j] = pairs[p].first;
            const long e = pairs[p].second;
            const long step = j - i;
            for (long k = 0; k * step <= budget; ++k) {
                if (e >= 0 && k > e) break;
                Rational c = binomial(e, k);
                if (k % 2) c = -c;
                alpha[static_cast<std::size_t>(i - 1)] += e - k;
                alpha[static_cast<std::size_t>(j - 1)] += k;
                self(self, p + 1, budget - k * step, coeff * c);
                alpha[static_cast<std::size_t>(i - 1)] -= e - k;
                alpha[static_cast<std::size_t>(j - 1)] -= k;
            }
        };
        if (w0 <= max_weight) rec(rec, 0, max_weight - w0, t.scalar);
    }
    for (auto it = out.begin(); it != out.end();) it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

namespace {

std::vector<long> leading_alpha(const FactoredTerm& t, int points) {
    std::vector<long> alpha(static_cast<std::size_t>(points), 0);
    for (const auto& [ij, e] : t.exponents) alpha[static_cast<std::size_t>(ij.first - 1)] += e;
    return alpha;
}

}  // namespace

long RationalFunction::leading_weight() const {
    if (terms_.empty()) return 0;
    long best = 0;
    bool first = true;
    for (const auto& t : terms_) {
        const auto alpha = leading_alpha(t, points_);
        long w = 0;
        for (std::size_t j = 0; j < alpha.size(); ++j) w += static_cast<long>(j) * alpha[j];
        best = first ? w : std::min(best, w);
        first = false;
    }
    return best;
}

long RationalFunction::leading_spread() const {
    long spread = 0;
    for (const auto& t : terms_)
        for (long a : leading_alpha(t, points_)) spread = std::max(spread, std::abs(a));
    return spread;
}

std::string RationalFunction::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first_term = true;
    for (const auto& t : terms_) {
        if (!first_term) os << " + ";
        first_term = false;
        for (const auto& [ij, e] : t.exponents) os << "(z" << ij.first << "-z" << ij.second << ")^" << e << " * ";
        const auto& q = t.scalar.raw();
        os << "(" << q.get_num().get_str() << "/" << q.get_den().get_str() << ")";
    }
    return os.str();
}

Rational residue_sum(const RationalFunction& f, int point, const std::vector<Rational>& z) {
    if (point < 1 || point > f.points() || static_cast<int>(z.size()) != f.points())
        throw std::invalid_argument("residue_sum: bad point or configuration");
    Rational total;
    for (const auto& t : f.terms()) {
        // collect (z_point - z_j)^e for each j and the constant remaining factors
        std::map<int, long> local;
        Rational constant = t.scalar;
        for (const auto& [ij, e] : t.exponents) {
            const auto [i, j] = ij;
            if (i == point) {
                local[j] += e;
            } else if (j == point) {
                local[i] += e;
                if (e % 2) constant = -constant;
            } else {
                constant *= pow(z[static_cast<std::size_t>(i - 1)] - z[static_cast<std::size_t>(j - 1)], e);
            }
        }
        for (const auto& [j, ej] : local) {
            if (ej >= 0) continue;
            const long order = -1 - ej;  // coefficient of t^order in prod_{l != j} (t + z_j - z_l)^{e_l}
            std::vector<Rational> series(static_cast<std::size_t>(order + 1), Rational(0));
            series[0] = Rational(1);
            for (const auto& [l, el] : local) {
                if (l == j) continue;
                const Rational d = z[static_cast<std::size_t>(j - 1)] - z[static_cast<std::size_t>(l - 1)];
                if (d.is_zero()) throw std::domain_error("residue_sum: coincident points");
                std::vector<Rational> factor(series.size(), Rational(0));
                for (long k = 0; k <= order; ++k) factor[static_cast<std::size_t>(k)] = binomial(el, k) * pow(d, el - k);
                std::vector<Rational> next(series.size(), Rational(0));
                for (std::size_t a = 0; a < series.size(); ++a)
                    for (std::size_t b = 0; a + b < series.size(); ++b) next[a + b] += series[a] * factor[b];
                series = std::move(next);
            }
            total += constant * series[static_cast<std::size_t>(order)];
        }
    }
    return total;
}

RationalFunction heisenberg_correlator(const RatGrid& Q, const std::vector<int>& gens) {
    const int n = static_cast<int>(gens.size());
    RationalFunction f(n);
    for (int g : gens)
        if (g < 0 || static_cast<std::size_t>(g) >= Q.size()) throw std::invalid_argument("heisenberg_correlator: generator out of range");
    if (n % 2) return f;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    FactoredTerm cur{Rational(1), {}};
    auto rec = [&](auto&& self) -> void {
        int i = 0;
        while (i < n && used[static_cast<std::size_t>(i)]) ++i;
        if (i == n) {
            f.add_term(cur);
            return;
        }
        used[static_cast<std::size_t>(i)] = true;
        for (int j = i + 1; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            const Rational& q = Q[static_cast<std::size_t>(gens[static_cast<std::size_t>(i)])]
                                 [static_cast<std::size_t>(gens[static_cast<std::size_t>(j)])];
            if (q.is_zero()) continue;
            used[static_cast<std::size_t>(j)] = true;
            const Rational saved = cur.scalar;
            cur.scalar *= q;
            cur.exponents[{i + 1, j + 1}] = -2;
            self(self);
            cur.exponents.erase({i + 1, j + 1});
            cur.scalar = saved;
            used[static_cast<std::size_t>(j)] = false;
        }
        used[static_cast<std::size_t>(i)] = false;
    };
    rec(rec);
    return f;
}

RationalFunction lattice_correlator(const LatticeSpec& spec, const std::vector<LatticeVector>& charges) {
    const int n = static_cast<int>(charges.size());
    RationalFunction f(n);
    LatticeVector total(static_cast<std::size_t>(spec.rank()), 0);
    for (const auto& l : charges) {
        if (static_cast<int>(l.size()) != spec.rank()) throw std::invalid_argument("lattice_correlator: charge of wrong rank");
        total = lattice_add(total, l);
    }
    if (std::any_of(total.begin(), total.end(), [](long x) { return x != 0; })) return f;
    FactoredTerm t{Rational(1), {}};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const auto& a = charges[static_cast<std::size_t>(i)];
            const auto& b = charges[static_cast<std::size_t>(j)];
            t.scalar *= Rational(spec.epsilon(a, b));
            t.exponents[{i + 1, j + 1}] = spec.form(a, b);
        }
    f.add_term(t);
    return f;
}

Monomial bc_top_state(int n) {
    Monomial m;
    if (n >= 1)
        for (long k = -(n - 1); k <= n - 1; ++k) m.push_back({1, k});
    else
        for (long k = n; k <= -n; ++k) m.push_back({0, k});
    return m;
}

RationalFunction bc_correlator(int n, int b_count, int c_count) {
    if (b_count < 0 || c_count < 0) throw std::invalid_argument("bc_correlator: negative insertion count");
    RationalFunction f(b_count + c_count);
    if (c_count - b_count != 2 * n - 1) return f;
    FactoredTerm t{Rational(1), {}};
    const int total = b_count + c_count;
    for (int i = 1; i <= total; ++i)
        for (int j = i + 1; j <= total; ++j) t.exponents[{i, j}] = (i <= b_count && j > b_count) ? -1 : 1;
    // overall sign is +1 against the zero modes taken in increasing index order
    f.add_term(t);
    return f;
}

namespace {

struct Insertion {
    long weight;
    std::function<StateVector(long, const StateVector&)> apply;
};

// <top| X1_{k1} ... Xn_{kn} |start> for every alpha_2..alpha_n in [-box, box] with
// sum_j (j-1) alpha_j <= max_weight; alpha_1 is fixed by L_0 balance.
SeriesCoefficients mode_series(const std::vector<Insertion>& ins, const StateVector& start,
                               const std::function<Rational(const StateVector&)>& top, long top_L0,
                               long max_weight, long box) {
    SeriesCoefficients out;
    const std::size_t n = ins.size();
    if (n == 0) return out;
    long degree = top_L0;
    for (const auto& x : ins) degree -= x.weight;
    std::vector<long> alpha(n, 0);
    // the most negative weight the still-unchosen alpha_2..alpha_j can add
    std::vector<long> floor_below(n, 0);
    for (std::size_t j = 1; j < n; ++j) floor_below[j] = floor_below[j - 1] - static_cast<long>(j) * box;

    auto rec = [&](auto&& self, std::size_t j, const StateVector& v, long weight, long alpha_sum) -> void {
        if (j == 0) {
            alpha[0] = degree - alpha_sum;
            const Rational r = top(ins[0].apply(-alpha[0] - ins[0].weight, v));
            if (!r.is_zero() && weight <= max_weight) out[alpha] = r;
            return;
        }
        for (long a = -box; a <= box; ++a) {
            const long w = weight + static_cast<long>(j) * a;
            if (w + floor_below[j - 1] > max_weight) break;
            StateVector u = ins[j].apply(-a - ins[j].weight, v);
            if (u.is_zero()) continue;
            alpha[j] = a;
            self(self, j - 1, u, w, alpha_sum + a);
        }
    };
    rec(rec, n - 1, start, 0, 0);
    return out;
}

}  // namespace

SeriesCoefficients heisenberg_mode_series(const RatGrid& Q, const std::vector<int>& gens, long max_weight, long box) {
    auto alg = std::make_shared<const AlgebraSpec>(heisenberg(static_cast<int>(Q.size()), Q));
    FockModule mod(alg, ModuleSpec::vacuum(*alg));
    std::vector<Insertion> ins;
    for (int g : gens) ins.push_back({1, [&mod, g](long k, const StateVector& v) { return mod.apply_mode(g, k, v); }});
    auto top = [](const StateVector& v) { return v.coefficient({}); };
    return mode_series(ins, mod.vacuum(), top, 0, max_weight, box);
}

SeriesCoefficients lattice_mode_series(const LatticeVoa& voa, const std::vector<LatticeVector>& charges,
                                       long max_weight, long box) {
    const auto& spec = voa.spec();
    LatticeVector sector(static_cast<std::size_t>(spec.rank()), 0);
    std::vector<Insertion> ins(charges.size());
    for (std::size_t j = charges.size(); j-- > 0;) {
        const LatticeVector lambda = charges[j];
        const LatticeVector mu = sector;
        ins[j] = {spec.form(lambda, lambda) / 2,
                  [&voa, lambda, mu](long k, const StateVector& v) { return voa.vertex_operator_mode(lambda, k, mu, v); }};
        sector = lattice_add(sector, lambda);
    }
    if (std::any_of(sector.begin(), sector.end(), [](long x) { return x != 0; })) return {};
    auto top = [](const StateVector& v) { return v.coefficient({}); };
    return mode_series(ins, StateVector::basis({}), top, 0, max_weight, box);
}

SeriesCoefficients bc_mode_series(int n, int b_count, int c_count, long max_weight, long box) {
    auto alg = std::make_shared<const AlgebraSpec>(bc_system(n));
    FockModule mod(alg, ModuleSpec::vacuum(*alg));
    std::vector<Insertion> ins;
    for (int i = 0; i < b_count; ++i)
        ins.push_back({n, [&mod](long k, const StateVector& v) { return mod.apply_mode(0, k, v); }});
    for (int i = 0; i < c_count; ++i)
        ins.push_back({1 - n, [&mod](long k, const StateVector& v) { return mod.apply_mode(1, k, v); }});
    const Monomial top_state = bc_top_state(n);
    auto top = [&top_state](const StateVector& v) { return v.coefficient(top_state); };
    return mode_series(ins, mod.vacuum(), top, monomial_level(top_state), max_weight, box);
}

SeriesCoefficients restrict_to_box(const SeriesCoefficients& s, long box) {
    SeriesCoefficients out;
    for (const auto& [alpha, c] : s) {
        bool inside = true;
        for (std::size_t j = 1; j < alpha.size(); ++j) inside = inside && alpha[j] >= -box && alpha[j] <= box;
        if (inside) out.emplace(alpha, c);
    }
    return out;
}

namespace {

template <class ModeFn>
CorrelatorCrossCheck cross_check(const RationalFunction& f, long depth, long max_field_weight, ModeFn modes) {
    CorrelatorCrossCheck r;
    r.max_weight = f.leading_weight() + depth;
    r.box = f.leading_spread() + depth + std::abs(max_field_weight) + 2;
    const auto closed = restrict_to_box(f.expand(r.max_weight), r.box);
    const auto mode = modes(r.max_weight, r.box);
    r.agree = closed == mode;
    r.coefficients = closed.size();
    return r;
}

}  // namespace

CorrelatorCrossCheck heisenberg_cross_check(const RatGrid& Q, const std::vector<int>& gens, long depth) {
    return cross_check(heisenberg_correlator(Q, gens), depth, 1,
                       [&](long w, long box) { return heisenberg_mode_series(Q, gens, w, box); });
}

CorrelatorCrossCheck lattice_cross_check(const LatticeVoa& voa, const std::vector<LatticeVector>& charges, long depth) {
    long h = 0;
    for (const auto& l : charges) h = std::max(h, voa.spec().form(l, l) / 2);
    return cross_check(lattice_correlator(voa.spec(), charges), depth, h,
                       [&](long w, long box) { return lattice_mode_series(voa, charges, w, box); });
}

CorrelatorCrossCheck bc_cross_check(int n, int b_count, int c_count, long depth) {
    return cross_check(bc_correlator(n, b_count, c_count), depth, std::max(std::abs(n), std::abs(1 - n)),
                       [&](long w, long box) { return bc_mode_series(n, b_count, c_count, w, box); });
}

namespace {

std::map<Monomial, std::size_t, MonomialLess> index_of(const std::vector<Monomial>& states) {
    std::map<Monomial, std::size_t, MonomialLess> idx;
    for (std::size_t i = 0; i < states.size(); ++i) idx.emplace(states[i], i);
    return idx;
}

void append_column(RatMatrix& m, std::size_t& col, const StateVector& v,
                   const std::map<Monomial, std::size_t, MonomialLess>& rows) {
    bool any = false;
    for (const auto& [mono, c] : v.terms()) {
        auto it = rows.find(mono);
        if (it == rows.end()) throw std::logic_error("coinvariants: image left the target level");
        m.set(it->second, col, c);
        any = true;
    }
    if (any) ++col;
}

std::size_t vacuum_coinvariants(const FockModule& mod, long level) {
    const auto& alg = mod.algebra();
    std::size_t total = 0;
    for (long t = mod.min_level(); t <= level; ++t) {
        const auto& rows = mod.basis_at(t);
        if (rows.empty()) continue;
        const auto idx = index_of(rows);
        std::vector<StateVector> images;
        for (int g = 0; g < alg.size(); ++g)
            for (long m = alg.generator(g).weight - 1; t + m >= mod.min_level(); --m)
                for (const auto& s : mod.basis_at(t + m)) {
                    StateVector u = mod.apply_mode(g, m, StateVector::basis(s));
                    if (!u.is_zero()) images.push_back(std::move(u));
                }
        RatMatrix a(rows.size(), images.size());
        std::size_t col = 0;
        for (const auto& u : images) append_column(a, col, u, idx);
        total += rows.size() - matrix_rank(a);
    }
    return total;
}

std::size_t lattice_coinvariants(const LatticeVoa& voa, long radius, long level) {
    const auto& spec = voa.spec();
    const auto sectors = voa.window(radius);
    auto in_window = [radius](const LatticeVector& l) {
        return std::all_of(l.begin(), l.end(), [radius](long x) { return x >= -radius && x <= radius; });
    };
    auto h = [&spec](const LatticeVector& l) { return spec.form(l, l) / 2; };
    const int rank = spec.rank();
    std::size_t total = 0;
    for (const auto& lambda : sectors) {
        const FockModule& target = voa.sector(lambda);
        for (long t = 0; h(lambda) + t <= level; ++t) {
            const auto& rows = target.basis_at(t);
            const auto idx = index_of(rows);
            std::vector<StateVector> images;
            for (int i = 0; i < rank; ++i)
                for (long m = 0; t + m >= 0; --m)
                    for (const auto& s : target.basis_at(t + m)) {
                        StateVector u = target.apply_mode(i, m, StateVector::basis(s));
                        if (!u.is_zero()) images.push_back(std::move(u));
                    }
            for (const auto& mu : sectors) {
                if (std::all_of(mu.begin(), mu.end(), [](long x) { return x == 0; })) continue;
                LatticeVector nu = lambda;
                for (std::size_t i = 0; i < nu.size(); ++i) nu[i] -= mu[i];
                if (!in_window(nu)) continue;
                // source level s = t + k + h(lambda) - h(nu) >= 0
                for (long k = h(mu) - 1;; --k) {
                    const long s = t + k + h(lambda) - h(nu);
                    if (s < 0) break;
                    for (const auto& st : voa.sector(nu).basis_at(s)) {
                        StateVector u = voa.vertex_operator_mode(mu, k, nu, StateVector::basis(st));
                        if (!u.is_zero()) images.push_back(std::move(u));
                    }
                }
            }
            RatMatrix a(rows.size(), images.size());
            std::size_t col = 0;
            for (const auto& u : images) append_column(a, col, u, idx);
            total += rows.size() - matrix_rank(a);
        }
    }
    return total;
}

}  // namespace

BlocksResult genus0_blocks_dim(const FockModule& vacuum, long level) {
    return {level, vacuum_coinvariants(vacuum, level), vacuum_coinvariants(vacuum, level + 1)};
}

BlocksResult genus0_blocks_dim(const LatticeVoa& voa, long radius, long level) {
    return {level, lattice_coinvariants(voa, radius, level), lattice_coinvariants(voa, radius, level + 1)};
}

QSeries vacuum_generating_function(const AlgebraSpec& alg, int cutoff) {
    // creation modes g_m, m <= -weight, raise the level by l = -m >= weight
    int lo = 0;
    for (int g = 0; g < alg.size(); ++g)
        for (int l = alg.generator(g).weight; l <= 0; ++l) {
            if (!alg.is_odd(g)) throw std::invalid_argument("vacuum_generating_function: even creation mode of non-positive level");
            lo += l;
        }
    const int top = cutoff - lo;  // no term above top can come back down to cutoff
    std::map<int, Rational> c{{0, Rational(1)}};
    for (int g = 0; g < alg.size(); ++g)
        for (int l = alg.generator(g).weight; l <= top; ++l) {
            if (alg.is_odd(g)) {
                auto next = c;
                for (const auto& [e, x] : c)
                    if (e + l <= top) next[e + l] += x;
                c = std::move(next);
            } else {
                for (int e = lo + l; e <= top; ++e) {
                    auto it = c.find(e - l);
                    if (it != c.end()) c[e] += it->second;
                }
            }
        }
    QSeries out(lo, cutoff);
    for (const auto& [e, x] : c)
        if (e <= cutoff) out.add_to(e, x);
    return out;
}

QSeries character(const FockModule& mod, int cutoff) {
    QSeries s(static_cast<int>(mod.min_level()), cutoff);
    for (long l = mod.min_level(); l <= cutoff; ++l)
        s.add_to(static_cast<int>(l), Rational(static_cast<long>(mod.basis_at(l).size())));
    return s;
}

QYSeries character_by_ghost(const FockModule& mod, int cutoff) {
    QYSeries out;
    const int lo = static_cast<int>(mod.min_level());
    for (long l = mod.min_level(); l <= cutoff; ++l)
        for (const auto& m : mod.basis_at(l)) {
            auto it = out.try_emplace(mod.ghost_number(m), lo, cutoff).first;
            it->second.add_to(static_cast<int>(l), Rational(1));
        }
    return out;
}

namespace {

QYSeries to_qy(const std::map<std::pair<int, int>, Rational>& poly, int cutoff) {
    int lo = 0;
    for (const auto& [yq, c] : poly) lo = std::min(lo, yq.second);
    QYSeries out;
    for (const auto& [yq, c] : poly) {
        if (yq.second > cutoff || c.is_zero()) continue;
        out.try_emplace(yq.first, lo, cutoff).first->second.add_to(yq.second, c);
    }
    return out;
}

}  // namespace

QYSeries bc_fermion_character(int n, int cutoff) {
    // factors (1 + y^s q^e); the negative exponents bound how far a later factor can pull a term down
    std::vector<std::pair<int, int>> factors;
    long negative = 0;
    for (int e = 1 - n; e <= cutoff + 2 * std::abs(n) + 2; ++e) factors.emplace_back(1, e);
    for (int e = n; e <= cutoff + 2 * std::abs(n) + 2; ++e) factors.emplace_back(-1, e);
    for (const auto& f : factors) negative += std::min(0, f.second);
    const long reach = cutoff - negative;
    std::map<std::pair<int, int>, Rational> poly{{{0, 0}, Rational(1)}};
    for (const auto& [y, e] : factors) {
        if (e > reach) continue;
        auto next = poly;
        for (const auto& [yq, c] : poly)
            if (yq.second + e <= reach) next[{yq.first + y, yq.second + e}] += c;
        poly = std::move(next);
    }
    return to_qy(poly, cutoff);
}

QYSeries bc_boson_character(int n, int cutoff) {
    std::map<std::pair<int, int>, Rational> poly;
    const QSeries p = partition_generating_function(cutoff + 2 * std::abs(n) + 2);
    const long bound = cutoff + 4L * std::abs(n) + 4;
    for (long N = -bound; N <= bound; ++N) {
        const long e = N * (N - 1) / 2 + N * (1 - n);
        if (e > cutoff) continue;
        for (long k = 0; e + k <= cutoff; ++k)
            poly[{static_cast<int>(N), static_cast<int>(e + k)}] += p.coefficient(static_cast<int>(k));
    }
    return to_qy(poly, cutoff);
}

}  // namespace vlab
