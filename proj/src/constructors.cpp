#include "vlab/constructors.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace vlab {

namespace {

std::string idx3(int i, int j, int k) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
}

void require_square(const RatGrid& Q, std::size_t n, const std::string& what) {
    if (Q.size() != n) throw std::invalid_argument(what + " must be " + std::to_string(n) + "x" + std::to_string(n));
    for (const auto& row : Q)
        if (row.size() != n) throw std::invalid_argument(what + " must be " + std::to_string(n) + "x" + std::to_string(n));
}

void require_symmetric(const RatGrid& Q, const std::string& what) {
    for (std::size_t i = 0; i < Q.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (Q[i][j] != Q[j][i])
                throw std::invalid_argument(what + " is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
}

}  // namespace

// ---- Lie algebra data ---------------------------------------------------------

void LieAlgebraData::validate() const {
    const int d = dimension();
    if (d == 0) throw std::invalid_argument("Lie algebra of dimension 0");
    if (static_cast<int>(structure.size()) != d) throw std::invalid_argument("structure constants have the wrong shape");
    for (const auto& plane : structure) {
        if (static_cast<int>(plane.size()) != d) throw std::invalid_argument("structure constants have the wrong shape");
        for (const auto& row : plane)
            if (static_cast<int>(row.size()) != d) throw std::invalid_argument("structure constants have the wrong shape");
    }
    require_square(Q, static_cast<std::size_t>(d), "Q");
    require_symmetric(Q, "Q");
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                if (structure[i][j][k] != -structure[j][i][k])
                    throw std::invalid_argument("antisymmetry fails: f" + idx3(i, j, k));
    const auto nz = nonzero_structure();
    // [u_i,[u_j,u_k]] + [u_j,[u_k,u_i]] + [u_k,[u_i,u_j]] = 0
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                std::map<int, Rational> acc;
                auto nested = [&](int x, int y, int z) {  // [u_x, [u_y, u_z]]
                    for (const auto& [l, f1] : nz[y][z])
                        for (const auto& [t, f2] : nz[x][l]) acc[t] += f1 * f2;
                };
                nested(i, j, k);
                nested(j, k, i);
                nested(k, i, j);
                for (const auto& [t, v] : acc)
                    if (!v.is_zero()) throw std::invalid_argument("Jacobi identity fails on generators " + idx3(i, j, k));
            }
    // Q([x,y],z) + Q(y,[x,z]) = 0
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int z = 0; z < d; ++z) {
                Rational s;
                for (const auto& [l, f] : nz[x][y]) s += f * Q[l][z];
                for (const auto& [l, f] : nz[x][z]) s += f * Q[y][l];
                if (!s.is_zero()) throw std::invalid_argument("Q is not ad-invariant: witness " + idx3(x, y, z));
            }
}

RatGrid LieAlgebraData::killing_form() const {
    const int d = dimension();
    RatGrid K(d, std::vector<Rational>(d));
    const auto nz = nonzero_structure();
    // K(x,y) = sum_{l,t} f_xl^t f_yt^l
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y)
            for (int l = 0; l < d; ++l)
                for (const auto& [t, f] : nz[x][l]) K[x][y] += f * structure[y][t][l];
    return K;
}

std::vector<std::vector<std::vector<std::pair<int, Rational>>>> LieAlgebraData::nonzero_structure() const {
    const int d = dimension();
    std::vector<std::vector<std::vector<std::pair<int, Rational>>>> nz(d, std::vector<std::vector<std::pair<int, Rational>>>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                if (!structure[i][j][k].is_zero()) nz[i][j].emplace_back(k, structure[i][j][k]);
    return nz;
}

LieAlgebraData LieAlgebraData::sl2(const Rational& q) {
    LieAlgebraData g;
    g.names = {"e", "h", "f"};
    g.structure.assign(3, RatGrid(3, std::vector<Rational>(3)));
    auto set = [&](int i, int j, int k, long v) {
        g.structure[i][j][k] = Rational(v);
        g.structure[j][i][k] = Rational(-v);
    };
    set(0, 2, 1, 1);   // [e,f] = h
    set(1, 0, 0, 2);   // [h,e] = 2e
    set(1, 2, 2, -2);  // [h,f] = -2f
    RatGrid K = g.killing_form();
    g.Q = K;
    for (auto& row : g.Q)
        for (auto& v : row) v *= q;
    return g;
}

LieAlgebraData LieAlgebraData::abelian(const RatGrid& Q) {
    LieAlgebraData g;
    g.names = heisenberg_names(static_cast<int>(Q.size()));
    g.structure.assign(Q.size(), RatGrid(Q.size(), std::vector<Rational>(Q.size())));
    g.Q = Q;
    return g;
}

// ---- mode algebras --------------------------------------------------------------

std::vector<std::string> heisenberg_names(int rank) {
    if (rank == 1) return {"a"};
    std::vector<std::string> out;
    for (int i = 1; i <= rank; ++i) out.push_back("a" + std::to_string(i));
    return out;
}

AlgebraSpec heisenberg(int rank, const RatGrid& Q) {
    if (rank < 1) throw std::invalid_argument("Heisenberg rank must be positive");
    require_square(Q, static_cast<std::size_t>(rank), "Q");
    require_symmetric(Q, "Q");
    std::vector<GeneratorSpec> gens;
    for (const auto& n : heisenberg_names(rank)) gens.push_back({n, 1, Parity::Even, 0});
    AlgebraSpec alg("heisenberg", gens, false);
    for (int i = 0; i < rank; ++i)
        for (int j = i; j < rank; ++j)
            if (!Q[i][j].is_zero()) alg.set_rule(i, j, BracketRule{{}, Poly1({Rational(0), Q[i][j]})});
    return alg;
}

AlgebraSpec kac_moody(const LieAlgebraData& g) {
    g.validate();
    std::vector<GeneratorSpec> gens;
    for (const auto& n : g.names) gens.push_back({n, 1, Parity::Even, 0});
    AlgebraSpec alg("kac_moody", gens, false);
    const int d = g.dimension();
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            BracketRule r;
            for (int l = 0; l < d; ++l)
                if (!g.structure[i][j][l].is_zero()) r.terms.push_back({Poly2::constant(g.structure[i][j][l]), l, 0});
            if (!g.Q[i][j].is_zero()) r.central = Poly1({Rational(0), g.Q[i][j]});
            if (!r.terms.empty() || !r.central.is_zero()) alg.set_rule(i, j, std::move(r));
        }
    return alg;
}

AlgebraSpec virasoro(const Rational& c) {
    AlgebraSpec alg("virasoro", {{"L", 2, Parity::Even, 0}}, false);
    BracketRule r;
    r.terms.push_back({Poly2::term(Rational(1), 1, 0) + Poly2::term(Rational(-1), 0, 1), 0, 0});
    Rational c12 = c / Rational(12);
    r.central = Poly1({Rational(0), -c12, Rational(0), c12});
    alg.set_rule(0, 0, std::move(r));
    alg.central_charge = c;
    return alg;
}

AlgebraSpec bc_system(int n) {
    AlgebraSpec alg("bc", {{"b", n, Parity::Odd, -1}, {"c", 1 - n, Parity::Odd, 1}}, true);
    alg.set_rule(0, 1, BracketRule{{}, Poly1({Rational(1)})});
    alg.metadata["n"] = Rational(n);
    return alg;
}

AlgebraSpec dilaton(const DilatonSpec& spec) {
    if (spec.Q.is_zero()) throw std::invalid_argument("dilaton requires Q != 0");
    AlgebraSpec alg("dilaton", {{"a", 1, Parity::Even, 0}}, false);
    alg.set_rule(0, 0, BracketRule{{}, Poly1({Rational(0), -spec.Q})});
    alg.metadata["lambda"] = spec.lambda;
    alg.metadata["Q"] = spec.Q;
    return alg;
}

// ---- lattice ----------------------------------------------------------------------

LatticeSpec LatticeSpec::with_default_cocycle(std::vector<std::vector<long>> gram) {
    LatticeSpec s;
    s.gram = std::move(gram);
    const std::size_t r = s.gram.size();
    s.cocycle.assign(r, std::vector<int>(r, 1));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < i && j < s.gram[i].size(); ++j)
            s.cocycle[i][j] = (s.gram[i][j] % 2 == 0) ? 1 : -1;
    return s;
}

void LatticeSpec::validate() const {
    const std::size_t r = gram.size();
    if (r == 0) throw std::invalid_argument("lattice of rank 0");
    for (const auto& row : gram)
        if (row.size() != r) throw std::invalid_argument("gram matrix must be square");
    for (std::size_t i = 0; i < r; ++i) {
        if (gram[i][i] % 2 != 0)
            throw std::invalid_argument("lattice is not even: gram[" + std::to_string(i) + "][" + std::to_string(i) +
                                        "] = " + std::to_string(gram[i][i]));
        for (std::size_t j = 0; j < i; ++j)
            if (gram[i][j] != gram[j][i])
                throw std::invalid_argument("gram matrix is not symmetric at (" + std::to_string(i) + "," +
                                            std::to_string(j) + ")");
    }
    if (cocycle.size() != r) throw std::invalid_argument("cocycle table must be " + std::to_string(r) + "x" + std::to_string(r));
    for (std::size_t i = 0; i < r; ++i) {
        if (cocycle[i].size() != r) throw std::invalid_argument("cocycle table must be square");
        for (std::size_t j = 0; j < r; ++j) {
            if (cocycle[i][j] != 1 && cocycle[i][j] != -1) throw std::invalid_argument("cocycle entries must be +1 or -1");
            int expect = (gram[i][j] % 2 == 0) ? 1 : -1;
            if (cocycle[i][j] * cocycle[j][i] != expect)
                throw std::invalid_argument("cocycle violates eps(e_i,e_j) eps(e_j,e_i) = (-1)^Q(e_i,e_j) at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
        }
    }
}

long LatticeSpec::form(const LatticeVector& l, const LatticeVector& m) const {
    long s = 0;
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < rank(); ++j) s += l.at(i) * gram[i][j] * m.at(j);
    return s;
}

int LatticeSpec::epsilon(const LatticeVector& l, const LatticeVector& m) const {
    long odd = 0;
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < rank(); ++j)
            if (cocycle[i][j] == -1) odd += l.at(i) * m.at(j);
    return (odd % 2 == 0) ? 1 : -1;
}

LatticeVector lattice_add(const LatticeVector& a, const LatticeVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("lattice vectors of different rank");
    LatticeVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

namespace {

RatGrid gram_as_rationals(const LatticeSpec& s) {
    RatGrid Q(s.rank(), std::vector<Rational>(s.rank()));
    for (int i = 0; i < s.rank(); ++i)
        for (int j = 0; j < s.rank(); ++j) Q[i][j] = Rational(s.gram[i][j]);
    return Q;
}

}  // namespace

LatticeVoa::LatticeVoa(LatticeSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    heis_ = std::make_shared<const AlgebraSpec>(heisenberg(spec_.rank(), gram_as_rationals(spec_)));
}

std::string LatticeVoa::label(const LatticeVector& lambda) const {
    std::ostringstream os;
    os << "|";
    for (std::size_t i = 0; i < lambda.size(); ++i) os << (i ? "," : "") << lambda[i];
    os << ">";
    return os.str();
}

const FockModule& LatticeVoa::sector(const LatticeVector& lambda) const {
    if (static_cast<int>(lambda.size()) != spec_.rank()) throw std::invalid_argument("lattice vector of wrong rank");
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sectors_.find(lambda);
    if (it != sectors_.end()) return *it->second;
    ModuleSpec ms;
    ms.annihilation_threshold.assign(static_cast<std::size_t>(spec_.rank()), 0);
    for (int i = 0; i < spec_.rank(); ++i) {
        long mu = 0;
        for (int j = 0; j < spec_.rank(); ++j) mu += spec_.gram[i][j] * lambda[j];
        ms.highest_weight[i] = Rational(mu);
    }
    ms.hw_label = label(lambda);
    auto mod = std::make_unique<FockModule>(heis_, ms);
    const FockModule& ref = *mod;
    sectors_.emplace(lambda, std::move(mod));
    return ref;
}

Rational LatticeVoa::sector_weight(const LatticeVector& lambda) const {
    return Rational(spec_.form(lambda, lambda), 2);
}

std::vector<LatticeVector> LatticeVoa::window(long radius) const {
    std::vector<LatticeVector> out{LatticeVector{}};
    for (int i = 0; i < spec_.rank(); ++i) {
        std::vector<LatticeVector> next;
        for (const auto& v : out)
            for (long x = -radius; x <= radius; ++x) {
                LatticeVector w = v;
                w.push_back(x);
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

namespace {

// lambda_n = sum_i lambda_i a^i_n
StateVector apply_charge_mode(const FockModule& mod, const LatticeVector& lambda, long n, const StateVector& v) {
    StateVector out;
    for (std::size_t i = 0; i < lambda.size(); ++i)
        if (lambda[i] != 0) out += mod.apply_mode(static_cast<int>(i), n, v).scaled(Rational(lambda[i]));
    return out;
}

}  // namespace

StateVector LatticeVoa::vertex_operator_mode(const LatticeVector& lambda, long k, const LatticeVector& mu,
                                             const StateVector& v) const {
    if (v.is_zero()) return {};
    const FockModule& source = sector(mu);
    const FockModule& target = sector(lattice_add(lambda, mu));
    const long h = spec_.form(lambda, lambda) / 2;
    const long qlm = spec_.form(lambda, mu);
    const long top = v.max_level();

    // P_e v: coefficient of z^{-e} in E^+(z) v, via e P_e = -sum_{n=1}^{e} lambda_n P_{e-n}
    std::vector<StateVector> plus{v};
    for (long e = 1; e <= top; ++e) {
        StateVector acc;
        for (long n = 1; n <= e; ++n) acc += apply_charge_mode(source, lambda, n, plus[static_cast<std::size_t>(e - n)]);
        plus.push_back(acc.scaled(Rational(-1, e)));
    }
    // exponent of z: qlm + d - e = -k - h
    StateVector out;
    for (long e = 0; e <= top; ++e) {
        const long d = e - k - h - qlm;
        if (d < 0 || plus[static_cast<std::size_t>(e)].is_zero()) continue;
        std::vector<StateVector> minus{plus[static_cast<std::size_t>(e)]};
        for (long dd = 1; dd <= d; ++dd) {
            StateVector acc;
            for (long n = 1; n <= dd; ++n) acc += apply_charge_mode(target, lambda, -n, minus[static_cast<std::size_t>(dd - n)]);
            minus.push_back(acc.scaled(Rational(1, dd)));
        }
        out += minus.back();
    }
    return spec_.epsilon(lambda, mu) == 1 ? out : out.scaled(Rational(-1));
}

StateVector LatticeVoa::locality_defect(const LatticeVector& lambda, long m, const LatticeVector& mu, long k,
                                        const LatticeVector& nu, const StateVector& v) const {
    const long N = std::max(0L, -spec_.form(lambda, mu));
    StateVector out;
    for (long j = 0; j <= N; ++j) {
        Rational c = binomial(N, j) * Rational(j % 2 == 0 ? 1 : -1);
        const long mi = m + N - j, ki = k + j;
        StateVector lm = vertex_operator_mode(lambda, mi, lattice_add(mu, nu), vertex_operator_mode(mu, ki, nu, v));
        StateVector ml = vertex_operator_mode(mu, ki, lattice_add(lambda, nu), vertex_operator_mode(lambda, mi, nu, v));
        out += (lm - ml).scaled(c);
    }
    return out;
}

}  // namespace vlab
