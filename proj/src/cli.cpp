#include "vlab/cli.hpp"

#include "vlab/blocks.hpp"
#include "vlab/brst.hpp"
#include "vlab/stress.hpp"

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#ifndef VLAB_VERSION
#define VLAB_VERSION "unknown"
#endif

namespace vlab::cli {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

const std::vector<std::string> kCommands = {"check",      "dims",       "cc",        "ope",       "primary",
                                            "brst",       "cohomology", "correlator", "character", "blocks"};

namespace {

const std::vector<std::string> kKinds = {"heisenberg", "kac_moody", "virasoro", "dilaton", "bc", "lattice"};

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid job spec:";
    for (const auto& e : errors) out += "\n  " + e;
    return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

class Parser {
public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

    std::optional<Rational> rational(const json& v, const std::string& path) {
        if (v.is_string()) {
            try {
                return Rational::parse(v.get<std::string>());
            } catch (const std::exception&) {
                fail(path, "not a rational \"" + v.get<std::string>() + "\"");
                return std::nullopt;
            }
        }
        if (v.is_number_integer()) return Rational(v.get<long>());
        if (v.is_number_float()) {
            fail(path, "rationals are written as strings \"p/q\", not floats");
            return std::nullopt;
        }
        fail(path, "expected a rational string");
        return std::nullopt;
    }

    std::optional<long> integer(const json& v, const std::string& path, std::optional<long> min = std::nullopt) {
        if (!v.is_number_integer()) {
            fail(path, "expected an integer");
            return std::nullopt;
        }
        long x = v.get<long>();
        if (min && x < *min) {
            fail(path, "must be >= " + std::to_string(*min));
            return std::nullopt;
        }
        return x;
    }

    std::optional<RatGrid> matrix(const json& v, const std::string& path, std::optional<std::size_t> size) {
        if (!v.is_array()) {
            fail(path, "expected a list of rows");
            return std::nullopt;
        }
        RatGrid out;
        bool ok = true;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string rp = path + "[" + std::to_string(i) + "]";
            if (!v[i].is_array()) {
                fail(rp, "expected a row");
                ok = false;
                continue;
            }
            std::vector<Rational> row;
            for (std::size_t j = 0; j < v[i].size(); ++j) {
                auto r = rational(v[i][j], rp + "[" + std::to_string(j) + "]");
                ok = ok && r.has_value();
                row.push_back(r.value_or(Rational(0)));
            }
            if (row.size() != v.size()) {
                fail(rp, "row length " + std::to_string(row.size()) + " in a " + std::to_string(v.size()) + "-row matrix");
                ok = false;
            }
            out.push_back(std::move(row));
        }
        if (size && out.size() != *size) {
            fail(path, "expected " + std::to_string(*size) + " rows, got " + std::to_string(out.size()));
            ok = false;
        }
        if (!ok) return std::nullopt;
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t j = i + 1; j < out.size(); ++j)
                if (out[i][j] != out[j][i]) {
                    fail(path, "not symmetric at [" + std::to_string(i) + "][" + std::to_string(j) + "]");
                    return std::nullopt;
                }
        return out;
    }
};

void check_keys(Parser& p, const json& doc, const std::string& kind) {
    std::set<std::string> allowed = {"algebra", "command", "cutoff", "window", "ghost",
                                     "insertions", "generator", "expect", "output"};
    static const std::map<std::string, std::vector<std::string>> per_kind = {
        {"heisenberg", {"rank", "Q"}},
        {"kac_moody", {"lie", "q", "names", "structure", "Q"}},
        {"virasoro", {"c"}},
        {"dilaton", {"lambda", "Q"}},
        {"bc", {"n"}},
        {"lattice", {"gram"}},
    };
    if (auto it = per_kind.find(kind); it != per_kind.end()) allowed.insert(it->second.begin(), it->second.end());
    for (const auto& [key, value] : doc.items())
        if (!allowed.count(key)) p.fail("$." + key, "unknown field" + (kind.empty() ? "" : " for algebra " + kind));
}

void parse_algebra(Parser& p, const json& doc, AlgebraParams& a) {
    auto need = [&](const char* key) -> const json* {
        if (!doc.contains(key)) {
            p.fail(std::string("$.") + key, "missing (required by " + a.kind + ")");
            return nullptr;
        }
        return &doc.at(key);
    };
    if (a.kind == "heisenberg") {
        if (auto v = need("rank")) {
            auto r = p.integer(*v, "$.rank", 1);
            a.rank = static_cast<int>(r.value_or(0));
        }
        if (a.rank > 0) {
            if (doc.contains("Q")) {
                if (auto m = p.matrix(doc["Q"], "$.Q", static_cast<std::size_t>(a.rank))) a.Q = *m;
            } else {
                a.Q.assign(static_cast<std::size_t>(a.rank), std::vector<Rational>(static_cast<std::size_t>(a.rank)));
                for (int i = 0; i < a.rank; ++i) a.Q[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
            }
        }
    } else if (a.kind == "kac_moody") {
        if (auto v = need("lie")) {
            if (!v->is_string() || (v->get<std::string>() != "sl2" && v->get<std::string>() != "custom")) {
                p.fail("$.lie", "expected \"sl2\" or \"custom\"");
                return;
            }
            a.lie = v->get<std::string>();
        }
        if (a.lie == "sl2") {
            if (auto v = need("q"))
                if (auto r = p.rational(*v, "$.q")) a.q = *r;
            for (const char* key : {"names", "structure", "Q"})
                if (doc.contains(key)) p.fail(std::string("$.") + key, "not used with lie = sl2");
        } else if (a.lie == "custom") {
            if (doc.contains("q")) p.fail("$.q", "not used with lie = custom");
            const json* names = need("names");
            if (names) {
                if (!names->is_array() || names->empty()) {
                    p.fail("$.names", "expected a non-empty list of generator names");
                } else {
                    for (std::size_t i = 0; i < names->size(); ++i) {
                        if (!(*names)[i].is_string()) p.fail("$.names[" + std::to_string(i) + "]", "expected a string");
                        else a.names.push_back((*names)[i].get<std::string>());
                    }
                }
            }
            const std::size_t d = a.names.size();
            if (d == 0) return;
            if (auto v = need("Q"))
                if (auto m = p.matrix(*v, "$.Q", d)) a.Q = *m;
            if (auto v = need("structure")) {
                if (!v->is_array() || v->size() != d) {
                    p.fail("$.structure", "expected " + std::to_string(d) + " blocks of " + std::to_string(d) + "x" +
                                              std::to_string(d) + " rationals");
                } else {
                    for (std::size_t i = 0; i < d; ++i) {
                        const std::string bp = "$.structure[" + std::to_string(i) + "]";
                        const json& blk = (*v)[i];
                        RatGrid grid(d, std::vector<Rational>(d));
                        if (!blk.is_array() || blk.size() != d) {
                            p.fail(bp, "expected " + std::to_string(d) + " rows");
                        } else {
                            for (std::size_t j = 0; j < d; ++j) {
                                if (!blk[j].is_array() || blk[j].size() != d) {
                                    p.fail(bp + "[" + std::to_string(j) + "]", "expected " + std::to_string(d) + " entries");
                                    continue;
                                }
                                for (std::size_t k = 0; k < d; ++k)
                                    if (auto r = p.rational(blk[j][k], bp + "[" + std::to_string(j) + "][" + std::to_string(k) + "]"))
                                        grid[j][k] = *r;
                            }
                        }
                        a.structure.push_back(std::move(grid));
                    }
                }
            }
            if (p.errors.empty() && a.Q.size() == d && a.structure.size() == d) {
                try {
                    LieAlgebraData{a.names, a.structure, a.Q}.validate();
                } catch (const std::invalid_argument& e) {
                    p.fail("$.structure", e.what());
                }
            }
        }
    } else if (a.kind == "virasoro") {
        if (auto v = need("c"))
            if (auto r = p.rational(*v, "$.c")) a.c = *r;
    } else if (a.kind == "dilaton") {
        if (auto v = need("lambda"))
            if (auto r = p.rational(*v, "$.lambda")) a.lambda = *r;
        if (doc.contains("Q")) {
            if (auto r = p.rational(doc["Q"], "$.Q")) {
                if (r->is_zero()) p.fail("$.Q", "must be nonzero");
                else a.dilaton_Q = *r;
            }
        }
    } else if (a.kind == "bc") {
        if (auto v = need("n"))
            if (auto r = p.integer(*v, "$.n")) a.n = static_cast<int>(*r);
    } else if (a.kind == "lattice") {
        const json* g = need("gram");
        if (!g) return;
        if (!g->is_array() || g->empty()) {
            p.fail("$.gram", "expected a non-empty list of integer rows");
            return;
        }
        const std::size_t r = g->size();
        bool ok = true;
        for (std::size_t i = 0; i < r; ++i) {
            const std::string rp = "$.gram[" + std::to_string(i) + "]";
            std::vector<long> row;
            if (!(*g)[i].is_array() || (*g)[i].size() != r) {
                p.fail(rp, "expected a row of " + std::to_string(r) + " integers");
                ok = false;
                continue;
            }
            for (std::size_t j = 0; j < r; ++j) {
                auto x = p.integer((*g)[i][j], rp + "[" + std::to_string(j) + "]");
                ok = ok && x.has_value();
                row.push_back(x.value_or(0));
            }
            a.gram.push_back(std::move(row));
        }
        if (!ok) return;
        for (std::size_t i = 0; i < r; ++i) {
            if (a.gram[i][i] % 2 != 0)
                p.fail("$.gram[" + std::to_string(i) + "][" + std::to_string(i) + "]",
                       "odd diagonal entry " + std::to_string(a.gram[i][i]) + " (lattice is not even)");
            for (std::size_t j = i + 1; j < r; ++j)
                if (a.gram[i][j] != a.gram[j][i])
                    p.fail("$.gram", "not symmetric at [" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
    }
}

void parse_insertions(Parser& p, const json& v, const AlgebraParams& a, JobSpec& job) {
    Insertions ins;
    if (a.kind == "heisenberg") {
        if (!v.is_array()) {
            p.fail("$.insertions", "expected a list of generator names");
            return;
        }
        const auto names = heisenberg_names(std::max(a.rank, 1));
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string ip = "$.insertions[" + std::to_string(i) + "]";
            if (!v[i].is_string()) p.fail(ip, "expected a generator name");
            else if (!contains(names, v[i].get<std::string>())) p.fail(ip, "unknown generator \"" + v[i].get<std::string>() + "\"");
            else ins.currents.push_back(v[i].get<std::string>());
        }
    } else if (a.kind == "lattice") {
        if (!v.is_array()) {
            p.fail("$.insertions", "expected a list of lattice vectors");
            return;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string ip = "$.insertions[" + std::to_string(i) + "]";
            if (!v[i].is_array() || v[i].size() != a.gram.size()) {
                p.fail(ip, "expected a vector of " + std::to_string(a.gram.size()) + " integers");
                continue;
            }
            LatticeVector l;
            for (std::size_t j = 0; j < v[i].size(); ++j) l.push_back(p.integer(v[i][j], ip + "[" + std::to_string(j) + "]").value_or(0));
            ins.charges.push_back(std::move(l));
        }
    } else if (a.kind == "bc") {
        if (!v.is_object()) {
            p.fail("$.insertions", "expected {\"b\": count, \"c\": count}");
            return;
        }
        for (const auto& [key, val] : v.items())
            if (key != "b" && key != "c") p.fail("$.insertions." + key, "unknown field");
        if (v.contains("b")) ins.b = static_cast<int>(p.integer(v["b"], "$.insertions.b", 0).value_or(0));
        if (v.contains("c")) ins.c = static_cast<int>(p.integer(v["c"], "$.insertions.c", 0).value_or(0));
    } else {
        p.fail("$.insertions", "correlators are available for heisenberg, lattice and bc");
        return;
    }
    job.insertions = std::move(ins);
}

void check_combination(Parser& p, const JobSpec& job) {
    const auto& kind = job.algebra.kind;
    if ((job.command == "brst" || job.command == "cohomology") && kind == "bc")
        p.fail("$.algebra", job.command + " needs even matter; bc is odd");
    if (job.command == "correlator") {
        if (kind != "heisenberg" && kind != "lattice" && kind != "bc")
            p.fail("$.algebra", "correlators are available for heisenberg, lattice and bc");
        else if (!job.insertions)
            p.fail("$.insertions", "required by correlator");
    }
    if (job.cutoff < 0) p.fail("$.cutoff", "must be >= 0");
    if (job.window < 0) p.fail("$.window", "must be >= 0");
}

}  // namespace

SpecError::SpecError(std::vector<std::string> errs) : std::runtime_error(join_errors(errs)), errors(std::move(errs)) {}

JobSpec parse_spec(const std::string& document, const std::optional<std::string>& command_override) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SpecError({std::string("$: not valid JSON (") + e.what() + ")"});
    }
    return parse_spec_json(doc, command_override);
}

JobSpec parse_spec_json(const json& doc, const std::optional<std::string>& command_override) {
    Parser p;
    JobSpec job;
    if (!doc.is_object()) throw SpecError({"$: expected an object"});
    if (!doc.contains("algebra")) {
        p.fail("$.algebra", "missing");
    } else if (!doc["algebra"].is_string() || !contains(kKinds, doc["algebra"].get<std::string>())) {
        p.fail("$.algebra", "expected one of heisenberg, kac_moody, virasoro, dilaton, bc, lattice");
    } else {
        job.algebra.kind = doc["algebra"].get<std::string>();
    }
    check_keys(p, doc, job.algebra.kind);
    if (!job.algebra.kind.empty()) parse_algebra(p, doc, job.algebra);

    if (command_override) {
        job.command = *command_override;
    } else if (doc.contains("command")) {
        if (doc["command"].is_string()) job.command = doc["command"].get<std::string>();
        else p.fail("$.command", "expected a string");
    }
    if (job.command.empty()) p.fail("$.command", "missing (give it in the spec or as the first argument)");
    else if (!contains(kCommands, job.command)) p.fail("$.command", "unknown command \"" + job.command + "\"");

    if (doc.contains("cutoff")) job.cutoff = p.integer(doc["cutoff"], "$.cutoff", 0).value_or(job.cutoff);
    if (doc.contains("window")) job.window = p.integer(doc["window"], "$.window", 0).value_or(job.window);
    if (doc.contains("ghost"))
        if (auto g = p.integer(doc["ghost"], "$.ghost")) job.ghost = static_cast<int>(*g);
    if (doc.contains("generator")) {
        if (doc["generator"].is_string()) job.generator = doc["generator"].get<std::string>();
        else p.fail("$.generator", "expected a generator name");
    }
    if (doc.contains("expect"))
        if (auto r = p.rational(doc["expect"], "$.expect")) job.expect = *r;
    if (doc.contains("output")) {
        if (doc["output"].is_string()) job.output = doc["output"].get<std::string>();
        else p.fail("$.output", "expected a path");
    }
    if (doc.contains("insertions") && !job.algebra.kind.empty()) parse_insertions(p, doc["insertions"], job.algebra, job);
    if (!job.command.empty() && contains(kCommands, job.command) && !job.algebra.kind.empty()) check_combination(p, job);
    if (!p.errors.empty()) throw SpecError(p.errors);
    return job;
}

void validate(const JobSpec& job) {
    Parser p;
    if (!contains(kCommands, job.command)) p.fail("$.command", "unknown command \"" + job.command + "\"");
    else check_combination(p, job);
    if (!p.errors.empty()) throw SpecError(p.errors);
}

namespace {

ojson grid_json(const RatGrid& g) {
    ojson out = ojson::array();
    for (const auto& row : g) {
        ojson r = ojson::array();
        for (const auto& x : row) r.push_back(x.str());
        out.push_back(r);
    }
    return out;
}

}  // namespace

ojson to_json(const JobSpec& job) {
    ojson out;
    const auto& a = job.algebra;
    out["algebra"] = a.kind;
    if (a.kind == "heisenberg") {
        out["rank"] = a.rank;
        out["Q"] = grid_json(a.Q);
    } else if (a.kind == "kac_moody") {
        out["lie"] = a.lie;
        if (a.lie == "sl2") {
            out["q"] = a.q.str();
        } else {
            out["names"] = a.names;
            ojson s = ojson::array();
            for (const auto& blk : a.structure) s.push_back(grid_json(blk));
            out["structure"] = s;
            out["Q"] = grid_json(a.Q);
        }
    } else if (a.kind == "virasoro") {
        out["c"] = a.c.str();
    } else if (a.kind == "dilaton") {
        out["lambda"] = a.lambda.str();
        out["Q"] = a.dilaton_Q.str();
    } else if (a.kind == "bc") {
        out["n"] = a.n;
    } else if (a.kind == "lattice") {
        out["gram"] = a.gram;
    }
    out["command"] = job.command;
    out["cutoff"] = job.cutoff;
    out["window"] = job.window;
    if (job.ghost) out["ghost"] = *job.ghost;
    if (job.insertions) {
        if (a.kind == "heisenberg") out["insertions"] = job.insertions->currents;
        else if (a.kind == "lattice") out["insertions"] = job.insertions->charges;
        else out["insertions"] = ojson{{"b", job.insertions->b}, {"c", job.insertions->c}};
    }
    if (job.generator) out["generator"] = *job.generator;
    if (job.expect) out["expect"] = job.expect->str();
    if (!job.output.empty()) out["output"] = job.output;
    return out;
}

std::string serialize(const JobSpec& job) { return to_json(job).dump(2) + "\n"; }

bool Report::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

std::string scalar_text(const ojson& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render(std::ostringstream& os, const std::string& key, const ojson& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    if (v.is_array() && !v.empty() && (v[0].is_array() || v[0].is_string() || v[0].is_object())) {
        os << pad << key << ":\n";
        for (const auto& e : v) {
            if (e.is_array()) {
                os << pad << "  ";
                for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "  " : "") << scalar_text(e[i]);
                os << "\n";
            } else if (e.is_object()) {
                for (const auto& [k, x] : e.items()) render(os, k, x, indent + 2);
            } else {
                os << pad << "  " << scalar_text(e) << "\n";
            }
        }
    } else if (v.is_object()) {
        os << pad << key << ":\n";
        for (const auto& [k, x] : v.items()) render(os, k, x, indent + 2);
    } else {
        os << pad << key << ": " << scalar_text(v) << "\n";
    }
}

}  // namespace

std::string Report::text() const {
    std::ostringstream os;
    os << "job: " << job.dump() << "\n";
    for (const auto& [k, v] : results.items()) render(os, k, v, 0);
    for (const auto& c : checks) os << c.name << ": " << (c.pass ? "PASS" : "FAIL") << "\n";
    os << "status: " << (all_pass() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string Report::structured() const {
    ojson out;
    out["job"] = job;
    out["results"] = results;
    ojson cs = ojson::array();
    for (const auto& c : checks) cs.push_back(ojson{{"name", c.name}, {"status", c.pass ? "PASS" : "FAIL"}});
    out["checks"] = cs;
    out["status"] = all_pass() ? "PASS" : "FAIL";
    out["provenance"] = provenance;
    return out.dump(2) + "\n";
}

namespace {

std::string algebra_label(const AlgebraParams& a) {
    std::ostringstream os;
    os << a.kind << "(";
    if (a.kind == "heisenberg") os << "rank=" << a.rank;
    else if (a.kind == "kac_moody") os << (a.lie == "sl2" ? "sl2, q=" + a.q.str() : "dim=" + std::to_string(a.names.size()));
    else if (a.kind == "virasoro") os << "c=" << a.c;
    else if (a.kind == "dilaton") os << "lambda=" << a.lambda << ", Q=" << a.dilaton_Q;
    else if (a.kind == "bc") os << "n=" << a.n;
    else if (a.kind == "lattice") os << "rank=" << a.gram.size();
    os << ")";
    return os.str();
}

std::string vector_text(const FockModule& mod, const StateVector& v) {
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : v.terms()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c << ") " << mod.state_string(m);
    }
    return os.str();
}

ojson series_json(const QSeries& s) {
    ojson out = ojson::array();
    for (int e = s.min_exponent(); e <= s.cutoff(); ++e) out.push_back(ojson::array({e, s.coefficient(e).str()}));
    return out;
}

ojson qy_json(const QYSeries& s) {
    ojson out = ojson::object();
    for (const auto& [y, series] : s) {
        std::string terms;
        for (const auto& [e, c] : series.terms()) terms += (terms.empty() ? "" : " + ") + c.str() + " q^" + std::to_string(e);
        out["y^" + std::to_string(y)] = terms.empty() ? "0" : terms;
    }
    return out;
}

class Context {
public:
    explicit Context(const JobSpec& job) : job_(job) {
        const auto& a = job.algebra;
        if (a.kind == "heisenberg") {
            alg_ = std::make_shared<const AlgebraSpec>(heisenberg(a.rank, a.Q));
        } else if (a.kind == "kac_moody") {
            lie_ = a.lie == "sl2" ? LieAlgebraData::sl2(a.q) : LieAlgebraData{a.names, a.structure, a.Q};
            alg_ = std::make_shared<const AlgebraSpec>(kac_moody(*lie_));
        } else if (a.kind == "virasoro") {
            alg_ = std::make_shared<const AlgebraSpec>(virasoro(a.c));
        } else if (a.kind == "dilaton") {
            alg_ = std::make_shared<const AlgebraSpec>(dilaton({a.lambda, a.dilaton_Q}));
        } else if (a.kind == "bc") {
            alg_ = std::make_shared<const AlgebraSpec>(bc_system(a.n));
        } else {
            voa_ = std::make_unique<LatticeVoa>(LatticeSpec::with_default_cocycle(a.gram));
            alg_ = voa_->heisenberg_algebra();
        }
        vacuum_ = std::make_unique<FockModule>(alg_, ModuleSpec::vacuum(*alg_));
    }

    const AlgebraPtr& alg() const { return alg_; }
    const FockModule& vacuum() const { return *vacuum_; }
    const LatticeVoa* voa() const { return voa_.get(); }
    const std::optional<LieAlgebraData>& lie() const { return lie_; }

    /// Canonical stress tensor; throws SugawaraRejected for critical Kac-Moody levels.
    FieldExpr stress() const {
        const auto& a = job_.algebra;
        if (a.kind == "heisenberg") return sugawara(LieAlgebraData::abelian(a.Q)).T;
        if (a.kind == "kac_moody") return sugawara(*lie_).T;
        if (a.kind == "virasoro") return FieldExpr::generator(*alg_, 0);
        if (a.kind == "dilaton") return dilaton_T({a.lambda, a.dilaton_Q});
        if (a.kind == "bc") return bc_T(a.n);
        RatGrid gram;
        for (const auto& row : a.gram) {
            std::vector<Rational> r;
            for (long x : row) r.emplace_back(x);
            gram.push_back(std::move(r));
        }
        return sugawara(LieAlgebraData::abelian(gram)).T;
    }

private:
    const JobSpec& job_;
    AlgebraPtr alg_;
    std::optional<LieAlgebraData> lie_;
    std::unique_ptr<LatticeVoa> voa_;
    std::unique_ptr<FockModule> vacuum_;
};

void add_check(Report& r, const std::string& name, bool pass) { r.checks.push_back({name, pass}); }

void run_check(const JobSpec& job, const Context& cx, Report& r) {
    const auto rep = check_axioms(*cx.alg(), static_cast<int>(std::max<long>(2, job.window)));
    ojson v = ojson::array();
    for (const auto& x : rep.violations) v.push_back(x.kind + ": " + x.witness);
    r.results["violations"] = v;
    add_check(r, "skew-symmetry, Jacobi and module identities", rep.ok());
    if (const LatticeVoa* voa = cx.voa()) {
        // on the level <= 1 states of every sector with coordinates in [-1, 1]
        bool local = true;
        const auto vecs = voa->window(1);
        for (const auto& nu : vecs)
            for (long level = 0; level <= 1 && local; ++level)
                for (const auto& state : voa->sector(nu).basis_at(level))
                    for (const auto& l : vecs)
                        for (const auto& m : vecs)
                            for (long i = -2; i <= 2 && local; ++i)
                                for (long k = -2; k <= 2 && local; ++k)
                                    local = voa->locality_defect(l, i, m, k, nu, StateVector::basis(state)).is_zero();
        add_check(r, "vertex operator locality", local);
    }
}

void run_dims(const JobSpec& job, const Context& cx, Report& r) {
    const int cutoff = static_cast<int>(job.cutoff);
    if (const LatticeVoa* voa = cx.voa()) {
        QSeries oracle = QSeries::constant(Rational(1), cutoff);
        const QSeries p = partition_generating_function(cutoff);
        for (int i = 0; i < voa->spec().rank(); ++i) oracle = oracle * p;
        ojson sectors = ojson::array();
        bool ok = true;
        for (const auto& l : voa->window(job.window)) {
            const QSeries ch = character(voa->sector(l), cutoff);
            ok = ok && ch.agrees_with(oracle);
            std::string dims;
            for (int e = 0; e <= cutoff; ++e) dims += (e ? " " : "") + ch.coefficient(e).str();
            sectors.push_back(voa->label(l) + " h=" + voa->sector_weight(l).str() + ": " + dims);
        }
        r.results["sectors"] = sectors;
        add_check(r, "sector dimensions match the partition product", ok);
        return;
    }
    const QSeries ch = character(cx.vacuum(), cutoff);
    r.results["dims"] = series_json(ch);
    add_check(r, "graded dimensions match the product formula", ch.agrees_with(vacuum_generating_function(*cx.alg(), cutoff)));
}

void run_cc(const JobSpec& job, const Context& cx, Report& r) {
    FieldExpr T = FieldExpr::unit();
    try {
        T = cx.stress();
    } catch (const SugawaraRejected& e) {
        r.results["rejected"] = e.what();
        r.results["condition"] = e.condition;
        add_check(r, "stress tensor exists", false);
        return;
    }
    r.results["T"] = T.str(*cx.alg());
    try {
        const auto res = extract_central_charge(T, cx.vacuum(), static_cast<int>(job.window), job.cutoff);
        r.results["c"] = res.c.str();
        r.results["vacuum cross-check"] = res.vacuum_cross_checked ? "done" : "not applicable";
        add_check(r, "Virasoro commutators scalar and consistent", true);
        if (job.expect) add_check(r, "c = " + job.expect->str(), res.c == *job.expect);
    } catch (const NotVirasoroError& e) {
        r.results["error"] = e.what();
        add_check(r, "Virasoro commutators scalar and consistent", false);
    }
}

void run_ope(const JobSpec& job, const Context& cx, Report& r) {
    const auto& alg = *cx.alg();
    const auto& mod = cx.vacuum();
    ojson out = ojson::array();
    for (int a = 0; a < alg.size(); ++a) {
        if (job.generator && alg.generator(a).name != *job.generator) continue;
        for (int b = 0; b < alg.size(); ++b) {
            const long wa = alg.generator(a).weight, wb = alg.generator(b).weight;
            const StateVector vb = mod.apply_mode(b, -wb, mod.vacuum());
            // a_(j) b = a_{j - wa + 1} b_{-wb}|0>, of level wa + wb - j - 1
            for (long j = 0; wa + wb - j - 1 >= mod.min_level(); ++j) {
                const StateVector s = mod.apply_mode(a, j - wa + 1, vb);
                if (s.is_zero()) continue;
                out.push_back(alg.generator(a).name + "_(" + std::to_string(j) + ") " + alg.generator(b).name + " = " +
                              vector_text(mod, s));
            }
        }
    }
    if (job.generator && !std::any_of(alg.generators().begin(), alg.generators().end(),
                                      [&](const GeneratorSpec& g) { return g.name == *job.generator; }))
        throw std::invalid_argument("unknown generator '" + *job.generator + "'");
    r.results["ope"] = out;
}

void run_primary(const JobSpec& job, const Context& cx, Report& r) {
    FieldExpr T = FieldExpr::unit();
    try {
        T = cx.stress();
    } catch (const SugawaraRejected& e) {
        r.results["rejected"] = e.what();
        add_check(r, "stress tensor exists", false);
        return;
    }
    const auto& alg = *cx.alg();
    ojson w = ojson::array();
    bool found = false;
    for (int g = 0; g < alg.size(); ++g) {
        const auto& gen = alg.generator(g);
        if (job.generator && gen.name != *job.generator) continue;
        found = true;
        const auto v = verify_primary(T, g, gen.weight, cx.vacuum(), static_cast<int>(job.window));
        for (const auto& x : v) w.push_back(gen.name + ": [L_" + std::to_string(x.m) + ", " + gen.name + "_" + std::to_string(x.k) + "] on " + x.state);
        add_check(r, gen.name + " primary of weight " + std::to_string(gen.weight), v.empty());
    }
    if (!found) throw std::invalid_argument("unknown generator '" + job.generator.value_or("") + "'");
    r.results["witnesses"] = w;
}

std::unique_ptr<BrstComplex> make_complex(const JobSpec& job, const Context& cx, Report& r) {
    FieldExpr T = cx.stress();
    const Rational c = extract_central_charge(T, cx.vacuum(), 2, 2).c;
    r.results["matter c"] = c.str();
    return std::make_unique<BrstComplex>(cx.alg(), T, c, job.cutoff);
}

void run_brst(const JobSpec& job, const Context& cx, Report& r) {
    auto complex = make_complex(job, cx, r);
    const auto sq = brst_square(*complex);
    std::map<long, std::size_t> nonzero;
    std::map<long, std::string> sample;
    for (const auto& [key, m] : sq) {
        nonzero[key.first] += m.nonzeros();
        if (!m.is_zero() && !sample.count(key.first)) sample[key.first] = m.entries().begin()->second.str();
    }
    ojson levels = ojson::array();
    bool zero = true;
    for (const auto& [level, count] : nonzero) {
        zero = zero && count == 0;
        levels.push_back("level " + std::to_string(level) + ": " +
                         (count == 0 ? std::string("delta^2 = 0")
                                     : std::to_string(count) + " nonzero entries, e.g. " + sample[level]));
    }
    r.results["delta^2"] = levels;
    add_check(r, "delta^2 = 0", zero);
    const auto props = brst_properties(*complex, std::min<long>(job.cutoff, 1), 2);
    add_check(r, "delta has ghost number 1", props.degree_one);
    add_check(r, "{delta, b_m} = L_m", props.b_anticommutator);
    add_check(r, "[delta, L_m] = 0", props.commutes_with_T);
    ojson w = ojson::array();
    for (const auto& x : props.witnesses) w.push_back(x);
    r.results["witnesses"] = w;
}

void run_cohomology(const JobSpec& job, const Context& cx, Report& r) {
    auto complex = make_complex(job, cx, r);
    ojson table = ojson::array();
    bool nilpotent = true, euler = true;
    for (long level = complex->min_level(); level <= job.cutoff && nilpotent; ++level) {
        long chi_complex = 0, chi_cohomology = 0;
        for (int g : complex->ghost_numbers(level)) {
            const long sign = (g % 2 == 0) ? 1 : -1;
            chi_complex += sign * static_cast<long>(complex->basis(level, g).size());
            if (job.ghost && g != *job.ghost) continue;
            try {
                const auto h = brst_cohomology(*complex, level, g);
                chi_cohomology += sign * static_cast<long>(h);
                table.push_back(ojson::array({level, g, h}));
            } catch (const BrstNotNilpotent& e) {
                r.results["error"] = e.what();
                nilpotent = false;
                break;
            }
        }
        if (!job.ghost) euler = euler && chi_complex == chi_cohomology;
    }
    r.results["columns"] = "level  ghost  dim";
    r.results["cohomology"] = table;
    add_check(r, "delta^2 = 0", nilpotent);
    if (!job.ghost && nilpotent) add_check(r, "Euler characteristic of cohomology equals that of the complex", euler);
}

void run_correlator(const JobSpec& job, const Context& cx, Report& r) {
    const auto& ins = *job.insertions;
    const auto& a = job.algebra;
    RationalFunction f;
    CorrelatorCrossCheck x;
    if (a.kind == "heisenberg") {
        std::vector<int> gens;
        for (const auto& name : ins.currents) gens.push_back(cx.alg()->index_of(name));
        f = heisenberg_correlator(a.Q, gens);
        x = heisenberg_cross_check(a.Q, gens, job.cutoff);
    } else if (a.kind == "lattice") {
        f = lattice_correlator(cx.voa()->spec(), ins.charges);
        x = lattice_cross_check(*cx.voa(), ins.charges, job.cutoff);
    } else {
        f = bc_correlator(a.n, ins.b, ins.c);
        x = bc_cross_check(a.n, ins.b, ins.c, job.cutoff);
    }
    r.results["correlator"] = f.str();
    r.results["coefficients compared"] = x.coefficients;
    add_check(r, "closed form equals mode sums", x.agree);
}

void run_character(const JobSpec& job, const Context& cx, Report& r) {
    const int cutoff = static_cast<int>(job.cutoff);
    if (job.algebra.kind == "bc") {
        const QYSeries ch = character_by_ghost(cx.vacuum(), cutoff);
        r.results["character"] = qy_json(ch);
        add_check(r, "equals the fermion product", qy_equal(ch, bc_fermion_character(job.algebra.n, cutoff)));
        add_check(r, "equals the boson sum", qy_equal(ch, bc_boson_character(job.algebra.n, cutoff)));
        return;
    }
    if (const LatticeVoa* voa = cx.voa()) {
        QSeries total(0, cutoff), oracle(0, cutoff);
        QSeries p = QSeries::constant(Rational(1), cutoff);
        for (int i = 0; i < voa->spec().rank(); ++i) p = p * partition_generating_function(cutoff);
        for (const auto& l : voa->window(job.window)) {
            const long h = voa->spec().form(l, l) / 2;
            if (h > cutoff) continue;
            for (long t = 0; h + t <= cutoff; ++t) {
                total.add_to(static_cast<int>(h + t), Rational(static_cast<long>(voa->sector(l).basis_at(t).size())));
                oracle.add_to(static_cast<int>(h + t), p.coefficient(static_cast<int>(t)));
            }
        }
        r.results["character"] = series_json(total);
        add_check(r, "equals the theta-function sum", total.agrees_with(oracle));
        return;
    }
    const QSeries ch = character(cx.vacuum(), cutoff);
    r.results["character"] = series_json(ch);
    add_check(r, "equals the product formula", ch.agrees_with(vacuum_generating_function(*cx.alg(), cutoff)));
}

void run_blocks(const JobSpec& job, const Context& cx, Report& r) {
    const BlocksResult b = cx.voa() ? genus0_blocks_dim(*cx.voa(), job.window, job.cutoff)
                                    : genus0_blocks_dim(cx.vacuum(), job.cutoff);
    r.results["dimension"] = b.dim;
    r.results["dimension at cutoff + 1"] = b.dim_next;
    add_check(r, "stable under raising the truncation", b.stable());
}

}  // namespace

Report run(const JobSpec& job) {
    Report r;
    r.job = to_json(job);
    r.provenance = {{"tool", "vlab"},
                    {"version", VLAB_VERSION},
                    {"cutoff", job.cutoff},
                    {"window", job.window},
                    {"conventions", "a(z) = sum a_m z^(-m-h); [L_m, L_k] = (m-k) L_(m+k) + (c/12)(m^3-m) delta; exact rationals"}};
    r.results["algebra"] = algebra_label(job.algebra);
    try {
        Context cx(job);
        const auto& c = job.command;
        if (c == "check") run_check(job, cx, r);
        else if (c == "dims") run_dims(job, cx, r);
        else if (c == "cc") run_cc(job, cx, r);
        else if (c == "ope") run_ope(job, cx, r);
        else if (c == "primary") run_primary(job, cx, r);
        else if (c == "brst") run_brst(job, cx, r);
        else if (c == "cohomology") run_cohomology(job, cx, r);
        else if (c == "correlator") run_correlator(job, cx, r);
        else if (c == "character") run_character(job, cx, r);
        else if (c == "blocks") run_blocks(job, cx, r);
        else throw std::invalid_argument("unknown command '" + c + "'");
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error(algebra_label(job.algebra) + "/" + job.command + ": " + e.what());
    }
    return r;
}

}  // namespace vlab::cli
