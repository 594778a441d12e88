#pragma once

#include "vlab/constructors.hpp"
#include "vlab/rational.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace vlab::cli {

/// Constructor parameters; only the fields of `kind` are meaningful.
struct AlgebraParams {
    std::string kind;  // heisenberg, kac_moody, virasoro, dilaton, bc, lattice

    int rank = 0;                       // heisenberg
    RatGrid Q;                          // heisenberg form, kac_moody custom form
    std::string lie;                    // kac_moody: "sl2" or "custom"
    Rational q;                         // kac_moody sl2: Q = q * Killing
    std::vector<std::string> names;     // kac_moody custom
    std::vector<RatGrid> structure;     // kac_moody custom, structure[i][j][k] = f_ij^k
    Rational c;                         // virasoro
    Rational lambda;                    // dilaton
    Rational dilaton_Q{1};              // dilaton
    int n = 0;                          // bc
    std::vector<std::vector<long>> gram;  // lattice

    bool operator==(const AlgebraParams&) const = default;
};

struct Insertions {
    std::vector<std::string> currents;   // heisenberg generator names
    std::vector<LatticeVector> charges;  // lattice
    int b = 0, c = 0;                    // bc insertion counts

    bool operator==(const Insertions&) const = default;
};

struct JobSpec {
    AlgebraParams algebra;
    std::string command;  // check, dims, cc, ope, primary, brst, cohomology, correlator, character, blocks
    long cutoff = 4;
    long window = 3;
    std::optional<int> ghost;               // cohomology: a single ghost number
    std::optional<Insertions> insertions;   // correlator
    std::optional<std::string> generator;   // primary, ope: restrict to one generator
    std::optional<Rational> expect;         // cc: expected central charge
    std::string output;                     // report path, empty for stdout

    bool operator==(const JobSpec&) const = default;
};

extern const std::vector<std::string> kCommands;

/// Every schema violation found, each prefixed by its JSON path.
struct SpecError : std::runtime_error {
    explicit SpecError(std::vector<std::string> errors);
    std::vector<std::string> errors;
};

/// Parses a job document. `command_override` supplies the command when the document has none.
JobSpec parse_spec(const std::string& document, const std::optional<std::string>& command_override = std::nullopt);
JobSpec parse_spec_json(const nlohmann::json& doc, const std::optional<std::string>& command_override = std::nullopt);
/// Re-checks a job after flag overrides (cutoffs, command).
void validate(const JobSpec& job);

nlohmann::ordered_json to_json(const JobSpec& job);
std::string serialize(const JobSpec& job);

struct Check {
    std::string name;
    bool pass = false;
};

struct Report {
    nlohmann::ordered_json job;
    nlohmann::ordered_json results = nlohmann::ordered_json::object();
    std::vector<Check> checks;
    nlohmann::ordered_json provenance;

    bool all_pass() const;
    std::string text() const;
    std::string structured() const;
};

/// Errors from the modules propagate as std::runtime_error carrying "<algebra>/<command>: ".
Report run(const JobSpec& job);

}  // namespace vlab::cli
