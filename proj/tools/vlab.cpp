#include "vlab/cli.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"vlab: exact vertex-algebra computations from a job file"};
    std::string command, spec_path, out_path, format = "text";
    std::optional<long> cutoff, window;
    app.add_option("command", command, "command (overrides the spec's command field)")
        ->check(CLI::IsMember(vlab::cli::kCommands));
    app.add_option("--spec", spec_path, "job spec file (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--cutoff", cutoff, "level cutoff")->check(CLI::NonNegativeNumber);
    app.add_option("--window", window, "mode or charge window")->check(CLI::NonNegativeNumber);
    app.add_option("--out", out_path, "write the report here instead of stdout");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "structured"}));
    CLI11_PARSE(app, argc, argv);

    std::ifstream in(spec_path);
    std::stringstream buf;
    buf << in.rdbuf();

    vlab::cli::JobSpec job;
    try {
        job = vlab::cli::parse_spec(buf.str(), command.empty() ? std::nullopt : std::optional<std::string>(command));
        if (cutoff) job.cutoff = *cutoff;
        if (window) job.window = *window;
        if (!out_path.empty()) job.output = out_path;
        vlab::cli::validate(job);
    } catch (const vlab::cli::SpecError& e) {
        std::cerr << spec_path << ": " << e.what() << "\n";
        return 2;
    }

    vlab::cli::Report report;
    try {
        report = vlab::cli::run(job);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    const std::string body = format == "structured" ? report.structured() : report.text();
    if (job.output.empty()) {
        std::cout << body;
    } else {
        std::ofstream out(job.output);
        if (!out) {
            std::cerr << "cannot write " << job.output << "\n";
            return 3;
        }
        out << body;
    }
    return report.all_pass() ? 0 : 1;
}
