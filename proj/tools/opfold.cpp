#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "opfold/runner.hpp"

namespace {

int finish(const opfold::Report& rep, const std::string& out, const std::string& format, bool timings) {
    const auto fmt = format == "csv" ? opfold::Format::csv : opfold::Format::json;
    const auto files = opfold::emit_tables(rep, out, fmt, timings);
    for (const auto& e : rep.entries) {
        std::printf("%-26s %s", e.name.c_str(), opfold::to_string(e.status));
        if (e.residual_kind != "none") std::printf("  residual %s", e.residual.c_str());
        std::printf("\n");
        if (timings) std::fprintf(stderr, "%-26s %.3fs\n", e.name.c_str(), e.seconds);
    }
    std::printf("report: %s\n", files.front().string().c_str());
    return rep.failed() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sobolev orthogonal polynomials, Darboux factorizations and matrix bispectrality"};
    app.require_subcommand(1);

    std::string config, out, format = "json";
    bool timings = false;
    auto* run = app.add_subcommand("run", "run the tasks of a JSON config");
    run->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "output directory (default: the config's output field)");
    run->add_option("--format", format, "table format")->check(CLI::IsMember({"json", "csv"}));
    run->add_flag("--timings", timings, "record per-task wall time (report is then not byte-stable)");

    std::string verify_out = "opfold-verify", verify_format = "json";
    bool verify_timings = false;
    auto* verify = app.add_subcommand("verify-paper", "run the built-in Laguerre-Sobolev reproduction");
    verify->add_option("--out", verify_out, "output directory");
    verify->add_option("--format", verify_format, "table format")->check(CLI::IsMember({"json", "csv"}));
    verify->add_flag("--timings", verify_timings, "record per-task wall time");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto cfg = opfold::load_config(config);
            const auto rep = opfold::run(cfg, {timings});
            return finish(rep, out.empty() ? cfg.output : out, format, timings);
        }
        auto cfg = opfold::reference_config();
        cfg.output = verify_out;
        return finish(opfold::run(cfg, {verify_timings}), verify_out, verify_format, verify_timings);
    } catch (const opfold::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const opfold::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
