#include <CLI11.hpp>

#include "adiabatic/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"adiabatic-cli: spectra, schedules, adiabatic bounds and evolution reports"};
    std::string command, config, out = "out";
    std::uint64_t seed = 0;
    int workers = 0;
    app.add_option("command", command, "spectrum | schedule | bounds | evolve | effective | oracle | verify | sweep")
        ->required()
        ->check(CLI::IsMember(adiabatic::cli::commands()));
    app.add_option("--config", config, "run configuration (INI: [section] key = value)");
    app.add_option("--out", out, "output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "seed for randomized suites (overrides run.seed)");
    auto* workers_opt = app.add_option("--workers", workers, "worker threads (overrides run.workers)")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : adiabatic::cli::exit_config;
    }
    std::optional<std::uint64_t> s;
    std::optional<int> w;
    if (*seed_opt) s = seed;
    if (*workers_opt) w = workers;
    return adiabatic::cli::execute(command, config, out, s, w, std::cout, std::cerr);
}
