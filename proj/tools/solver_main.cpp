#include "pfrac/config.hpp"
#include "pfrac/errors.hpp"
#include "pfrac/io.hpp"
#include "pfrac/run.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Periodic fractional Schroedinger solver"};
    std::string mode;
    std::string config_path;
    std::string output;
    std::optional<std::uint64_t> seed;
    pfrac::RunFlags flags;

    app.add_option("mode", mode, "verify | solve | sweep | diagnose")->required();
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--output", output, "output directory (overrides output_dir)");
    app.add_option("--seed", seed, "random seed (overrides the config)");
    app.add_flag("--solver-trace", flags.solver_trace, "solve: write solver_trace.csv");
    app.add_flag("--dump-extension", flags.dump_extension, "solve: write extension.json");
    CLI11_PARSE(app, argc, argv);

    pfrac::RunConfig cfg;
    try {
        pfrac::ParseOptions options;
        options.base_dir = std::filesystem::path(config_path).parent_path();
        options.mode = pfrac::parse_mode(mode);
        options.seed = seed;
        cfg = pfrac::parse_config(pfrac::io::read_text_file(config_path), options);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return pfrac::exit_code_for(e);
    }
    if (!output.empty()) {
        // the default diagnose input follows the output directory
        if (cfg.solution_path == cfg.output_dir / "solution.json") cfg.solution_path = std::filesystem::path(output) / "solution.json";
        cfg.output_dir = output;
    }

    const pfrac::RunOutcome outcome = pfrac::run(cfg, flags, std::cout);
    for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << '\n';
    return outcome.exit_code;
}
