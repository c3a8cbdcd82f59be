// gfc - spectral inequalities and null control on compact groups.
//
// Subcommands map one-to-one onto the experiment runners; every run reads a
// config file, optionally overrides the seed and output directory from the
// command line, writes the runner's CSV/JSON files and exits with
//   0 success, 1 check failure, 2 configuration error, 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gfc/experiments.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gfc::ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int write_outputs(const gfc::RunOutput& out, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& f : out.files) {
        const auto path = std::filesystem::path(dir) / f.name;
        std::ofstream os(path, std::ios::binary);
        os << f.content;
        if (!os) {
            std::cerr << "error: cannot write " << path << "\n";
            return 3;
        }
        std::cout << "wrote " << path.string() << "\n";
    }
    return out.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral inequalities, functional calculus and null control on compact groups"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed_override = 0;
    bool seed_given = false;
    int threads = 1;
    app.add_option("--config", config_path, "configuration file")->required();
    app.add_option("--out", out_dir, "output directory (default ./out or config output.dir)");
    app.add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { seed_given = true; });
    app.add_option("--threads", threads, "worker threads for scan loops");

    const std::vector<std::pair<std::string, gfc::RunOutput (*)(const gfc::ExperimentConfig&)>>
        commands = {
            {"dual-table", &gfc::run_dual_table},
            {"verify", &gfc::run_verify},
            {"spectral-constant", &gfc::run_spectral_constant},
            {"doubling", &gfc::run_doubling},
            {"control", &gfc::run_control},
            {"cost-scan", &gfc::run_cost_scan},
            {"cutoff", &gfc::run_cutoff},
            {"check-symbol", &gfc::run_check_symbol},
            {"power-check", &gfc::run_power_check},
        };
    for (const auto& c : commands) app.add_subcommand(c.first, "")->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        gfc::ExperimentConfig cfg = gfc::parse_config(read_file(config_path));
        if (seed_given) cfg.seed = seed_override;
        gfc::global_thread_count() = std::max(1, threads);
        const std::string dir = !out_dir.empty() ? out_dir
                                : (!cfg.output_dir.empty() ? cfg.output_dir : "out");
        for (const auto& c : commands)
            if (app.get_subcommand(c.first)->parsed()) {
                gfc::RunOutput out = c.second(cfg);
                const int code = write_outputs(out, dir);
                if (code == 1) std::cout << "result: CHECK FAILURE\n";
                return code;
            }
        return 2;
    } catch (const gfc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
