// zeno-lab <survival|zeno|validate|qft> --config <path> [--out <dir>] [--seed <u64>] [--preset <name>]
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical nonconvergence, 4 validation failure.

#include "zeno/commands.hpp"
#include "zeno/config.hpp"
#include "zeno/errors.hpp"
#include "zeno/parallel.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int execute(const std::string& command, const std::string& config_path, const std::string& preset,
            const std::optional<std::string>& out_dir, const std::optional<std::uint64_t>& seed) {
    using namespace zeno;
    try {
        config::Entries entries;
        if (!preset.empty()) entries = config::parse_entries(config::preset_text(preset));
        if (!config_path.empty()) {
            entries = config::merge(std::move(entries), config::parse_entries(config::read_file(config_path)));
        }
        auto cfg = config::build(entries);
        if (out_dir) cfg.output_dir = *out_dir;
        if (seed) cfg.seed = *seed;
        apply_thread_limit_from_env();
        return commands::run(command, cfg, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NormLoss& e) {
        std::cerr << "validation failed: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay laws of unstable states under pulsed band-limited measurements"};
    app.set_version_flag("--version", std::string(zeno::commands::version()));
    app.require_subcommand(1);

    std::string config_path;
    std::string preset;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;

    const std::pair<const char*, const char*> subcommands[]{
        {"survival", "survival probability of the unmeasured decay model"},
        {"zeno", "no-click probability under pulsed band measurements"},
        {"validate", "lattice collapse oracle against the closed forms"},
        {"qft", "one-loop self-energy, widths and spectral function"},
    };
    for (const auto& [name, help] : subcommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
        sub->add_option("--seed", seed, "random seed (overrides run.seed)");
        sub->add_option("--preset", preset, "built-in parameter set; --config entries override it");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    const auto* chosen = app.get_subcommands().front();
    if (config_path.empty() && preset.empty()) {
        std::cerr << "config error: one of --config or --preset is required\n";
        return kExitConfig;
    }
    return execute(chosen->get_name(), config_path, preset, out_dir, seed);
}
