#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "rqkd/experiment.hpp"

namespace rqkd {

int cli_main(int argc, char** argv) {
    CLI::App app{"Seeded experiment runner for teleportation-based QKD sessions"};
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value configuration file");

    // Every flag overrides the config-file key of the same name.
    const std::vector<std::pair<std::string, std::string>> flags{
        {"mode", "two_party | pre_check | third_party_untrusted | third_party_trusted | chain"},
        {"d", "qudit dimension (prime)"},
        {"m", "number of mutually unbiased bases"},
        {"n", "key length in dits"},
        {"trials", "number of sessions"},
        {"seed", "master seed"},
        {"channel", "ideal | depolarizing | loss | substituted | purified_cshift | purified_identity"},
        {"noise-p", "depolarizing or loss probability"},
        {"hops", "chain length"},
        {"channel-hop", "chain: only this hop uses --channel (-1 = all)"},
        {"threshold", "abort threshold"},
        {"out", "summary JSON path"},
        {"csv", "per-trial CSV path"},
        {"transcript", "transcript output path"},
        {"transcript-trial", "trial whose transcript is written"},
    };
    std::map<std::string, std::optional<std::string>> given;
    for (const auto& [name, help] : flags) app.add_option("--" + name, given[name], help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        ConfigValues values;
        if (!config_path.empty()) values = read_config_file(config_path);
        for (const auto& [name, value] : given) {
            if (value) {
                std::string key = name;
                std::replace(key.begin(), key.end(), '-', '_');
                values[key] = *value;
            }
        }
        const auto spec = spec_from_values(values);
        const auto summary = run_experiment(spec);
        const auto& a = summary.aggregates;
        std::cout << mode_name(spec.mode) << " trials=" << spec.trials << " mean_error=" << a.mean_error_rate
                  << " abort_fraction=" << a.abort_fraction << " agreement=" << a.agreement_fraction << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace rqkd
