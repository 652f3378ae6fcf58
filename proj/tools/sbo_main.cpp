#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sbo/dispatch.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sbo::config_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"batch front end for the coupled Schrodinger / Benjamin-Ono laboratory"};
    app.require_subcommand(1);

    std::string config_path, out_prefix;
    std::uint64_t seed = 0;
    bool seed_given = false, out_given = false;

    std::vector<CLI::App*> subs;
    for (const char* name : {"solve", "conserve", "scaling", "picard", "probe-gateaux",
                             "probe-bilinear", "oracle-calculus"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_prefix, "output path prefix")
            ->each([&](const std::string&) { out_given = true; });
        sub->add_option("--seed", seed, "seed for randomized sweeps")
            ->each([&](const std::string&) { seed_given = true; });
        subs.push_back(sub);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        sbo::RunConfig cfg = sbo::parse_config(read_file(config_path));
        const std::string sub_name = app.get_subcommands().front()->get_name();
        if (sub_name != sbo::to_string(cfg.command))
            throw sbo::config_error("config command '" + std::string(sbo::to_string(cfg.command)) +
                                    "' does not match subcommand '" + sub_name + "'");
        if (out_given) cfg.out_prefix = out_prefix;
        if (seed_given) cfg.seed = seed;

        const sbo::DispatchOutcome result = sbo::dispatch(cfg);
        for (const std::string& line : result.summary) std::cout << line << "\n";
        std::cout << "artifacts:";
        for (const std::string& f : result.artifacts) std::cout << " " << f;
        std::cout << "\n";
        return result.exit_code;
    } catch (const sbo::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        std::cerr << "usage: sbo <command> --config <path> [--out <prefix>] [--seed <u64>]\n";
        return 2;
    } catch (const sbo::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
