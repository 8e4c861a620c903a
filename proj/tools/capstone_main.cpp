#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "capstone/cli.hpp"

int main(int argc, char** argv) {
    namespace cli = capstone::cli;
    CLI::App app{"Potential theory and Bergman space dimension jobs from JSON configs"};
    std::string config_path;
    std::string format = "json";
    std::string out_path;
    app.add_option("config", config_path, "Job config (JSON)")->required();
    app.add_option("--format", format, "json or csv-tables")->check(CLI::IsMember({"json", "csv-tables"}));
    app.add_option("--out", out_path, "Write the report here instead of stdout");
    app.set_version_flag("--version", cli::kVersion);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kConfigError;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read " << config_path << "\n";
        return cli::kConfigError;
    }
    std::stringstream text;
    text << in.rdbuf();

    try {
        const auto config = cli::parse_config(text.str());
        const auto report = cli::run(config);
        const auto body = cli::emit(report, cli::parse_format(format));
        if (out_path.empty()) {
            const auto it = config.params.find("output");
            if (it != config.params.end() && it->is_string()) out_path = it->get<std::string>();
        }
        if (out_path.empty()) {
            std::cout << body;
        } else {
            std::ofstream out(out_path);
            if (!(out << body)) {
                std::cerr << "error: cannot write " << out_path << "\n";
                return cli::kOtherError;
            }
        }
        return report.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_code_for(e);
    }
}
