#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "landscape/result_table.hpp"
#include "landscape/scenario.hpp"

namespace {

std::string current_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

landscape::PlotSpec plot_spec_for(const landscape::ResultTable& table) {
    landscape::PlotSpec spec;
    spec.title = table.name;
    spec.x_column = table.columns.front();
    for (std::size_t c = 1; c < table.columns.size(); ++c) spec.series.push_back(table.columns[c]);
    return spec;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"landscape-lab: landscape functions, eigenvector bounds, and spectral estimates"};

    std::string task;
    std::string scenario_path;
    std::string out_dir;
    bool reproducible = false;

    app.add_option("task", task, "task name (spectrum, landscape, verify, lowerbound, heatkernel,"
                                 " plap, magnetic, figure) or a figure alias fig1..fig6")
        ->required();
    app.add_option("--scenario", scenario_path, "scenario JSON file");
    app.add_option("--out", out_dir, "output directory (default: scenario 'out' or current)");
    app.add_flag("--reproducible", reproducible, "suppress timestamps for byte-stable output");

    CLI11_PARSE(app, argc, argv);

    try {
        landscape::Scenario scenario;
        const bool is_figure_alias = task.rfind("fig", 0) == 0 && task != "figure";
        if (is_figure_alias) {
            scenario = landscape::figure_scenario(task);
        } else {
            if (scenario_path.empty()) {
                std::cerr << "error: task '" << task << "' needs --scenario FILE\n";
                return 2;
            }
            std::ifstream in(scenario_path);
            if (!in) {
                std::cerr << "error: cannot read scenario file " << scenario_path << "\n";
                return 2;
            }
            std::stringstream buffer;
            buffer << in.rdbuf();
            scenario = landscape::parse_scenario(buffer.str());
            if (scenario.task != task) {
                std::cerr << "error: scenario task '" << scenario.task
                          << "' does not match command '" << task << "'\n";
                return 2;
            }
        }

        landscape::RunResult result = landscape::run_scenario(scenario);

        if (out_dir.empty()) out_dir = scenario.out_path.empty() ? "." : scenario.out_path;
        std::filesystem::create_directories(out_dir);
        const std::string stamp = reproducible ? std::string() : current_timestamp();
        for (auto& table : result.tables) {
            table.timestamp = stamp;
            const std::string base = (std::filesystem::path(out_dir) / table.name).string();
            landscape::emit_csv(table, base + ".csv");
            std::cout << "wrote " << base << ".csv\n";
            if (scenario.task == "figure" && table.columns.size() >= 2 &&
                table.name.rfind("heatkernel_t", 0) != 0) {
                landscape::emit_svg(table, base + ".svg", plot_spec_for(table));
                std::cout << "wrote " << base << ".svg\n";
            }
        }
        for (const auto& line : result.log) std::cout << line << "\n";
        if (!result.certified) {
            std::cout << "certification: FAILED\n";
            return 1;
        }
        std::cout << "certification: ok\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
