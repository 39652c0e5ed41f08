/// nhse: spectra, loops, windings and state classification for defect chains.
///
/// Every subcommand reads a JSON config (--config) and writes into --out.
/// Exit status: 0 ok, 2 bad config or parameters, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nhse/errors.hpp"
#include "nhse/run.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

void print_sweep(const nhse::SweepResult& r) { std::cout << r.table().str(); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Non-Hermitian defect chains: spectra, point-gap topology and state taxonomy"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    double re = 0.0, im = 0.0;

    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "JSON config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory")->required();
        return sub;
    };
    CLI::App* spectrum = add("spectrum", "eigenvalues and residuals under the configured bc");
    CLI::App* loop = add("loop", "PBC loop of the whole chain swept over the twist");
    CLI::App* winding = add("winding", "winding number around a reference energy");
    winding->add_option("--re", re, "Re E_ref")->required();
    winding->add_option("--im", im, "Im E_ref")->required();
    CLI::App* classify = add("classify", "label every OBC eigenstate");
    CLI::App* sweep = add("sweep", "classify at every value of the configured sweep");
    CLI::App* critical = add("critical-size", "smallest N without hybrid skin-defect states");
    CLI::App* gap = add("gap-scan", "line gap, Im E and edge pair along t");
    CLI::App* symmetry = add("check-symmetry", "|| T H^T T^-1 - H ||_F with T = I (x) sigma_y");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        const nhse::RunConfig cfg = nhse::load_config(config_path);
        const std::filesystem::path out(out_dir);
        if (spectrum->parsed()) {
            nhse::run_spectrum(cfg, out);
        } else if (loop->parsed()) {
            nhse::run_loop(cfg, out);
        } else if (winding->parsed()) {
            const auto w = nhse::run_winding(cfg, {re, im}, out);
            if (w.value)
                std::cout << "winding " << *w.value << "\n";
            else
                std::cout << "winding on_loop\n";
        } else if (classify->parsed()) {
            print_sweep(nhse::run_classify(cfg, out));
        } else if (sweep->parsed()) {
            print_sweep(nhse::run_sweep(cfg, out));
        } else if (critical->parsed()) {
            const auto r = nhse::run_critical_size(cfg, out);
            for (const auto& row : r.rows)
                std::cout << (row.value ? nhse::format_number(*row.value) + " " : "")
                          << (row.n_c ? std::to_string(*row.n_c) : "not found") << "\n";
        } else if (gap->parsed()) {
            std::cout << nhse::gap_scan_table(nhse::run_gap_scan(cfg, out)).str();
        } else if (symmetry->parsed()) {
            std::cout << "deviation " << nhse::format_number(nhse::run_check_symmetry(cfg, out)) << "\n";
        }
    } catch (const nhse::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config;
    } catch (const nhse::SpecificationError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return exit_config;
    } catch (const nhse::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
