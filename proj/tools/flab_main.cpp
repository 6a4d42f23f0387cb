// fulfillment-lab command line front end.

#include <chrono>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flab/commands.hpp"

namespace {

std::vector<flab::Element> parse_csv(const std::string& text) {
    std::vector<flab::Element> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    return out;
}

void add_common(CLI::App* sub, flab::ExperimentConfig& cfg, std::string& segments_csv) {
    sub->add_option("--sig", cfg.sig_path, "signature file (JSON); default: arithmetic base");
    sub->add_option("--formula", cfg.formula, "formula source text");
    sub->add_option("--segments", segments_csv, "comma list of segment bounds, e.g. 2,5,26");
    sub->add_option("--chain", cfg.chain_path, "chain file (JSON)");
    sub->add_option("--assign", cfg.assignment, "assignment, e.g. x=1,y=0");
    sub->add_option("--n", cfg.n, "chain length / coloring tuple size");
    sub->add_option("--e", cfg.e, "tuple size for ph");
    sub->add_option("--k", cfg.k, "target size");
    sub->add_option("--r", cfg.r, "color count");
    sub->add_option("--m", cfg.m, "slack parameter");
    sub->add_option("--cap", cfg.cap, "search/enumeration guard");
    sub->add_option("--universe", cfg.universe, "base universe size");
    sub->add_option("--suite", cfg.suite, "randomized suite size (collapse)");
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--workers", cfg.workers, "worker threads");
    sub->add_option("--out", cfg.out_dir, "report output directory");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fulfillment-lab: (L,n)-models, fulfillment, F-collapses and colorings"};
    app.require_subcommand(1);

    flab::ExperimentConfig cfg;
    std::string segments_csv;
    for (const char* name : {"fulfill", "qcheck", "collapse", "probe", "ph", "bcp", "enumerate"}) {
        auto* sub = app.add_subcommand(name);
        add_common(sub, cfg, segments_csv);
    }

    CLI11_PARSE(app, argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    if (!segments_csv.empty()) cfg.segments = parse_csv(segments_csv);

    try {
        auto t0 = std::chrono::steady_clock::now();
        flab::CmdResult res = flab::run_command(cfg);
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::cout << res.human;
        std::cout << "elapsed: " << ms << " ms\n";
        return res.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
