// Experiment orchestration shared by the CLI and the acceptance suite.
//
// Persisted reports are byte-identical for equal (config, seed) regardless of
// worker count: no timestamps in files, canonical key order, index-ordered
// merges. Wall-clock timing is printed to stdout only.

#ifndef FLAB_COMMANDS_HPP
#define FLAB_COMMANDS_HPP

#include <optional>
#include <string>

#include "flab/io.hpp"

namespace flab {

inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
    std::string command;
    std::optional<std::string> sig_path;      // default: arithmetic base
    std::optional<std::string> formula;       // source text
    std::optional<std::string> chain_path;    // LnModel file
    std::vector<Element> segments;            // alternative chain input
    std::optional<std::string> assignment;    // "x=3,y=1"
    std::size_t n = 3;
    std::size_t e = 1, k = 2, r = 2, m = 0;
    std::size_t cap = 100000;
    std::size_t universe = 2;                 // base universe size for probes
    std::size_t suite = 0;                    // randomized-suite instance count
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::optional<std::string> out_dir;
};

// Exit codes: fulfill partitions {0: True, 1: False, 2: input error,
// 3: Undefined}; other commands use 0/2 plus 4 for exceeded guards.
struct CmdResult {
    int exit_code = 0;
    Json report;
    std::string human;
};

CmdResult cmd_fulfill(const ExperimentConfig& cfg);
CmdResult cmd_qcheck(const ExperimentConfig& cfg);
CmdResult cmd_collapse(const ExperimentConfig& cfg);
CmdResult cmd_probe(const ExperimentConfig& cfg);
CmdResult cmd_ph(const ExperimentConfig& cfg);
CmdResult cmd_bcp(const ExperimentConfig& cfg);
CmdResult cmd_enumerate(const ExperimentConfig& cfg);

// Dispatch by cfg.command; persists the report under out_dir and reuses the
// FULFILLMENT_LAB_CACHE memo directory when set.
CmdResult run_command(const ExperimentConfig& cfg);

std::string report_filename(const std::string& command);

}  // namespace flab

#endif
