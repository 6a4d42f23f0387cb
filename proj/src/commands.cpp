#include "flab/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>

#include "flab/arithmetic.hpp"
#include "flab/parallel.hpp"
#include "flab/parser.hpp"
#include "flab/random_gen.hpp"

namespace flab {

namespace {

Signature load_signature(const ExperimentConfig& cfg) {
    if (!cfg.sig_path) return arithmetic_signature();
    return signature_from_json(Json::parse(read_text_file(*cfg.sig_path)));
}

LnModel load_chain(const ExperimentConfig& cfg, const Signature& sig) {
    if (!cfg.segments.empty()) {
        std::vector<PartialStructure> levels;
        for (Element m : cfg.segments) levels.push_back(PartialStructure::segment(m, sig));
        return LnModel::create(std::move(levels));
    }
    if (cfg.chain_path)
        return ln_model_from_json(Json::parse(read_text_file(*cfg.chain_path)), sig);
    throw UsageError("no chain given: use --segments or --chain");
}

Assignment parse_assignment(const std::string& text) {
    Assignment a;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("bad assignment entry: " + item);
        std::string var = item.substr(0, eq);
        a[var] = std::stoull(item.substr(eq + 1));
    }
    return a;
}

Json config_echo(const ExperimentConfig& cfg) {
    Json j;
    j["command"] = cfg.command;
    if (cfg.formula) j["formula"] = *cfg.formula;
    if (!cfg.segments.empty()) j["segments"] = cfg.segments;
    if (cfg.sig_path) j["sig"] = *cfg.sig_path;
    if (cfg.assignment) j["assign"] = *cfg.assignment;
    j["n"] = cfg.n;
    j["e"] = cfg.e;
    j["k"] = cfg.k;
    j["r"] = cfg.r;
    j["m"] = cfg.m;
    j["cap"] = cfg.cap;
    j["universe"] = cfg.universe;
    j["suite"] = cfg.suite;
    j["seed"] = cfg.seed;
    return j;
}

Json report_shell(const ExperimentConfig& cfg) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["version"] = kArtifactVersion;
    j["config"] = config_echo(cfg);
    return j;
}

std::string truth_str(Truth t) {
    switch (t) {
        case Truth::True: return "true";
        case Truth::False: return "false";
        case Truth::Undefined: return "undefined";
    }
    return "?";
}

}  // namespace

std::string report_filename(const std::string& command) { return command + "_report.json"; }

CmdResult cmd_fulfill(const ExperimentConfig& cfg) {
    Signature sig = load_signature(cfg);
    if (!cfg.formula) throw UsageError("fulfill: --formula required");
    Formula f = parse_formula(*cfg.formula, sig);
    LnModel v = load_chain(cfg, sig);
    Assignment a = cfg.assignment ? parse_assignment(*cfg.assignment) : Assignment{};

    FulfillTrace trace;
    auto verdict = fulfills(v, f, a, &trace);

    CmdResult res;
    res.report = report_shell(cfg);
    res.report["verdict"] = verdict_to_json(verdict);
    res.report["trace"] = trace.lines;
    std::ostringstream hs;
    hs << "fulfills: " << truth_str(verdict.truth) << "\n";
    for (const auto& line : trace.lines) hs << "  " << line << "\n";
    res.human = hs.str();
    switch (verdict.truth) {
        case Truth::True: res.exit_code = 0; break;
        case Truth::False: res.exit_code = 1; break;
        case Truth::Undefined: res.exit_code = 3; break;
    }
    return res;
}

CmdResult cmd_qcheck(const ExperimentConfig& cfg) {
    if (cfg.segments.empty()) throw UsageError("qcheck: --segments required");
    if (!validate_sq_inc(cfg.segments)) {
        CmdResult res;
        res.exit_code = 2;
        res.report = report_shell(cfg);
        res.report["error"] = "sequence is not square-increasing";
        res.human = "qcheck: sequence is not square-increasing\n";
        return res;
    }
    LnModel v = make_sq_models(cfg.segments);
    QCheckReport rep = check_q(v);

    CmdResult res;
    res.report = report_shell(cfg);
    Json rows = Json::array();
    std::ostringstream hs;
    hs << "qcheck over segments [";
    for (std::size_t i = 0; i < cfg.segments.size(); ++i)
        hs << (i ? "," : "") << cfg.segments[i];
    hs << "]\n";
    for (std::size_t i = 0; i < rep.axioms.size(); ++i) {
        rows.push_back({{"axiom", "q" + std::to_string(i + 1)},
                        {"verdict", verdict_to_json(rep.axioms[i])}});
        hs << "  q" << (i + 1) << ": " << truth_str(rep.axioms[i].truth) << "\n";
    }
    rows.push_back({{"axiom", "no-greatest-element"},
                    {"verdict", verdict_to_json(rep.no_greatest)}});
    hs << "  no-greatest-element: " << truth_str(rep.no_greatest.truth) << "\n";
    res.report["rows"] = rows;
    res.report["hypothesis_met"] = rep.hypothesis_met;
    res.report["all_true"] = rep.all_true();
    if (!rep.hypothesis_met) hs << "  note: Lemma hypotheses (n >= 3, m0 > 1) unmet\n";
    res.human = hs.str();
    res.exit_code = 0;
    return res;
}

CmdResult cmd_collapse(const ExperimentConfig& cfg) {
    Signature sig = load_signature(cfg);
    CmdResult res;
    res.report = report_shell(cfg);

    if (cfg.suite > 0) {
        // randomized suite; sharded deterministically by instance index
        struct Outcome {
            bool ok = false;
            Json detail;
        };
        std::function<Outcome(std::size_t)> one = [&](std::size_t idx) {
            Rng rng(instance_seed(cfg.seed, idx));
            std::size_t n = 3 + rng.below(3);
            ChainGenOptions copt;
            FormulaGenOptions fopt;
            fopt.closed = true;
            fopt.max_tokens = 12;
            for (int tries = 0; tries < 10000; ++tries) {
                LnModel v = random_chain(rng, sig, n, copt);
                Formula f = random_formula(rng, sig, fopt);
                if (depth(f) + 2 > n) continue;
                if (!fulfills(v, f, {}).defined()) continue;
                CollapseResult r = f_collapse(v, f);
                CollapseReport rep = verify_collapse(v, r, f);
                Outcome out;
                out.ok = rep.ok();
                out.detail = {{"instance", idx},
                              {"conditions",
                               {{"c1", rep.c1}, {"c2", rep.c2}, {"c3", rep.c3},
                                {"c4", rep.c4}, {"c5", rep.c5}}},
                              {"violations", rep.violations}};
                return out;
            }
            throw GuardExceeded("collapse suite: no eligible instance found");
        };
        auto outcomes = parallel_map<Outcome>(cfg.suite, cfg.workers, one);
        std::size_t passed = 0;
        Json details = Json::array();
        for (const auto& o : outcomes) {
            if (o.ok) ++passed;
            else details.push_back(o.detail);
        }
        res.report["suite"] = {{"instances", cfg.suite}, {"passed", passed},
                               {"failures", details}};
        res.human = "collapse suite: " + std::to_string(passed) + "/" +
                    std::to_string(cfg.suite) + " instances passed all five conditions\n";
        res.exit_code = passed == cfg.suite ? 0 : 1;
        return res;
    }

    if (!cfg.formula) throw UsageError("collapse: --formula or --suite required");
    Formula f = parse_formula(*cfg.formula, sig);
    LnModel v = load_chain(cfg, sig);
    if (depth(f) + 2 > v.size()) {
        res.exit_code = 2;
        res.report["error"] = "dp(f) must be <= n-2";
        res.human = "collapse: dp(f) must be <= n-2\n";
        return res;
    }
    CollapseResult r = f_collapse(v, f);
    CollapseReport rep = verify_collapse(v, r, f);
    res.report["collapse"] = collapse_result_to_json(r, rep);
    Json sizes = Json::array();
    const ColParams base{0, sig.max_function_arity(), length(f), sig.size()};
    const BigInt cap = [] { BigInt c(1); for (int i = 0; i < 30; ++i) c *= 10; return c; }();
    for (std::size_t i = 0; i < r.universes.size(); ++i) {
        ColParams p = base;
        p.level = i;
        BigInt b = col_bound_clamped(p, cap);
        sizes.push_back({{"level", i},
                         {"size", r.universes[i].size()},
                         {"col_bound", b > cap ? std::string("> 1e30") : b.str()}});
    }
    res.report["sizes"] = sizes;
    std::ostringstream hs;
    hs << "collapse: conditions " << (rep.ok() ? "all pass" : "VIOLATED") << "\n";
    for (std::size_t i = 0; i < r.universes.size(); ++i)
        hs << "  |B_" << i << "| = " << r.universes[i].size() << "\n";
    res.human = hs.str();
    res.exit_code = rep.ok() ? 0 : 1;
    return res;
}

CmdResult cmd_probe(const ExperimentConfig& cfg) {
    Signature sig = load_signature(cfg);
    if (!cfg.formula) throw UsageError("probe: --formula required");
    Formula f = parse_formula(*cfg.formula, sig);
    std::vector<Element> universe;
    for (std::size_t i = 0; i < cfg.universe; ++i) universe.push_back(i);
    ProbeReport rep = completeness_probe(f, cfg.n, sig, universe, cfg.cap);

    CmdResult res;
    res.report = report_shell(cfg);
    res.report["probe"] = {
        {"chains", rep.chains},
        {"defined_true", rep.defined_true},
        {"defined_false", rep.defined_false},
        {"undefined", rep.undefined},
        {"no_defined_false", rep.no_defined_false()},
    };
    if (rep.first_false_chain) res.report["probe"]["first_false_chain"] = *rep.first_false_chain;
    if (rep.first_true_chain) res.report["probe"]["first_true_chain"] = *rep.first_true_chain;
    std::ostringstream hs;
    hs << "probe: " << rep.chains << " chains, true=" << rep.defined_true
       << " false=" << rep.defined_false << " undefined=" << rep.undefined << "\n";
    res.human = hs.str();
    return res;
}

CmdResult cmd_ph(const ExperimentConfig& cfg) {
    std::size_t value = ph_number(cfg.e, cfg.k, cfg.r, cfg.cap);
    CmdResult res;
    res.report = report_shell(cfg);
    res.report["ph_number"] = value;
    res.human = "ph(" + std::to_string(cfg.e) + "," + std::to_string(cfg.k) + "," +
                std::to_string(cfg.r) + ") = " + std::to_string(value) + "\n";
    return res;
}

CmdResult cmd_bcp(const ExperimentConfig& cfg) {
    // Desk-scale instance over the relational base {0, <}; the supplied
    // coloring is the min-witness pair rule over phi.
    Signature sig;
    sig.relations = {{"<", 2}};
    sig.constants = {"0"};
    Formula phi = cfg.formula ? parse_formula(*cfg.formula, sig)
                              : parse_formula("0 < x", sig);
    std::string var = *free_vars(phi).begin();

    BcpInstance inst;
    inst.r = cfg.r;
    inst.n = cfg.n;
    inst.sig = sig;
    inst.phi = phi;
    inst.phi_var = var;
    inst.j = sig.max_function_arity();
    inst.m = cfg.m;
    inst.k = std::max(cfg.k, std::max(inst.n, sig.size() + inst.m));
    BigInt default_n = default_bcp_universe_bound(inst);
    inst.N = default_n > 64 ? Element(64) : default_n.convert_to<Element>();

    std::vector<Element> base;
    for (std::size_t i = 0; i < std::min<std::size_t>(cfg.universe, 3); ++i) base.push_back(i);
    AuditConfig audit{StructurePool::over_universe(sig, base), std::max<std::size_t>(cfg.n + 1, 4),
                      cfg.cap};

    ChainColoring supplied{inst.n, phi, var, sig, inst.r, inst.N, MinWitnessPairRule{}};
    BcpReport rep = check_bcp_instance(inst, audit, supplied, cfg.cap);

    CmdResult res;
    res.report = report_shell(cfg);
    Json outs = Json::array();
    for (const auto& o : rep.outcomes) {
        std::string status = o.status == SubseqSearchResult::Status::Found ? "found"
                             : o.status == SubseqSearchResult::Status::NoneExists
                                 ? "none-exists"
                                 : "bound-exceeded";
        Json jo = {{"coloring", o.coloring_desc}, {"status", status}, {"detail", o.detail}};
        if (o.homogeneous_color) jo["color"] = *o.homogeneous_color;
        outs.push_back(jo);
    }
    res.report["bcp"] = {{"N", inst.N}, {"k", inst.k}, {"outcomes", outs}};
    std::ostringstream hs;
    hs << "bcp: " << rep.outcomes.size() << " coloring(s) checked\n";
    for (const auto& o : rep.outcomes)
        hs << "  " << o.coloring_desc << ": "
           << (o.status == SubseqSearchResult::Status::Found ? "homogeneous chain found"
                                                             : "no chain")
           << (o.homogeneous_color ? " color " + std::to_string(*o.homogeneous_color) : "")
           << "\n";
    res.human = hs.str();
    return res;
}

CmdResult cmd_enumerate(const ExperimentConfig& cfg) {
    Signature sig = load_signature(cfg);
    std::vector<Element> universe;
    for (std::size_t i = 0; i < cfg.universe; ++i) universe.push_back(i);
    std::vector<std::string> keys;
    std::size_t count = enumerate_ln_models(sig, cfg.n, universe, cfg.cap,
                                            [&](const LnModel& m) {
                                                if (keys.size() < 50) keys.push_back(chain_key(m));
                                            });
    CmdResult res;
    res.report = report_shell(cfg);
    res.report["enumerate"] = {{"count", count}, {"first_keys", keys}};
    res.human = "enumerate: " + std::to_string(count) + " (L,n)-models\n";
    return res;
}

namespace {

CmdResult dispatch(const ExperimentConfig& cfg) {
    if (cfg.command == "fulfill") return cmd_fulfill(cfg);
    if (cfg.command == "qcheck") return cmd_qcheck(cfg);
    if (cfg.command == "collapse") return cmd_collapse(cfg);
    if (cfg.command == "probe") return cmd_probe(cfg);
    if (cfg.command == "ph") return cmd_ph(cfg);
    if (cfg.command == "bcp") return cmd_bcp(cfg);
    if (cfg.command == "enumerate") return cmd_enumerate(cfg);
    throw UsageError("unknown command: " + cfg.command);
}

}  // namespace

CmdResult run_command(const ExperimentConfig& cfg) {
    // memo directory (optional): identical configs reuse the stored report
    const char* cache_dir = std::getenv("FULFILLMENT_LAB_CACHE");
    std::string cache_file;
    if (cache_dir && *cache_dir) {
        std::size_t h = std::hash<std::string>{}(config_echo(cfg).dump());
        cache_file = std::string(cache_dir) + "/" + cfg.command + "_" + std::to_string(h) +
                     ".json";
        if (std::filesystem::exists(cache_file)) {
            CmdResult res;
            res.report = Json::parse(read_text_file(cache_file));
            res.exit_code = res.report.value("exit_code", 0);
            res.human = cfg.command + ": reused cached report\n";
            return res;
        }
    }

    CmdResult res;
    try {
        res = dispatch(cfg);
    } catch (const GuardExceeded& e) {
        res.exit_code = 4;
        res.report = report_shell(cfg);
        res.report["error"] = e.what();
        res.human = std::string(e.what()) + "\n";
    } catch (const Error& e) {
        res.exit_code = 2;
        res.report = report_shell(cfg);
        res.report["error"] = e.what();
        res.human = std::string(e.what()) + "\n";
    }
    res.report["exit_code"] = res.exit_code;

    if (cfg.out_dir) {
        std::filesystem::create_directories(*cfg.out_dir);
        write_text_file(*cfg.out_dir + "/" + report_filename(cfg.command),
                        res.report.dump(2) + "\n");
    }
    if (!cache_file.empty()) {
        std::filesystem::create_directories(cache_dir);
        write_text_file(cache_file, res.report.dump(2) + "\n");
    }
    return res;
}

}  // namespace flab
