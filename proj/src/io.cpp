#include "flab/io.hpp"

#include <fstream>
#include <sstream>

#include "flab/parser.hpp"

namespace flab {

Json signature_to_json(const Signature& sig) {
    Json j;
    j["relations"] = Json::array();
    for (const auto& r : sig.relations)
        j["relations"].push_back({{"name", r.name}, {"arity", r.arity}});
    j["functions"] = Json::array();
    for (const auto& f : sig.functions)
        j["functions"].push_back({{"name", f.name}, {"arity", f.arity}});
    j["constants"] = sig.constants;
    j["arithmetic_base"] = sig.arithmetic_base;
    return j;
}

Signature signature_from_json(const Json& j) {
    Signature sig;
    for (const auto& r : j.value("relations", Json::array()))
        sig.relations.push_back({r.at("name").get<std::string>(), r.at("arity").get<std::size_t>()});
    for (const auto& f : j.value("functions", Json::array()))
        sig.functions.push_back({f.at("name").get<std::string>(), f.at("arity").get<std::size_t>()});
    for (const auto& c : j.value("constants", Json::array()))
        sig.constants.push_back(c.get<std::string>());
    sig.arithmetic_base = j.value("arithmetic_base", false);
    sig.validate();
    return sig;
}

Json structure_to_json(const PartialStructure& s) {
    if (s.is_segment()) return Json{{"segment", s.segment_bound()}};
    Json j;
    j["domain"] = s.domain_vector();
    Json consts = Json::object();
    for (const auto& c : s.signature().constants) consts[c] = s.const_value(c);
    j["constants"] = consts;
    Json rels = Json::object();
    auto dom = s.domain_vector();
    for (const auto& r : s.signature().relations) {
        Json tuples = Json::array();
        std::vector<std::size_t> idx(r.arity, 0);
        if (!dom.empty()) {
            for (;;) {
                std::vector<Element> t(r.arity);
                for (std::size_t q = 0; q < r.arity; ++q) t[q] = dom[idx[q]];
                if (s.rel_holds(r.name, t)) tuples.push_back(t);
                std::size_t pos = r.arity;
                bool done = true;
                while (pos > 0) {
                    --pos;
                    if (++idx[pos] < dom.size()) { done = false; break; }
                    idx[pos] = 0;
                }
                if (done) break;
            }
        }
        rels[r.name] = tuples;
    }
    j["relations"] = rels;
    Json funs = Json::object();
    for (const auto& f : s.signature().functions) {
        Json graph = Json::array();
        std::vector<std::size_t> idx(f.arity, 0);
        if (!dom.empty()) {
            for (;;) {
                std::vector<Element> t(f.arity);
                for (std::size_t q = 0; q < f.arity; ++q) t[q] = dom[idx[q]];
                auto v = s.fun_value(f.name, t);
                if (v) graph.push_back(Json::array({t, *v}));
                std::size_t pos = f.arity;
                bool done = true;
                while (pos > 0) {
                    --pos;
                    if (++idx[pos] < dom.size()) { done = false; break; }
                    idx[pos] = 0;
                }
                if (done) break;
            }
        }
        funs[f.name] = graph;
    }
    j["functions"] = funs;
    return j;
}

PartialStructure structure_from_json(const Json& j, const Signature& sig) {
    if (j.contains("segment")) return PartialStructure::segment(j.at("segment").get<Element>(), sig);
    std::vector<Element> domain = j.at("domain").get<std::vector<Element>>();
    std::map<std::string, Element> consts;
    for (auto it = j.at("constants").begin(); it != j.at("constants").end(); ++it)
        consts[it.key()] = it.value().get<Element>();
    std::map<std::string, std::set<std::vector<Element>>> rels;
    if (j.contains("relations"))
        for (auto it = j.at("relations").begin(); it != j.at("relations").end(); ++it) {
            auto& set = rels[it.key()];
            for (const auto& t : it.value()) set.insert(t.get<std::vector<Element>>());
        }
    std::map<std::string, std::map<std::vector<Element>, Element>> funs;
    if (j.contains("functions"))
        for (auto it = j.at("functions").begin(); it != j.at("functions").end(); ++it) {
            auto& graph = funs[it.key()];
            for (const auto& entry : it.value())
                graph[entry.at(0).get<std::vector<Element>>()] = entry.at(1).get<Element>();
        }
    return PartialStructure::make_explicit(sig, std::move(domain), std::move(consts),
                                           std::move(rels), std::move(funs));
}

Json ln_model_to_json(const LnModel& v) {
    bool all_segments = true;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v.level(i).is_segment()) all_segments = false;
    if (all_segments) {
        std::vector<Element> segs;
        for (std::size_t i = 0; i < v.size(); ++i) segs.push_back(v.level(i).segment_bound());
        return Json{{"segments", segs}};
    }
    Json arr = Json::array();
    for (std::size_t i = 0; i < v.size(); ++i) arr.push_back(structure_to_json(v.level(i)));
    return arr;
}

LnModel ln_model_from_json(const Json& j, const Signature& sig) {
    std::vector<PartialStructure> levels;
    if (j.is_object() && j.contains("segments")) {
        for (const auto& m : j.at("segments"))
            levels.push_back(PartialStructure::segment(m.get<Element>(), sig));
    } else {
        for (const auto& s : j) levels.push_back(structure_from_json(s, sig));
    }
    return LnModel::create(std::move(levels));
}

Json verdict_to_json(const FulfillmentVerdict& v) {
    Json j;
    switch (v.truth) {
        case Truth::True: j["verdict"] = "true"; break;
        case Truth::False: j["verdict"] = "false"; break;
        case Truth::Undefined: j["verdict"] = "undefined"; break;
    }
    if (v.truth == Truth::Undefined) {
        switch (v.reason) {
            case UndefReason::NoEligibleIndex: j["reason"] = "no-eligible-index"; break;
            case UndefReason::ParameterInTopModel: j["reason"] = "parameter-in-top-model"; break;
            case UndefReason::TermUndefined: j["reason"] = "term-undefined"; break;
            case UndefReason::None: break;
        }
    }
    return j;
}

Json collapse_result_to_json(const CollapseResult& r, const CollapseReport& rep) {
    Json j;
    j["universes"] = r.universes;
    Json ren = Json::array();
    for (const auto& [from, to] : r.renaming) ren.push_back(Json::array({from, to}));
    j["renaming"] = ren;
    j["collapsed"] = ln_model_to_json(r.collapsed);
    j["renamed"] = ln_model_to_json(r.renamed);
    j["report"] = {
        {"condition1", rep.c1}, {"condition2", rep.c2}, {"condition3", rep.c3},
        {"condition4", rep.c4}, {"condition5", rep.c5}, {"violations", rep.violations},
    };
    return j;
}

Json coloring_to_json(const ChainColoring& c) {
    Json j;
    j["n"] = c.n;
    j["phi"] = render_formula(c.phi);
    j["phi_var"] = c.phi_var;
    j["r"] = c.r;
    j["N"] = c.N;
    if (std::holds_alternative<ConstantRule>(c.rule)) {
        j["rule"] = {{"kind", "constant"}, {"color", std::get<ConstantRule>(c.rule).color}};
    } else if (std::holds_alternative<MinWitnessPairRule>(c.rule)) {
        j["rule"] = {{"kind", "min-witness-pair"}};
    } else {
        j["rule"] = {{"kind", "table"}, {"table", std::get<TableRule>(c.rule).table}};
    }
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UsageError("cannot write file: " + path);
    out << content;
}

}  // namespace flab
