// JSON file formats: signatures, structures, chains, verdicts, collapse
// results, colorings and run reports. nlohmann::json keeps object keys
// sorted, so dumps are deterministic.

#ifndef FLAB_IO_HPP
#define FLAB_IO_HPP

#include "json.hpp"

#include "flab/collapse.hpp"
#include "flab/ramsey.hpp"

namespace flab {

using Json = nlohmann::json;

Json signature_to_json(const Signature& sig);
Signature signature_from_json(const Json& j);

Json structure_to_json(const PartialStructure& s);
PartialStructure structure_from_json(const Json& j, const Signature& sig);

// {"segments": [m0, …]} or an array of structure objects.
Json ln_model_to_json(const LnModel& v);
LnModel ln_model_from_json(const Json& j, const Signature& sig);

// {"verdict": "true"|"false"|"undefined"[, "reason": …]}
Json verdict_to_json(const FulfillmentVerdict& v);

Json collapse_result_to_json(const CollapseResult& r, const CollapseReport& rep);

Json coloring_to_json(const ChainColoring& c);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace flab

#endif
