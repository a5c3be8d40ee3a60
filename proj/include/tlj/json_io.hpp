#pragma once

#include "tlj/bigraph.hpp"
#include "tlj/diagram.hpp"
#include "tlj/fair_graph.hpp"
#include "tlj/solution.hpp"
#include "tlj/validation.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>

namespace tlj {

using Json = nlohmann::json;

/// Raised for malformed input documents. `code` is one of MALFORMED_JSON,
/// SCHEMA_VIOLATION, VERSION_UNSUPPORTED, KIND_MISMATCH; `path` points into
/// the document (JSON-pointer style).
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string code, std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message),
          code_(std::move(code)), path_(std::move(path)) {}
    const std::string& code() const { return code_; }
    const std::string& path() const { return path_; }

private:
    std::string code_;
    std::string path_;
};

/// Envelope for every on-disk artifact: {"kind", "version", "payload"}.
/// Unknown fields are rejected; payload structure is validated per kind.
struct Document {
    std::string kind;
    int version = 1;
    Json payload;
};

Document parse_document(const std::string& bytes);

/// Canonical bytes: sorted object keys, id-sorted arrays, shortest
/// round-trip floats. serialize(parse(.)) is the identity on canonical
/// documents.
std::string serialize_document(const Document& doc);

/// Resolves "gamma" file references relative to the referencing document.
struct LoadContext {
    std::filesystem::path directory;
};

Json gamma_payload(const BiGraph& g);
BiGraph gamma_from_payload(const Json& payload, const std::string& path);

Json fair_graph_payload(const FairGraph& l);
FairGraph fair_graph_from_payload(const Json& payload, const std::string& path,
                                  const LoadContext& ctx);

Json solution_payload(const FundamentalSolution& s);
FundamentalSolution solution_from_payload(const Json& payload, const std::string& path,
                                          const LoadContext& ctx);

Json morphism_payload(const Morphism2& m);
Morphism2 morphism_from_payload(const Json& payload, const std::string& path,
                                const LoadContext& ctx);

Json report_payload(const ValidationReport& report);

Document load_document(const std::filesystem::path& file);
void store_document(const std::filesystem::path& file, const Document& doc);

} // namespace tlj
