#include "tlj/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace tlj {

namespace {

void reject_unknown_fields(const Json& obj, const std::set<std::string>& allowed,
                           const std::string& path) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw SchemaError("SCHEMA_VIOLATION", path + "/" + key, "unknown field");
}

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object())
        throw SchemaError("SCHEMA_VIOLATION", path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw SchemaError("SCHEMA_VIOLATION", path + "/" + key, "missing field");
    return *it;
}

std::string string_field(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_string())
        throw SchemaError("SCHEMA_VIOLATION", path + "/" + key, "expected a string");
    return v.get<std::string>();
}

double number_field(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = field(obj, key, path);
    if (!v.is_number())
        throw SchemaError("SCHEMA_VIOLATION", path + "/" + key, "expected a number");
    return v.get<double>();
}

Complex complex_from(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw SchemaError("SCHEMA_VIOLATION", path, "expected [re, im]");
    return Complex(v[0].get<double>(), v[1].get<double>());
}

Json complex_to(Complex c) { return Json::array({c.real(), c.imag()}); }

} // namespace

Json gamma_payload(const BiGraph& g) {
    BiGraph c = canonical(g);
    Json payload;
    payload["vertices"] = c.vertices;
    Json edges = Json::array();
    for (const auto& e : c.edges) {
        Json je;
        je["id"] = e.id;
        je["source"] = e.source;
        je["target"] = e.target;
        je["weight"] = e.weight;
        je["dual"] = e.dual;
        edges.push_back(std::move(je));
    }
    payload["edges"] = std::move(edges);
    return payload;
}

BiGraph gamma_from_payload(const Json& payload, const std::string& path) {
    if (!payload.is_object())
        throw SchemaError("SCHEMA_VIOLATION", path, "expected an object");
    reject_unknown_fields(payload, {"vertices", "edges"}, path);
    BiGraph g;
    const Json& vertices = field(payload, "vertices", path);
    if (!vertices.is_array())
        throw SchemaError("SCHEMA_VIOLATION", path + "/vertices", "expected an array");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (!vertices[i].is_string())
            throw SchemaError("SCHEMA_VIOLATION", path + "/vertices/" + std::to_string(i),
                              "expected a string");
        g.vertices.push_back(vertices[i].get<std::string>());
    }
    const Json& edges = field(payload, "edges", path);
    if (!edges.is_array())
        throw SchemaError("SCHEMA_VIOLATION", path + "/edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string epath = path + "/edges/" + std::to_string(i);
        reject_unknown_fields(edges[i], {"id", "source", "target", "weight", "dual"}, epath);
        GammaEdge e;
        e.id = string_field(edges[i], "id", epath);
        e.source = string_field(edges[i], "source", epath);
        e.target = string_field(edges[i], "target", epath);
        e.weight = number_field(edges[i], "weight", epath);
        e.dual = string_field(edges[i], "dual", epath);
        g.edges.push_back(std::move(e));
    }
    return g;
}

namespace {

// "gamma" is either an inline payload or a string reference to a gamma
// document on disk, resolved relative to the referencing file.
BiGraphPtr gamma_ref_from(const Json& value, const std::string& path, const LoadContext& ctx) {
    if (value.is_string()) {
        std::filesystem::path file = ctx.directory / value.get<std::string>();
        Document doc = load_document(file);
        if (doc.kind != "gamma")
            throw SchemaError("KIND_MISMATCH", path,
                              "referenced file '" + value.get<std::string>() +
                                  "' is not a gamma document");
        return std::make_shared<const BiGraph>(gamma_from_payload(doc.payload, path));
    }
    return std::make_shared<const BiGraph>(gamma_from_payload(value, path));
}

} // namespace

Json fair_graph_payload(const FairGraph& l) {
    Json payload;
    payload["gamma"] = gamma_payload(*l.base);
    std::vector<FairVertex> vs = l.vertices;
    std::sort(vs.begin(), vs.end(),
              [](const FairVertex& a, const FairVertex& b) { return a.id < b.id; });
    Json vertices = Json::array();
    for (const auto& v : vs) {
        Json jv;
        jv["id"] = v.id;
        jv["pi"] = v.pi;
        vertices.push_back(std::move(jv));
    }
    payload["vertices"] = std::move(vertices);
    std::vector<FairEdge> es = l.edges;
    std::sort(es.begin(), es.end(),
              [](const FairEdge& a, const FairEdge& b) { return a.id < b.id; });
    Json edges = Json::array();
    for (const auto& e : es) {
        Json je;
        je["id"] = e.id;
        je["source"] = e.source;
        je["target"] = e.target;
        je["weight"] = e.weight;
        je["pi"] = e.pi;
        edges.push_back(std::move(je));
    }
    payload["edges"] = std::move(edges);
    return payload;
}

FairGraph fair_graph_from_payload(const Json& payload, const std::string& path,
                                  const LoadContext& ctx) {
    if (!payload.is_object())
        throw SchemaError("SCHEMA_VIOLATION", path, "expected an object");
    reject_unknown_fields(payload, {"gamma", "vertices", "edges"}, path);
    FairGraph l;
    l.base = gamma_ref_from(field(payload, "gamma", path), path + "/gamma", ctx);
    const Json& vertices = field(payload, "vertices", path);
    if (!vertices.is_array())
        throw SchemaError("SCHEMA_VIOLATION", path + "/vertices", "expected an array");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const std::string vpath = path + "/vertices/" + std::to_string(i);
        reject_unknown_fields(vertices[i], {"id", "pi"}, vpath);
        l.vertices.push_back(
            {string_field(vertices[i], "id", vpath), string_field(vertices[i], "pi", vpath)});
    }
    const Json& edges = field(payload, "edges", path);
    if (!edges.is_array())
        throw SchemaError("SCHEMA_VIOLATION", path + "/edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string epath = path + "/edges/" + std::to_string(i);
        reject_unknown_fields(edges[i], {"id", "source", "target", "weight", "pi"}, epath);
        FairEdge e;
        e.id = string_field(edges[i], "id", epath);
        e.source = string_field(edges[i], "source", epath);
        e.target = string_field(edges[i], "target", epath);
        e.weight = number_field(edges[i], "weight", epath);
        e.pi = string_field(edges[i], "pi", epath);
        l.edges.push_back(std::move(e));
    }
    return l;
}

Json solution_payload(const FundamentalSolution& s) {
    Json payload;
    payload["gamma"] = gamma_payload(*s.base);
    Json gradings = Json::object();
    for (const auto& [a, ids] : s.gradings.sets) {
        std::vector<std::string> sorted_ids = ids;
        std::sort(sorted_ids.begin(), sorted_ids.end());
        gradings[a] = sorted_ids;
    }
    payload["gradings"] = std::move(gradings);
    Json blocks = Json::array();
    for (const auto& [key, cup] : s.cups) {
        Json jb;
        jb["edge"] = key.edge;
        jb["v"] = key.v;
        jb["w"] = key.w;
        Json rows = Json::array();
        for (Eigen::Index i = 0; i < cup.rows(); ++i) {
            Json row = Json::array();
            for (Eigen::Index j = 0; j < cup.cols(); ++j) row.push_back(complex_to(cup(i, j)));
            rows.push_back(std::move(row));
        }
        jb["cup"] = std::move(rows);
        blocks.push_back(std::move(jb));
    }
    payload["blocks"] = std::move(blocks);
    return payload;
}

FundamentalSolution solution_from_payload(const Json& payload, const std::string& path,
                                          const LoadContext& ctx) {
    if (!payload.is_object())
        throw SchemaError("SCHEMA_VIOLATION", path, "expected an object");
    reject_unknown_fields(payload, {"gamma", "gradings", "blocks"}, path);
    FundamentalSolution s;
    s.base = gamma_ref_from(field(payload, "gamma", path), path + "/gamma", ctx);
    const Json& gradings = field(payload, "gradings", path);
    if (!gradings.is_object())
        throw SchemaError("SCHEMA_VIOLATION", path + "/gradings", "expected an object");
    for (const auto& [a, ids] : gradings.items()) {
        if (!ids.is_array())
            throw SchemaError("SCHEMA_VIOLATION", path + "/gradings/" + a, "expected an array");
        std::vector<std::string> list;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!ids[i].is_string())
                throw SchemaError("SCHEMA_VIOLATION",
                                  path + "/gradings/" + a + "/" + std::to_string(i),
                                  "expected a string");
            list.push_back(ids[i].get<std::string>());
        }
        s.gradings.sets[a] = std::move(list);
    }
    const Json& blocks = field(payload, "blocks", path);
    if (!blocks.is_array())
        throw SchemaError("SCHEMA_VIOLATION", path + "/blocks", "expected an array");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const std::string bpath = path + "/blocks/" + std::to_string(i);
        reject_unknown_fields(blocks[i], {"edge", "v", "w", "cup"}, bpath);
        BlockKey key{string_field(blocks[i], "edge", bpath), string_field(blocks[i], "v", bpath),
                     string_field(blocks[i], "w", bpath)};
        const Json& rows = field(blocks[i], "cup", bpath);
        if (!rows.is_array() || rows.empty())
            throw SchemaError("SCHEMA_VIOLATION", bpath + "/cup", "expected a nonempty array");
        Eigen::Index nrows = static_cast<Eigen::Index>(rows.size());
        Eigen::Index ncols = -1;
        Matrix cup;
        for (Eigen::Index r = 0; r < nrows; ++r) {
            const Json& row = rows[static_cast<std::size_t>(r)];
            if (!row.is_array() || row.empty())
                throw SchemaError("SCHEMA_VIOLATION",
                                  bpath + "/cup/" + std::to_string(r), "expected a nonempty row");
            if (ncols < 0) {
                ncols = static_cast<Eigen::Index>(row.size());
                cup.resize(nrows, ncols);
            } else if (static_cast<Eigen::Index>(row.size()) != ncols) {
                throw SchemaError("SCHEMA_VIOLATION", bpath + "/cup/" + std::to_string(r),
                                  "ragged matrix");
            }
            for (Eigen::Index c = 0; c < ncols; ++c)
                cup(r, c) = complex_from(row[static_cast<std::size_t>(c)],
                                         bpath + "/cup/" + std::to_string(r) + "/" +
                                             std::to_string(c));
        }
        if (!s.cups.emplace(key, std::move(cup)).second)
            throw SchemaError("SCHEMA_VIOLATION", bpath, "duplicate block key");
    }
    return s;
}

namespace {

Json path_to_json(const GammaPath& p) {
    Json jp;
    jp["edges"] = p.edges;
    jp["at"] = p.at;
    return jp;
}

GammaPath path_from_json(const Json& v, const std::string& path) {
    if (!v.is_object())
        throw SchemaError("SCHEMA_VIOLATION", path, "expected an object");
    reject_unknown_fields(v, {"edges", "at"}, path);
    GammaPath p;
    const Json& edges = field(v, "edges", path);
    if (!edges.is_array())
        throw SchemaError("SCHEMA_VIOLATION", path + "/edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        if (!edges[i].is_string())
            throw SchemaError("SCHEMA_VIOLATION", path + "/edges/" + std::to_string(i),
                              "expected a string");
        p.edges.push_back(edges[i].get<std::string>());
    }
    p.at = string_field(v, "at", path);
    return p;
}

Json point_to_json(Point p) {
    return Json::array({p.side == Side::Bottom ? "bottom" : "top", p.index});
}

Point point_from_json(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_string() || !v[1].is_number_integer())
        throw SchemaError("SCHEMA_VIOLATION", path, "expected [side, index]");
    std::string side = v[0].get<std::string>();
    if (side != "bottom" && side != "top")
        throw SchemaError("SCHEMA_VIOLATION", path + "/0", "side must be 'bottom' or 'top'");
    return Point{side == "bottom" ? Side::Bottom : Side::Top, v[1].get<int>()};
}

} // namespace

Json morphism_payload(const Morphism2& m) {
    Json payload;
    payload["gamma"] = gamma_payload(*m.base);
    payload["bottom"] = path_to_json(m.bottom);
    payload["top"] = path_to_json(m.top);
    Json terms = Json::array();
    for (const auto& [d, coeff] : m.terms) {
        Json jt;
        jt["coeff"] = complex_to(coeff);
        Json arcs = Json::array();
        for (const Arc& arc : d.arcs)
            arcs.push_back(Json::array({point_to_json(arc.a), point_to_json(arc.b)}));
        jt["arcs"] = std::move(arcs);
        terms.push_back(std::move(jt));
    }
    payload["terms"] = std::move(terms);
    return payload;
}

Morphism2 morphism_from_payload(const Json& payload, const std::string& path,
                                const LoadContext& ctx) {
    if (!payload.is_object())
        throw SchemaError("SCHEMA_VIOLATION", path, "expected an object");
    reject_unknown_fields(payload, {"gamma", "bottom", "top", "terms"}, path);
    Morphism2 m;
    m.base = gamma_ref_from(field(payload, "gamma", path), path + "/gamma", ctx);
    m.bottom = path_from_json(field(payload, "bottom", path), path + "/bottom");
    m.top = path_from_json(field(payload, "top", path), path + "/top");
    const Json& terms = field(payload, "terms", path);
    if (!terms.is_array())
        throw SchemaError("SCHEMA_VIOLATION", path + "/terms", "expected an array");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tpath = path + "/terms/" + std::to_string(i);
        reject_unknown_fields(terms[i], {"coeff", "arcs"}, tpath);
        Complex coeff = complex_from(field(terms[i], "coeff", tpath), tpath + "/coeff");
        Diagram d;
        d.bottom = m.bottom;
        d.top = m.top;
        const Json& arcs = field(terms[i], "arcs", tpath);
        if (!arcs.is_array())
            throw SchemaError("SCHEMA_VIOLATION", tpath + "/arcs", "expected an array");
        for (std::size_t k = 0; k < arcs.size(); ++k) {
            const std::string apath = tpath + "/arcs/" + std::to_string(k);
            const Json& pair = arcs[k];
            if (!pair.is_array() || pair.size() != 2)
                throw SchemaError("SCHEMA_VIOLATION", apath, "expected a pair of points");
            d.arcs.push_back(Arc{point_from_json(pair[0], apath + "/0"),
                                 point_from_json(pair[1], apath + "/1")});
        }
        d.canonicalize();
        if (coeff != Complex(0.0, 0.0)) {
            auto [it, fresh] = m.terms.emplace(std::move(d), coeff);
            if (!fresh) it->second += coeff;
        }
    }
    return m;
}

Json report_payload(const ValidationReport& report) {
    Json payload;
    payload["ok"] = report.ok();
    auto violation_list = [](const std::vector<Violation>& items) {
        Json list = Json::array();
        for (const auto& v : items) {
            Json jv;
            jv["code"] = v.code;
            jv["ids"] = v.ids;
            jv["message"] = v.message;
            list.push_back(std::move(jv));
        }
        return list;
    };
    payload["violations"] = violation_list(report.violations);
    payload["warnings"] = violation_list(report.warnings);
    return payload;
}

namespace {

Json sorted_by_id(Json array) {
    if (array.is_array())
        std::sort(array.begin(), array.end(), [](const Json& a, const Json& b) {
            std::string ia = a.is_object() && a.contains("id") ? a["id"].get<std::string>() : "";
            std::string ib = b.is_object() && b.contains("id") ? b["id"].get<std::string>() : "";
            return ia < ib;
        });
    return array;
}

const std::set<std::string> kKinds{"gamma", "fair_graph", "solution",
                                   "morphism2", "report", "witness"};

void validate_payload_shape(const std::string& kind, const Json& payload) {
    const std::string path = "/payload";
    const LoadContext no_refs{std::filesystem::path()};
    if (kind == "gamma") {
        gamma_from_payload(payload, path);
    } else if (kind == "fair_graph" || kind == "solution" || kind == "morphism2") {
        // Structural checks happen in the typed loaders; here only verify the
        // envelope is an object so parse stays independent of file context.
        if (!payload.is_object())
            throw SchemaError("SCHEMA_VIOLATION", path, "expected an object");
    } else if (kind == "report") {
        reject_unknown_fields(payload,
                              {"ok", "violations", "warnings", "witness", "dimensions",
                               "operator", "pairing"},
                              path);
        if (!field(payload, "ok", path).is_boolean())
            throw SchemaError("SCHEMA_VIOLATION", path + "/ok", "expected a boolean");
        for (const char* key : {"violations", "warnings"}) {
            const Json& list = field(payload, key, path);
            if (!list.is_array())
                throw SchemaError("SCHEMA_VIOLATION", path + "/" + std::string(key),
                                  "expected an array");
            for (std::size_t i = 0; i < list.size(); ++i)
                reject_unknown_fields(list[i], {"code", "ids", "message"},
                                      path + "/" + key + "/" + std::to_string(i));
        }
    } else if (kind == "witness") {
        reject_unknown_fields(payload, {"vertex_map", "edge_map", "d"}, path);
        bool has_maps = payload.contains("vertex_map") || payload.contains("edge_map");
        if (has_maps && (!payload.contains("vertex_map") || !payload.contains("edge_map")))
            throw SchemaError("SCHEMA_VIOLATION", path,
                              "vertex_map and edge_map must appear together");
        if (!has_maps && !payload.contains("d"))
            throw SchemaError("SCHEMA_VIOLATION", path, "expected an id map");
    }
}

} // namespace

Document parse_document(const std::string& bytes) {
    Json root;
    try {
        root = Json::parse(bytes);
    } catch (const Json::parse_error& e) {
        throw SchemaError("MALFORMED_JSON", "", e.what());
    }
    if (!root.is_object())
        throw SchemaError("SCHEMA_VIOLATION", "", "document must be an object");
    reject_unknown_fields(root, {"kind", "version", "payload"}, "");
    std::string kind = string_field(root, "kind", "");
    if (!kKinds.count(kind))
        throw SchemaError("SCHEMA_VIOLATION", "/kind", "unknown kind '" + kind + "'");
    const Json& version = field(root, "version", "");
    if (!version.is_number_integer())
        throw SchemaError("SCHEMA_VIOLATION", "/version", "expected an integer");
    if (version.get<int>() != 1)
        throw SchemaError("VERSION_UNSUPPORTED", "/version",
                          "unsupported version " + std::to_string(version.get<int>()));
    Document doc;
    doc.kind = kind;
    doc.version = version.get<int>();
    doc.payload = field(root, "payload", "");
    validate_payload_shape(kind, doc.payload);
    return doc;
}

std::string serialize_document(const Document& doc) {
    Json root;
    root["kind"] = doc.kind;
    root["version"] = doc.version;
    if (doc.kind == "gamma") {
        // Re-canonicalize through the typed representation.
        root["payload"] = gamma_payload(gamma_from_payload(doc.payload, "/payload"));
    } else if (doc.kind == "fair_graph") {
        LoadContext ctx{std::filesystem::path()};
        if (doc.payload.contains("gamma") && doc.payload["gamma"].is_string()) {
            // Keep file references verbatim; arrays still sort by id.
            Json payload = doc.payload;
            if (payload.contains("vertices")) payload["vertices"] = sorted_by_id(payload["vertices"]);
            if (payload.contains("edges")) payload["edges"] = sorted_by_id(payload["edges"]);
            root["payload"] = std::move(payload);
        } else {
            root["payload"] =
                fair_graph_payload(fair_graph_from_payload(doc.payload, "/payload", ctx));
        }
    } else if (doc.kind == "solution") {
        LoadContext ctx{std::filesystem::path()};
        if (doc.payload.contains("gamma") && doc.payload["gamma"].is_string())
            root["payload"] = doc.payload;
        else
            root["payload"] =
                solution_payload(solution_from_payload(doc.payload, "/payload", ctx));
    } else {
        root["payload"] = doc.payload;
    }
    return root.dump(2) + "\n";
}

Document load_document(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw SchemaError("MALFORMED_JSON", "", "cannot read '" + file.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_document(buffer.str());
}

void store_document(const std::filesystem::path& file, const Document& doc) {
    std::ofstream out(file, std::ios::binary);
    if (!out)
        throw SchemaError("MALFORMED_JSON", "", "cannot write '" + file.string() + "'");
    out << serialize_document(doc);
}

} // namespace tlj
