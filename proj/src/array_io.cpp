#include "tristoch/array_io.hpp"

#include <json.hpp>

namespace tristoch {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string serialize(const Cube& cube) {
    ordered_json doc;
    doc["n"] = cube.n();
    json entries = json::array();
    for (const auto& [key, v] : cube.entries()) {
        Cell c = cell_from_key(cube.n(), key);
        entries.push_back(json::array({c.i, c.j, c.k, rat_to_string(v)}));
    }
    doc["entries"] = std::move(entries);
    return doc.dump();
}

std::string serialize(const HalfArray& h) {
    ordered_json doc;
    doc["n"] = h.n();
    json cells = json::array();
    for (uint32_t key : h.support_keys()) {
        Cell c = cell_from_key(h.n(), key);
        cells.push_back(json::array({c.i, c.j, c.k}));
    }
    doc["half_cells"] = std::move(cells);
    return doc.dump();
}

namespace {

json parse_doc(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("malformed JSON");
    if (!doc.is_object()) throw ParseError("array file must be a JSON object");
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw ParseError("array file missing integer field 'n'");
    return doc;
}

Cell parse_cell_triple(const json& item, int n) {
    if (!item.is_array() || item.size() < 3) throw ParseError("cell must be [i, j, k]");
    for (int t = 0; t < 3; ++t)
        if (!item[t].is_number_integer()) throw ParseError("cell indices must be integers");
    Cell c{item[0].get<int>(), item[1].get<int>(), item[2].get<int>()};
    if (c.i < 1 || c.i > n || c.j < 1 || c.j > n || c.k < 1 || c.k > n)
        throw ParseError("cell (" + std::to_string(c.i) + "," + std::to_string(c.j) + "," +
                         std::to_string(c.k) + ") inconsistent with n=" + std::to_string(n));
    return c;
}

}  // namespace

Cube parse_cube(const std::string& text) {
    json doc = parse_doc(text);
    int n = doc["n"].get<int>();
    if (n < 1) throw ParseError("n must be >= 1");
    if (!doc.contains("entries") || !doc["entries"].is_array())
        throw ParseError("cube file missing 'entries' array");
    std::vector<std::pair<uint32_t, Rational>> entries;
    for (const json& item : doc["entries"]) {
        Cell c = parse_cell_triple(item, n);
        if (item.size() != 4 || !item[3].is_string())
            throw ParseError("cube entry must be [i, j, k, \"p/q\"]");
        Rational v;
        try {
            v = parse_rational(item[3].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
        entries.emplace_back(cell_key(n, c), std::move(v));
    }
    try {
        return Cube(n, std::move(entries));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

HalfArray parse_half_array(const std::string& text) {
    json doc = parse_doc(text);
    int n = doc["n"].get<int>();
    if (n < 1) throw ParseError("n must be >= 1");
    if (!doc.contains("half_cells") || !doc["half_cells"].is_array())
        throw ParseError("half-array file missing 'half_cells' array");
    std::vector<uint32_t> keys;
    for (const json& item : doc["half_cells"]) {
        if (item.is_array() && item.size() != 3) throw ParseError("half cell must be [i, j, k]");
        Cell c = parse_cell_triple(item, n);
        keys.push_back(cell_key(n, c));
    }
    try {
        return HalfArray(n, std::move(keys));
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

ArrayFileKind detect_array_kind(const std::string& text) {
    json doc = parse_doc(text);
    if (doc.contains("half_cells")) return ArrayFileKind::HalfArray;
    if (doc.contains("entries")) return ArrayFileKind::Cube;
    throw ParseError("array file has neither 'entries' nor 'half_cells'");
}

}  // namespace tristoch
