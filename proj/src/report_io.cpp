#include "tristoch/report_io.hpp"

#include <sstream>

namespace tristoch {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json cells_to_json(const std::vector<std::pair<int, int>>& cells) {
    ordered_json out = ordered_json::array();
    for (auto [i, j] : cells) out.push_back(ordered_json::array({i, j}));
    return out;
}

ordered_json cell3_to_json(const std::vector<Cell>& cells) {
    ordered_json out = ordered_json::array();
    for (const Cell& c : cells) out.push_back(ordered_json::array({c.i, c.j, c.k}));
    return out;
}

}  // namespace

std::string stage_log_to_json(const StageLog& log, const Config& config) {
    ordered_json doc;
    doc["kind"] = "stagelog";
    doc["n"] = log.n;
    doc["seed"] = log.seed;
    ordered_json plan;
    plan["k"] = log.plan.k;
    plan["p_sizes"] = log.plan.p_sizes;
    plan["q_sizes"] = log.plan.q_sizes;
    plan["p_offsets"] = log.plan.p_offsets;
    plan["q_offsets"] = log.plan.q_offsets;
    if (!log.plan.note.empty()) plan["note"] = log.plan.note;
    doc["plan"] = std::move(plan);
    ordered_json events = ordered_json::array();
    for (const StageLogEvent& event : log.events) {
        ordered_json e;
        e["stage"] = event.stage;
        e["layer"] = event.layer;
        e["choice"] = event.choice;
        if (!event.cells.empty()) e["cells"] = cells_to_json(event.cells);
        if (!event.numbers.empty()) e["numbers"] = event.numbers;
        events.push_back(std::move(e));
    }
    doc["events"] = std::move(events);
    doc["config"] = config;
    return doc.dump();
}

std::string certificate_to_json(int n, const VertexCertificate& cert, bool agree_checked,
                                bool agree, const CertificateRefs& refs, const Config& config) {
    ordered_json doc;
    doc["kind"] = "certificate";
    doc["n"] = n;
    doc["verdict"] = cert.is_vertex ? "vertex" : "not-vertex";
    doc["method"] =
        cert.method == VertexCertificate::Method::HalfGraph ? "half-graph" : "support-rank";
    if (agree_checked) doc["certifiers_agree"] = agree;
    if (!cert.odd_walks.empty()) {
        ordered_json walks = ordered_json::array();
        for (const auto& walk : cert.odd_walks) walks.push_back(cell3_to_json(walk));
        doc["odd_walks"] = std::move(walks);
    }
    if (cert.decomposition) {
        ordered_json d;
        d["a"] = refs.decomposition_a;
        d["b"] = refs.decomposition_b;
        doc["decomposition"] = std::move(d);
    }
    if (cert.kernel_direction) doc["kernel"] = refs.kernel;
    doc["config"] = config;
    return doc.dump();
}

std::string sample_manifest_to_json(int n, uint64_t seed, const std::vector<SampleRecord>& records,
                                    const std::vector<std::string>& vertex_files,
                                    const std::vector<std::string>& certificate_files,
                                    const Config& config) {
    ordered_json doc;
    doc["kind"] = "sample-manifest";
    doc["n"] = n;
    doc["seed"] = seed;
    doc["count"] = records.size();
    ordered_json samples = ordered_json::array();
    for (size_t t = 0; t < records.size(); ++t) {
        const SampleRecord& r = records[t];
        ordered_json s;
        s["seed"] = r.seed;
        s["objective_hash"] = r.objective_hash;
        s["attempts"] = r.attempts;
        s["simplex_iterations"] = r.simplex_iterations;
        s["support_size"] = r.support_size;
        s["distinct_values"] = r.distinct_values;
        if (t < vertex_files.size()) s["vertex_file"] = vertex_files[t];
        if (t < certificate_files.size()) s["certificate_file"] = certificate_files[t];
        samples.push_back(std::move(s));
    }
    doc["samples"] = std::move(samples);
    doc["config"] = config;
    return doc.dump();
}

std::string histogram_csv(const std::vector<HistogramRow>& rows, uint64_t num_samples,
                          const Config& config) {
    std::ostringstream out;
    out << "# config: " << config.dump() << "\n";
    out << "n,axis,support_size,count,num_samples\n";
    for (const HistogramRow& row : rows)
        out << row.n << ',' << axis_name(row.axis) << ',' << row.support_size << ',' << row.count
            << ',' << num_samples << "\n";
    return out.str();
}

std::string census_report_to_json(const Config& config, const ordered_json& body) {
    ordered_json doc;
    doc["kind"] = "census-report";
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    doc["config"] = config;
    return doc.dump();
}

std::string ledger_to_json(const ChoiceLedger& ledger) {
    ordered_json doc;
    doc["n"] = ledger.n;
    doc["k"] = ledger.k;
    doc["heuristic"] = true;  // o(1) terms set to zero; not a pass/fail gate
    ordered_json stages = ordered_json::array();
    for (const ChoiceLedgerEntry& entry : ledger.stages) {
        ordered_json s;
        s["name"] = entry.name;
        s["log_choices"] = entry.log_value;
        s["exponent"] = entry.exponent;
        s["asymptotic_target"] = entry.target;
        stages.push_back(std::move(s));
    }
    doc["stages"] = std::move(stages);
    doc["total_exponent"] = ledger.total_exponent;
    doc["total_target"] = ledger.total_target;
    return doc.dump();
}

}  // namespace tristoch
