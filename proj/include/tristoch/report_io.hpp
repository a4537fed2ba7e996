#ifndef TRISTOCH_REPORT_IO_HPP
#define TRISTOCH_REPORT_IO_HPP

#include <json.hpp>
#include <string>

#include "tristoch/census.hpp"
#include "tristoch/certify.hpp"
#include "tristoch/construct.hpp"
#include "tristoch/lp.hpp"

namespace tristoch {

using Config = nlohmann::ordered_json;

// Emission helpers for the run artifacts. Every document embeds the
// effective run config; serialization is byte-deterministic so identical
// (n, seed, config) runs reproduce identical files.

std::string stage_log_to_json(const StageLog& log, const Config& config);

struct CertificateRefs {
    std::string decomposition_a;  // file paths, empty when absent
    std::string decomposition_b;
    std::string kernel;
};
std::string certificate_to_json(int n, const VertexCertificate& cert, bool agree_checked,
                                bool agree, const CertificateRefs& refs, const Config& config);

std::string sample_manifest_to_json(int n, uint64_t seed, const std::vector<SampleRecord>& records,
                                    const std::vector<std::string>& vertex_files,
                                    const std::vector<std::string>& certificate_files,
                                    const Config& config);

// CSV with a leading "# config:" comment line; columns
// n,axis,support_size,count,num_samples.
std::string histogram_csv(const std::vector<HistogramRow>& rows, uint64_t num_samples,
                          const Config& config);

std::string census_report_to_json(const Config& config, const nlohmann::ordered_json& body);

std::string ledger_to_json(const ChoiceLedger& ledger);

}  // namespace tristoch

#endif
