#pragma once

// CSV emitters for transmission matrices and current reports.

#include <filesystem>

#include "tgho/csv.hpp"
#include "tgho/landauer.hpp"

namespace tgho {

inline void write_m_matrix_csv(const TransmissionMatrix& m,
                               const std::map<std::string, std::string>& provenance,
                               const std::filesystem::path& path) {
    CsvTable csv;
    csv.header = {"l", "m", "M_lm"};
    csv.provenance = provenance;
    for (const auto& [pair, value] : m.values())
        csv.add_row({static_cast<long long>(pair.first), static_cast<long long>(pair.second),
                     value});
    csv.save(path);
}

inline void write_current_report_csv(const CurrentReport& r,
                                     const std::map<std::string, std::string>& provenance,
                                     const std::filesystem::path& path) {
    CsvTable csv;
    csv.header = {"direction", "bath", "value"};
    csv.provenance = provenance;
    for (const auto& [l, j] : r.per_bath)
        csv.add_row({std::string("forward"), std::to_string(l), j});
    for (const auto& [l, j] : r.per_bath_reverse)
        csv.add_row({std::string("reverse"), std::to_string(l), j});
    csv.add_row({std::string("forward"), std::string("total"), r.total_forward});
    if (r.total_reverse)
        csv.add_row({std::string("reverse"), std::string("total"), *r.total_reverse});
    if (r.delta) csv.add_row({std::string("both"), std::string("delta"), *r.delta});
    if (r.ratio)
        csv.add_row({std::string("both"), std::string("ratio"), *r.ratio});
    else if (r.ratio_unbounded)
        csv.add_row({std::string("both"), std::string("ratio"), std::string("unbounded")});
    csv.save(path);
}

} // namespace tgho
