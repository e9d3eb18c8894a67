#pragma once

// CSV output. First line is the column header; the second line is a `#`
// provenance comment (config hash, code version, seed) that readers skip.
// Floats carry 17 significant digits so identical runs produce identical
// bytes.

#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tgho/chain.hpp"
#include "tgho/config.hpp"

namespace tgho {

using CsvCell = std::variant<long long, double, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::map<std::string, std::string> provenance;
    std::vector<std::vector<CsvCell>> rows;

    void add_row(std::vector<CsvCell> cells) { rows.push_back(std::move(cells)); }

    std::string to_string() const {
        std::string out;
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) out += ',';
            out += header[i];
        }
        out += '\n';
        if (!provenance.empty()) {
            out += '#';
            bool first = true;
            for (const auto& [k, v] : provenance) {
                out += first ? " " : " ";
                out += k + "=" + v;
                first = false;
            }
            out += '\n';
        }
        for (const auto& row : rows) {
            for (size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                std::visit(
                    [&](const auto& cell) {
                        using T = std::decay_t<decltype(cell)>;
                        if constexpr (std::is_same_v<T, double>)
                            out += format_g17(cell);
                        else if constexpr (std::is_same_v<T, long long>)
                            out += std::to_string(cell);
                        else
                            out += cell;
                    },
                    row[i]);
            }
            out += '\n';
        }
        return out;
    }

    void save(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + path.string() + "'");
        out << to_string();
    }
};

/// Provenance lines read back from a CSV file (`# key=value ...`).
inline std::map<std::string, std::string> read_csv_provenance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    std::map<std::string, std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] != '#') continue;
        std::istringstream ss(line.substr(1));
        std::string tok;
        while (ss >> tok) {
            const auto eq = tok.find('=');
            if (eq != std::string::npos) out[tok.substr(0, eq)] = tok.substr(eq + 1);
        }
    }
    return out;
}

} // namespace tgho
