#pragma once

// Structured exports: partition report as JSON or text, histogram CSV.

#include <map>
#include <ostream>
#include <string>

#include <json.hpp>

#include "qse/partition.hpp"

namespace qse {

inline nlohmann::json partition_to_json(const Partition& p)
{
    nlohmann::json j;
    j["space"] = std::uint64_t(1) << p.s_width;
    j["variables"] = nlohmann::json::array();
    for (std::size_t i = 0; i < p.var_names.size(); ++i)
        j["variables"].push_back({{"name", p.var_names[i]}, {"width", p.var_widths[i]}});
    j["branches"] = nlohmann::json::array();
    for (const auto& b : p.branches) {
        nlohmann::json jb;
        jb["id"] = b.branch_id;
        jb["patterns"] = b.patterns;
        jb["size"] = b.cases.size();
        jb["cases"] = nlohmann::json::array();
        for (const auto& tc : b.cases) {
            nlohmann::json jc;
            for (std::size_t v = 0; v < p.var_names.size(); ++v)
                jc[p.var_names[v]] = tc.values[v];
            jb["cases"].push_back(std::move(jc));
        }
        j["branches"].push_back(std::move(jb));
    }
    return j;
}

inline void write_partition_text(std::ostream& os, const Partition& p)
{
    os << "input space: " << (std::uint64_t(1) << p.s_width) << " assignments\n";
    for (const auto& b : p.branches) {
        os << b.branch_id << "  pattern=";
        if (b.patterns.empty()) {
            os << "<unreachable>";
        } else {
            for (std::size_t i = 0; i < b.patterns.size(); ++i) {
                if (i) os << "|";
                os << b.patterns[i];
            }
        }
        os << "  size=" << b.cases.size() << "\n";
        for (const auto& tc : b.cases) os << "  " << to_string(tc, p.var_names) << "\n";
    }
}

// One row per outcome, "bitstring,count", sorted by bitstring.
inline void write_histogram_csv(std::ostream& os,
                                const std::map<std::string, std::uint64_t>& histogram)
{
    for (const auto& [bits, count] : histogram) os << bits << "," << count << "\n";
}

}  // namespace qse
