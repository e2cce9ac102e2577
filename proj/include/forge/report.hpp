#pragma once

#include <string>
#include <vector>

namespace forge {

struct Finding {
    std::string check;     // which law / relation failed
    std::string location;  // level, entry, or diagram instance
    std::string detail;
};

struct Report {
    std::vector<Finding> findings;

    bool ok() const { return findings.empty(); }
    void add(std::string check, std::string location, std::string detail = "") {
        findings.push_back({std::move(check), std::move(location), std::move(detail)});
    }
    void merge(const Report& other) {
        findings.insert(findings.end(), other.findings.begin(), other.findings.end());
    }
    std::string text() const;
};

}  // namespace forge
