#pragma once

#include <string>
#include <vector>

namespace tlj {

struct Violation {
    std::string code;
    std::vector<std::string> ids;
    std::string message;
};

/// Report-style result for structural and numerical checks. A failed check
/// produces violations rather than throwing; warnings never affect ok().
struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<Violation> warnings;

    bool ok() const { return violations.empty(); }

    void fail(std::string code, std::vector<std::string> ids, std::string message) {
        violations.push_back({std::move(code), std::move(ids), std::move(message)});
    }
    void warn(std::string code, std::vector<std::string> ids, std::string message) {
        warnings.push_back({std::move(code), std::move(ids), std::move(message)});
    }
};

} // namespace tlj
