#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bgpl/fitness.hpp"

namespace bgpl {

/// Carries one message per offending row ("row 7: ...").
class GroundTruthError : public std::runtime_error {
public:
    explicit GroundTruthError(std::vector<std::string> diagnostics);

    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

/// Tab-separated source/target rows. Lines starting with `#` and blank lines
/// are skipped; `@prefix p: <iri> .` or `PREFIX p: <iri>` lines may precede
/// the first row. Cells are `<iri>`, `p:local` or a bare IRI containing "://"
/// (or starting with "urn:").
/// Every problem is collected; duplicates and an empty file are errors.
GroundTruth parse_ground_truth(std::string_view text);
GroundTruth load_ground_truth(const std::filesystem::path& path);

/// One source IRI per row in the same syntax; further columns are ignored and
/// repeated sources are dropped.
std::vector<Term> parse_sources(std::string_view text);
std::vector<Term> load_sources(const std::filesystem::path& path);

/// Writes `<s>\t<t>` rows.
std::string format_ground_truth(const GroundTruth& gt);

}  // namespace bgpl
