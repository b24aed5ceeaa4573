#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bgpl/fitness.hpp"
#include "synthetic.hpp"

namespace bgpl::fixture {

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Writes store.nt and gt.tsv for a planted fixture into dir.
void write_planted(const std::filesystem::path& dir, const synthetic::Planted& p);

/// Same ?source/?target rows on the triples, by brute-force enumeration.
bool projection_equal(const std::vector<Triple>& triples, const GraphPattern& a, const GraphPattern& b);

/// True when some pattern has the generator's canonical key, or (checked by
/// enumeration, only for patterns of at most three variables) the same projection.
bool recovers(const std::vector<Triple>& triples, const std::vector<GraphPattern>& patterns,
              const GraphPattern& generator);

}  // namespace bgpl::fixture
