#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hmap {

/// Named residual norms with a pass/fail verdict: pass <=> max_abs <= tolerance.
struct ResidualReport {
    std::string name;
    double max_abs = 0.0;
    double rms = 0.0;
    long nodes = 0;
    double tolerance = 0.0;
    bool pass = false;

    /// Build a report from residual samples (pairwise-summed RMS).
    static ResidualReport from_samples(std::string name, std::span<const double> residuals,
                                       double tolerance);
};

/// Minimal indented key/value tree, the structured human-readable format used
/// by verification reports and run manifests.
///
///   name
///     key: value
///     child
///       key: value
class ReportNode {
public:
    ReportNode() = default;
    explicit ReportNode(std::string n) : name(std::move(n)) {}

    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<ReportNode> children;

    void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
    void add(const std::string& key, double value);
    void add(const std::string& key, long value);
    ReportNode& child(const std::string& n);
    const ReportNode* find(const std::string& n) const;
    const std::string* value(const std::string& key) const;

    void print(std::ostream& os, int indent = 0) const;
    std::string to_string() const;

    static ReportNode parse(std::istream& is);
    static ReportNode parse_file(const std::string& path);
};

/// Append a residual report as a child node.
void add_report(ReportNode& parent, const ResidualReport& r);

/// Read a residual report back from a tree node.
ResidualReport report_from_node(const ReportNode& n);

} // namespace hmap
