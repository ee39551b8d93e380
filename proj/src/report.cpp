#include "hmap/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hmap/errors.hpp"
#include "hmap/grid.hpp"

namespace hmap {

ResidualReport ResidualReport::from_samples(std::string name, std::span<const double> residuals,
                                            double tolerance) {
    ResidualReport r;
    r.name = std::move(name);
    r.tolerance = tolerance;
    r.nodes = static_cast<long>(residuals.size());
    if (r.nodes == 0) throw EmptyFieldError(r.name + ": no valid residual samples");
    std::vector<double> sq(residuals.size());
    double mx = 0.0;
    for (size_t k = 0; k < residuals.size(); ++k) {
        const double a = std::abs(residuals[k]);
        mx = std::max(mx, a);
        sq[k] = a * a;
    }
    r.max_abs = mx;
    r.rms = std::sqrt(pairwise_sum(sq) / static_cast<double>(r.nodes));
    r.pass = (r.max_abs <= tolerance);
    return r;
}

namespace {
std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace

void ReportNode::add(const std::string& key, double value) { add(key, fmt17(value)); }
void ReportNode::add(const std::string& key, long value) { add(key, std::to_string(value)); }

ReportNode& ReportNode::child(const std::string& n) {
    children.emplace_back(n);
    return children.back();
}

const ReportNode* ReportNode::find(const std::string& n) const {
    for (const auto& c : children)
        if (c.name == n) return &c;
    return nullptr;
}

const std::string* ReportNode::value(const std::string& key) const {
    for (const auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

void ReportNode::print(std::ostream& os, int indent) const {
    const std::string pad(static_cast<size_t>(indent) * 2, ' ');
    os << pad << name << '\n';
    for (const auto& [k, v] : entries) os << pad << "  " << k << ": " << v << '\n';
    for (const auto& c : children) c.print(os, indent + 1);
}

std::string ReportNode::to_string() const {
    std::ostringstream os;
    print(os);
    return os.str();
}

ReportNode ReportNode::parse(std::istream& is) {
    struct Line {
        int depth;
        std::string text;
    };
    std::vector<Line> lines;
    std::string raw;
    while (std::getline(is, raw)) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        size_t sp = 0;
        while (sp < raw.size() && raw[sp] == ' ') ++sp;
        if (sp == raw.size()) continue;
        if (sp % 2 != 0) throw ConfigError("report parse: odd indentation");
        lines.push_back({static_cast<int>(sp / 2), raw.substr(sp)});
    }
    if (lines.empty()) throw ConfigError("report parse: empty document");
    if (lines[0].depth != 0) throw ConfigError("report parse: must start at depth 0");

    ReportNode root(lines[0].text);
    std::vector<ReportNode*> stack{&root};
    for (size_t i = 1; i < lines.size(); ++i) {
        const auto& [depth, text] = lines[i];
        if (depth < 1 || depth > static_cast<int>(stack.size()))
            throw ConfigError("report parse: bad indentation step");
        stack.resize(static_cast<size_t>(depth));
        const auto colon = text.find(": ");
        if (colon != std::string::npos) {
            stack.back()->entries.emplace_back(text.substr(0, colon), text.substr(colon + 2));
        } else {
            std::string name = text;
            if (!name.empty() && name.back() == ':') name.pop_back();
            stack.back()->children.emplace_back(name);
            stack.push_back(&stack.back()->children.back());
        }
    }
    return root;
}

ReportNode ReportNode::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open report/manifest: " + path);
    return parse(is);
}

void add_report(ReportNode& parent, const ResidualReport& r) {
    ReportNode& n = parent.child(r.name);
    n.add("max_abs", r.max_abs);
    n.add("rms", r.rms);
    n.add("nodes", r.nodes);
    n.add("tolerance", r.tolerance);
    n.add("verdict", r.pass ? std::string("pass") : std::string("fail"));
}

ResidualReport report_from_node(const ReportNode& n) {
    ResidualReport r;
    r.name = n.name;
    auto get = [&](const char* key) {
        const std::string* v = n.value(key);
        if (!v) throw ConfigError("report node missing key: " + std::string(key));
        return *v;
    };
    r.max_abs = std::stod(get("max_abs"));
    r.rms = std::stod(get("rms"));
    r.nodes = std::stol(get("nodes"));
    r.tolerance = std::stod(get("tolerance"));
    r.pass = (get("verdict") == "pass");
    return r;
}

} // namespace hmap
