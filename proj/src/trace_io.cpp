#include "qid/trace_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qid/errors.hpp"

namespace qid {

namespace {

std::ofstream open_file(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
    if (!out) throw Error("cannot open output file '" + path.string() + "'");
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_scalar_trace_csv(const std::filesystem::path& path,
                            const std::vector<long long>& indices,
                            const std::vector<double>& trace) {
    std::ofstream out = open_file(path);
    out << "n,statistic\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const long long n = i < indices.size() ? indices[i] : static_cast<long long>(i + 1);
        out << n << "," << format_double(trace[i]) << "\n";
    }
}

void write_transform_csv(const std::filesystem::path& path,
                         const std::vector<std::pair<long long, TransformSamples>>& traces) {
    std::ofstream out = open_file(path);
    out << "n,t,re,im\n";
    for (const auto& [n, samples] : traces) {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            out << n << "," << format_double(samples.grid[i]) << ","
                << format_double(samples.values[i].real()) << ","
                << format_double(samples.values[i].imag()) << "\n";
        }
    }
}

std::string trace_file_name(const std::string& test_name) {
    std::string name;
    for (char c : test_name) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            name += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!name.empty() && name.back() != '_') {
            name += '_';
        }
    }
    while (!name.empty() && name.back() == '_') name.pop_back();
    return name + ".csv";
}

std::string render_report(const std::string& title, const ConvergenceReport& report) {
    std::ostringstream os;
    os << "qid run: " << title << "\n";
    os << "verdict: " << to_string(report.verdict) << "\n\n";
    for (const TraceCheck& t : report.tests) {
        os << "[" << to_string(t.verdict) << "] " << t.name;
        if (!t.trace.empty()) {
            os << "  last=" << format_double(t.trace.back())
               << "  threshold=" << format_double(t.threshold);
        }
        os << "\n";
        if (!t.witness.empty()) os << "    witness: " << t.witness << "\n";
    }
    if (!report.hypothesis_checks.empty()) {
        os << "\nhypothesis checks:\n";
        for (const auto& [name, value] : report.hypothesis_checks) {
            os << "  " << name << " = " << format_double(value) << "\n";
        }
    }
    if (!report.notes.empty()) {
        os << "\nnotes:\n";
        for (const std::string& note : report.notes) os << "  - " << note << "\n";
    }
    return os.str();
}

void write_run_artifacts(const std::filesystem::path& out_dir, const std::string& title,
                         const ConvergenceReport& report,
                         const std::map<std::string, std::string>& meta) {
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out = open_file(out_dir / "report.txt");
        out << render_report(title, report);
    }
    for (const TraceCheck& t : report.tests) {
        write_scalar_trace_csv(out_dir / trace_file_name(t.name), t.indices, t.trace);
    }
    nlohmann::json doc;
    doc["title"] = title;
    doc["verdict"] = to_string(report.verdict);
    for (const auto& [key, value] : meta) doc[key] = value;
    nlohmann::json hyp = nlohmann::json::object();
    for (const auto& [key, value] : report.hypothesis_checks) hyp[key] = value;
    doc["hypothesis_checks"] = hyp;
    std::ofstream out = open_file(out_dir / "meta.json");
    out << doc.dump(2) << "\n";
}

}  // namespace qid
