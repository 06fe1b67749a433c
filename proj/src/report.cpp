#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "boundrat/harness.hpp"

namespace boundrat::harness {

void VerificationReport::add(std::vector<ParamValue> params, double lo, double hi, double bound,
                             bool row_pass) {
    ReportRow row;
    row.params = std::move(params);
    row.measured_lo = lo;
    row.measured_hi = hi;
    row.bound = bound;
    double mid = 0.5 * (lo + hi);
    row.ratio = bound != 0.0 ? mid / bound : 0.0;
    if (!std::isfinite(row.ratio)) row.ratio = 0.0;
    row.pass = row_pass;
    pass = pass && row_pass;
    rows.push_back(std::move(row));
}

void VerificationReport::sort_rows() {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ReportRow& a, const ReportRow& b) { return a.params < b.params; });
}

ReportFormat parse_format(const std::string& name) {
    if (name == "csv") return ReportFormat::csv;
    if (name == "jsonl" || name == "json-lines") return ReportFormat::jsonl;
    if (name == "human") return ReportFormat::human;
    throw std::invalid_argument("unknown report format: " + name);
}

namespace {

std::string number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string text(const ParamValue& v) {
    if (auto i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
    if (auto d = std::get_if<double>(&v)) return number(*d);
    return std::get<std::string>(v);
}

const char* kValueColumns[] = {"measured_lo", "measured_hi", "bound", "ratio", "pass"};

std::vector<std::string> cells(const ReportRow& row) {
    std::vector<std::string> out;
    for (const auto& p : row.params) out.push_back(text(p));
    out.push_back(number(row.measured_lo));
    out.push_back(number(row.measured_hi));
    out.push_back(number(row.bound));
    out.push_back(number(row.ratio));
    out.push_back(row.pass ? "true" : "false");
    return out;
}

std::vector<std::string> header(const VerificationReport& report) {
    std::vector<std::string> out = report.param_names;
    out.insert(out.end(), std::begin(kValueColumns), std::end(kValueColumns));
    return out;
}

std::string csv(const VerificationReport& report) {
    std::string out;
    auto line = [&out](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    };
    line(header(report));
    for (const auto& row : report.rows) line(cells(row));
    return out;
}

std::string jsonl(const VerificationReport& report) {
    std::string out;
    for (const auto& row : report.rows) {
        nlohmann::ordered_json j;
        j["theorem"] = report.theorem_id;
        for (std::size_t i = 0; i < report.param_names.size(); ++i) {
            const auto& p = row.params.at(i);
            if (auto v = std::get_if<std::int64_t>(&p)) j[report.param_names[i]] = *v;
            else if (auto d = std::get_if<double>(&p)) j[report.param_names[i]] = *d;
            else j[report.param_names[i]] = std::get<std::string>(p);
        }
        j["measured_lo"] = row.measured_lo;
        j["measured_hi"] = row.measured_hi;
        j["bound"] = row.bound;
        j["ratio"] = row.ratio;
        j["pass"] = row.pass;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::string human(const VerificationReport& report) {
    std::vector<std::vector<std::string>> table{header(report)};
    for (const auto& row : report.rows) table.push_back(cells(row));
    std::vector<std::size_t> width(table.front().size(), 0);
    for (const auto& r : table)
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    std::ostringstream os;
    os << report.theorem_id << " (seed " << report.seed << ")\n";
    for (const auto& r : table) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << "  ";
            os << r[i] << std::string(width[i] - r[i].size(), ' ');
        }
        os << '\n';
    }
    std::size_t passed = std::count_if(report.rows.begin(), report.rows.end(),
                                       [](const ReportRow& r) { return r.pass; });
    os << (report.pass ? "PASS" : "FAIL") << ' ' << passed << '/' << report.rows.size() << " rows\n";
    return os.str();
}

}  // namespace

std::string emit_report(const VerificationReport& report, ReportFormat format) {
    switch (format) {
        case ReportFormat::csv: return csv(report);
        case ReportFormat::jsonl: return jsonl(report);
        case ReportFormat::human: return human(report);
    }
    return {};
}

void write_report(const VerificationReport& report, ReportFormat format, const std::string& path) {
    std::string body = emit_report(report, format);
    if (path.empty() || path == "-") {
        std::cout << body << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report to " + path);
    out << body;
    out.flush();
    if (!out) throw std::runtime_error("failed writing report to " + path);
}

}  // namespace boundrat::harness
