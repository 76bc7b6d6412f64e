// output.cpp: CSV and JSON emission with fixed 17-digit number formatting

#include "cavheat/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace cavheat::cli {

namespace {

std::vector<std::string> cells(const ResultRow& r)
{
    return {r.experiment,
            r.param,
            format_number(r.value),
            r.label,
            format_number(r.sigma_z),
            format_number(r.current_left),
            format_number(r.current_right),
            format_number(r.nondiagonal),
            format_number(r.coherence),
            format_number(r.ratio),
            format_number(r.forward),
            format_number(r.reverse),
            format_number(r.alpha),
            format_number(r.rectification),
            r.rectification_divergence,
            r.regime,
            format_number(r.occupation),
            format_number(r.residual)};
}

// Column indices holding text rather than numbers.
bool is_text_column(std::size_t i)
{
    return i == 0 || i == 1 || i == 3 || i == 14 || i == 15;
}

std::string json_string(const std::string& s)
{
    std::string out = "\"";
    for (const char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out + "\"";
}

std::string json_number(double v)
{
    const std::string s = format_number(v);
    return s.empty() ? "null" : s;
}

} // namespace

std::string format_number(std::optional<double> value)
{
    if (!value || !std::isfinite(*value)) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", *value);
    return buf;
}

const std::vector<std::string>& csv_columns()
{
    static const std::vector<std::string> columns{
        "experiment", "param", "value", "label", "sigma_z", "I_L",          "I_R",    "I_nd",       "I_coh",
        "I_ratio",    "I_f",   "I_r",   "alpha", "R",       "R_divergence", "regime", "occupation", "residual",
    };
    return columns;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows)
{
    const auto& columns = csv_columns();
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const ResultRow& row : rows) {
        const auto c = cells(row);
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
        out << '\n';
    }
}

void write_json(std::ostream& out, Experiment experiment, const ExperimentResult& result)
{
    const auto& columns = csv_columns();
    out << "{\n  \"experiment\": " << json_string(std::string(to_string(experiment))) << ",\n  \"rows\": [";
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        const auto c = cells(result.rows[r]);
        out << (r ? ",\n    {" : "\n    {");
        for (std::size_t i = 0; i < c.size(); ++i) {
            out << (i ? ", " : "") << json_string(columns[i]) << ": ";
            if (is_text_column(i)) {
                out << (c[i].empty() && i != 0 && i != 1 ? "null" : json_string(c[i]));
            } else {
                out << (c[i].empty() ? "null" : c[i]);
            }
        }
        out << '}';
    }
    out << (result.rows.empty() ? "]" : "\n  ]");
    if (result.crosscheck) {
        const CrosscheckReport& x = *result.crosscheck;
        out << ",\n  \"crosscheck\": {\n    \"pass\": " << (x.pass ? "true" : "false")
            << ",\n    \"max_deviation\": " << json_number(x.max_deviation) << ",\n    \"pairs\": [";
        for (std::size_t i = 0; i < x.pairs.size(); ++i) {
            const PairDeviation& p = x.pairs[i];
            out << (i ? ",\n      {" : "\n      {") << "\"first\": " << json_string(p.first)
                << ", \"second\": " << json_string(p.second) << ", \"deviation\": " << json_number(p.deviation)
                << ", \"difference\": " << json_number(p.difference) << ", \"tolerance\": " << json_number(p.tolerance)
                << ", \"floor\": " << json_number(p.floor) << ", \"pass\": " << (p.pass ? "true" : "false") << '}';
        }
        out << "\n    ]\n  }";
    }
    out << ",\n  \"warnings\": [";
    for (std::size_t i = 0; i < result.warnings.size(); ++i) {
        out << (i ? ", " : "") << json_string(result.warnings[i]);
    }
    out << "]\n}\n";
}

void write_result(const std::string& path, Format format, Experiment experiment, const ExperimentResult& result)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        if (format == Format::csv) {
            write_csv(out, result.rows);
        } else {
            write_json(out, experiment, result);
        }
        out.flush();
        if (!out) throw IoError("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move output into '" + path + "'");
    }
}

} // namespace cavheat::cli
