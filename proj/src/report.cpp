#include "epicast/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "epicast/csv.hpp"
#include "epicast/error.hpp"

namespace epicast {

namespace {

std::string real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fixed2(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

double to_real(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(where + ": bad number '" + s + "'");
    }
}

std::int64_t to_int(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(where + ": bad integer '" + s + "'");
    }
}

}  // namespace

std::string to_string(ReportFormat f) {
    switch (f) {
        case ReportFormat::csv: return "csv";
        case ReportFormat::json: return "json";
        case ReportFormat::svg: return "svg";
    }
    return "csv";
}

ReportFormat parse_report_format(const std::string& s) {
    if (s == "csv") return ReportFormat::csv;
    if (s == "json") return ReportFormat::json;
    if (s == "svg") return ReportFormat::svg;
    throw ValidationError("unknown report format '" + s + "' (expected csv, json or svg)");
}

std::string records_csv(const std::vector<ForecastRecord>& records, const std::string& config_hash) {
    std::ostringstream out;
    out << kRecordCsvHeader << '\n';
    for (const auto& r : records) {
        out << r.origin_date.iso() << ',' << r.horizon_step << ',' << r.y_true << ',' << real(r.mu) << ','
            << r.q05 << ',' << r.q50 << ',' << r.q95 << ',' << to_string(r.family) << ','
            << real(r.n_dispersion) << ',' << real(r.p_success) << ',' << real(r.crps) << ','
            << real(r.impact) << ',' << real(r.confidence) << ',' << real(r.uncertainty) << ','
            << real(r.volatility) << ',' << to_string(r.status) << ',' << r.interpreter_attempts << ','
            << r.forecaster_attempts << ',' << config_hash << '\n';
    }
    return out.str();
}

std::vector<ForecastRecord> parse_records_csv(const std::string& text, const std::string& source) {
    std::vector<std::string> columns;
    std::stringstream header(kRecordCsvHeader);
    for (std::string c; std::getline(header, c, ',');) columns.push_back(c);
    const auto table = parse_csv(text, columns, source);
    std::vector<ForecastRecord> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& f = table.rows[i].fields;
        const std::string where = source + ":" + std::to_string(table.rows[i].line);
        ForecastRecord r;
        r.origin_date = Date::parse(f[0]);
        r.horizon_step = static_cast<int>(to_int(f[1], where));
        r.y_true = to_int(f[2], where);
        r.mu = to_real(f[3], where);
        r.q05 = to_int(f[4], where);
        r.q50 = to_int(f[5], where);
        r.q95 = to_int(f[6], where);
        r.family = parse_distribution_family(f[7]);
        r.n_dispersion = to_real(f[8], where);
        r.p_success = to_real(f[9], where);
        r.crps = to_real(f[10], where);
        r.impact = to_real(f[11], where);
        r.confidence = to_real(f[12], where);
        r.uncertainty = to_real(f[13], where);
        r.volatility = to_real(f[14], where);
        if (f[15] == "ok") {
            r.status = RecordStatus::ok;
        } else if (f[15] == "invalid_origin") {
            r.status = RecordStatus::invalid_origin;
        } else {
            throw ValidationError(where + ": bad status '" + f[15] + "'");
        }
        r.interpreter_attempts = static_cast<int>(to_int(f[16], where));
        r.forecaster_attempts = static_cast<int>(to_int(f[17], where));
        out.push_back(r);
    }
    return out;
}

std::vector<ForecastRecord> load_records_csv(const std::string& path) {
    return parse_records_csv(read_text_file(path), path);
}

std::string summary_json(const MetricsSummary& s, const std::string& config_hash,
                         const nlohmann::json& header) {
    nlohmann::json j = {
        {"mae", s.mae},
        {"rmse", s.rmse},
        {"crps", s.crps},
        {"coverage90", s.coverage90},
        {"mae_raw_mean", s.mae_raw_mean},
        {"n_origins", s.n_origins},
        {"n_excluded", s.n_excluded},
        {"config_hash", config_hash},
        {"header", header},
    };
    return j.dump(2) + "\n";
}

std::string trajectory_svg(const std::vector<ForecastRecord>& records, const std::string& config_hash,
                           const std::string& title) {
    constexpr double kWidth = 900, kHeight = 420;
    constexpr double kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    std::vector<const ForecastRecord*> pts;
    for (const auto& r : records) {
        if (r.ok() && r.horizon_step == 1) pts.push_back(&r);
    }
    double y_max = 1.0;
    for (const auto* r : pts) {
        y_max = std::max({y_max, static_cast<double>(r->y_true), static_cast<double>(r->q95),
                          static_cast<double>(r->q50)});
    }
    y_max *= 1.1;
    const double y0 = kTop + plot_h;
    auto px = [&](std::size_t i) {
        return pts.size() <= 1 ? kLeft + plot_w / 2 : kLeft + plot_w * static_cast<double>(i) / (pts.size() - 1);
    };
    auto py = [&](double v) { return y0 - plot_h * std::max(0.0, v) / y_max; };

    std::ostringstream out;
    out << R"(<svg xmlns="http://www.w3.org/2000/svg" width=")" << kWidth << R"(" height=")" << kHeight
        << R"(" viewBox="0 0 )" << kWidth << ' ' << kHeight << R"(">)" << '\n';
    out << "<title>" << xml_escape(title) << "</title>\n";
    out << "<desc>config_hash=" << config_hash << "</desc>\n";
    out << R"(<rect x="0" y="0" width=")" << kWidth << R"(" height=")" << kHeight << R"(" fill="white"/>)" << '\n';
    out << R"(<line class="baseline" x1=")" << kLeft << R"(" y1=")" << fixed2(y0) << R"(" x2=")"
        << kLeft + plot_w << R"(" y2=")" << fixed2(y0) << R"(" stroke="black"/>)" << '\n';
    out << R"(<line class="yaxis" x1=")" << kLeft << R"(" y1=")" << kTop << R"(" x2=")" << kLeft
        << R"(" y2=")" << fixed2(y0) << R"(" stroke="black"/>)" << '\n';
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = y_max * tick / 4.0;
        out << R"(<text x=")" << kLeft - 8 << R"(" y=")" << fixed2(py(v) + 4)
            << R"(" font-size="11" text-anchor="end">)" << fixed2(v) << "</text>\n";
    }

    if (!pts.empty()) {
        out << R"(<path class="band" fill="#4c78a8" fill-opacity="0.25" stroke="none" d=")";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            out << (i == 0 ? "M" : " L") << fixed2(px(i)) << ',' << fixed2(py(static_cast<double>(pts[i]->q95)));
        }
        for (std::size_t i = pts.size(); i-- > 0;) {
            out << " L" << fixed2(px(i)) << ',' << fixed2(py(static_cast<double>(pts[i]->q05)));
        }
        out << " Z\"/>\n";

        auto polyline = [&](const char* cls, const char* colour, auto value) {
            out << R"(<polyline class=")" << cls << R"(" fill="none" stroke=")" << colour
                << R"(" stroke-width="2" points=")";
            for (std::size_t i = 0; i < pts.size(); ++i) {
                out << (i == 0 ? "" : " ") << fixed2(px(i)) << ',' << fixed2(py(value(*pts[i])));
            }
            out << "\"/>\n";
        };
        polyline("truth", "black", [](const ForecastRecord& r) { return static_cast<double>(r.y_true); });
        polyline("q50", "#4c78a8", [](const ForecastRecord& r) { return static_cast<double>(r.q50); });

        const Date first = pts.front()->origin_date.plus_days(7);
        const Date last = pts.back()->origin_date.plus_days(7);
        out << R"(<text x=")" << kLeft << R"(" y=")" << kHeight - 15 << R"(" font-size="11">)" << first.iso()
            << "</text>\n";
        out << R"(<text x=")" << kLeft + plot_w << R"(" y=")" << kHeight - 15
            << R"(" font-size="11" text-anchor="end">)" << last.iso() << "</text>\n";
    }
    out << R"(<text x=")" << kLeft << R"(" y="24" font-size="14">)" << xml_escape(title) << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::error_code ec;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    if (ec) throw IoError(path, "cannot create directory: " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path, "cannot open for writing");
    out << content;
    out.close();
    if (!out) throw IoError(path, "write failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path, "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace epicast
