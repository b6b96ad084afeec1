#include "curvekit/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "curvekit/errors.hpp"

namespace curvekit::io {

using nlohmann::json;

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ParseError("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out) throw ParseError("write to '" + tmp + "' failed");
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

double parse_double(std::string_view token, int line) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("bad numeric field '" + std::string(token) + "' on line " +
                         std::to_string(line));
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        const size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

struct CsvTable {
    std::vector<std::vector<double>> rows;
};

CsvTable parse_csv(const std::string& text, const std::string& expected_header) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty CSV input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != expected_header)
        throw ParseError("CSV header mismatch: expected '" + expected_header + "', got '" +
                         line + "'");
    const size_t columns = split(expected_header, ',').size();
    CsvTable table;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != columns)
            throw ParseError("expected " + std::to_string(columns) + " fields on line " +
                             std::to_string(lineno));
        std::vector<double> row(columns);
        for (size_t c = 0; c < columns; ++c) row[c] = parse_double(fields[c], lineno);
        table.rows.push_back(std::move(row));
    }
    if (table.rows.size() < 2) throw ParseError("CSV has fewer than 2 data rows");
    return table;
}

double infer_step(const std::vector<std::vector<double>>& rows) {
    return rows[1][0] - rows[0][0];
}

} // namespace

std::string curve_to_csv(const SampledCurve& curve) {
    std::string out = "s,x,y,z\n";
    for (int i = 0; i < curve.size(); ++i) {
        const Vec3& p = curve.point(i);
        out += format_double(curve.s(i));
        out += ',';
        out += format_double(p.x());
        out += ',';
        out += format_double(p.y());
        out += ',';
        out += format_double(p.z());
        out += '\n';
    }
    return out;
}

SampledCurve curve_from_csv(const std::string& text) {
    const CsvTable table = parse_csv(text, "s,x,y,z");
    const int n = static_cast<int>(table.rows.size());
    std::vector<double> s(n);
    std::vector<Vec3> p(n);
    for (int i = 0; i < n; ++i) {
        s[i] = table.rows[i][0];
        p[i] = Vec3(table.rows[i][1], table.rows[i][2], table.rows[i][3]);
    }
    return SampledCurve(infer_step(table.rows), std::move(s), std::move(p));
}

void write_curve_csv(const std::string& path, const SampledCurve& curve) {
    atomic_write(path, curve_to_csv(curve));
}

SampledCurve read_curve_csv(const std::string& path) {
    return curve_from_csv(read_file(path));
}

static const char* kApparatusHeader = "s,x,y,z,tx,ty,tz,nx,ny,nz,bx,by,bz,kappa,tau";

std::string apparatus_to_csv(const SampledCurve& curve, const FrenetApparatus& app) {
    if (curve.size() != app.size())
        throw DomainMismatch("curve and apparatus sizes differ");
    std::string out = std::string(kApparatusHeader) + "\n";
    for (int i = 0; i < app.size(); ++i) {
        const double cols[15] = {
            app.s[i],
            curve.point(i).x(), curve.point(i).y(), curve.point(i).z(),
            app.T[i].x(), app.T[i].y(), app.T[i].z(),
            app.N[i].x(), app.N[i].y(), app.N[i].z(),
            app.B[i].x(), app.B[i].y(), app.B[i].z(),
            app.kappa[i], app.tau[i]};
        for (int c = 0; c < 15; ++c) {
            if (c) out += ',';
            out += format_double(cols[c]);
        }
        out += '\n';
    }
    return out;
}

FrenetApparatus apparatus_from_csv(const std::string& text) {
    const CsvTable table = parse_csv(text, kApparatusHeader);
    const int n = static_cast<int>(table.rows.size());
    FrenetApparatus app;
    app.step = infer_step(table.rows);
    app.s.resize(n);
    app.T.resize(n);
    app.N.resize(n);
    app.B.resize(n);
    app.kappa.resize(n);
    app.tau.resize(n);
    for (int i = 0; i < n; ++i) {
        const auto& r = table.rows[i];
        app.s[i] = r[0];
        app.T[i] = Vec3(r[4], r[5], r[6]);
        app.N[i] = Vec3(r[7], r[8], r[9]);
        app.B[i] = Vec3(r[10], r[11], r[12]);
        app.kappa[i] = r[13];
        app.tau[i] = r[14];
    }
    return app;
}

void write_apparatus_csv(const std::string& path, const SampledCurve& curve,
                         const FrenetApparatus& app) {
    atomic_write(path, apparatus_to_csv(curve, app));
}

FrenetApparatus read_apparatus_csv(const std::string& path) {
    return apparatus_from_csv(read_file(path));
}

ProfileSpec profile_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("profile JSON needs a 'kind' field");
    const std::string kind = j.at("kind").get<std::string>();
    std::optional<double> step;
    if (j.contains("step")) step = j.at("step").get<double>();

    if (kind == "named") {
        if (!j.contains("family") || !j.contains("params") || !j.contains("s_max"))
            throw ParseError("named profile needs 'family', 'params' and 's_max'");
        std::map<std::string, double> params;
        for (const auto& [key, value] : j.at("params").items())
            params[key] = value.get<double>();
        return {make_named_curve(j.at("family").get<std::string>(), params,
                                 j.at("s_max").get<double>()),
                step};
    }
    if (kind == "tabulated") {
        if (!j.contains("grid") || !j.contains("kappa") || !j.contains("tau"))
            throw ParseError("tabulated profile needs 'grid', 'kappa' and 'tau'");
        const auto grid = j.at("grid").get<std::vector<double>>();
        const auto kappa = j.at("kappa").get<std::vector<double>>();
        const auto tau = j.at("tau").get<std::vector<double>>();
        return {CurvatureProfile::tabulated(grid, kappa, tau), step};
    }
    throw ParseError("unknown profile kind '" + kind + "'");
}

ProfileSpec read_profile_json(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("profile JSON: ") + e.what());
    }
    return profile_from_json(j);
}

json report_to_json(const MannheimReport& report) {
    json tol;
    tol["tol_pred"] = report.tol_pred;
    tol["tol_col"] = report.tol_col;
    json j;
    j["verdict"] = report.verdict;
    j["lambda_fit"] = report.lambda_fit;
    j["residual_max"] = report.residual_max;
    j["collinearity_max"] =
        report.collinearity_max.has_value() ? json(*report.collinearity_max) : json();
    j["epsilon"] = report.epsilon.has_value() ? json(*report.epsilon) : json();
    j["sign_convention"] =
        report.sign_convention.has_value() ? json(*report.sign_convention) : json();
    j["tolerances"] = tol;
    return j;
}

json classification_to_json(const ClassificationResult& result) {
    json j;
    j["label"] = to_string(result.label);
    j["R"] = result.big_r;
    j["theta0"] = result.theta0;
    j["fit_residual"] = result.fit_residual;
    return j;
}

namespace {

struct Panel {
    const char* name;
    int ax, ay; // coordinate indices of the projection
};

void append_polyline(std::string& svg, const SampledCurve& curve, const Panel& panel,
                     double x0, double y0, double scale, const Vec3& lo, double size,
                     const char* color) {
    const int max_points = 2000;
    const int stride = std::max(1, (curve.size() + max_points - 1) / max_points);
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1\" points=\"";
    char buf[64];
    for (int i = 0; i < curve.size(); i += stride) {
        const Vec3& p = curve.point(i);
        const double px = x0 + (p[panel.ax] - lo[panel.ax]) * scale;
        const double py = y0 + size - (p[panel.ay] - lo[panel.ay]) * scale;
        std::snprintf(buf, sizeof(buf), "%.4f,%.4f ", px, py);
        svg += buf;
    }
    svg += "\"/>\n";
}

} // namespace

std::string projection_svg(const SampledCurve& curve, const SampledCurve* overlay) {
    const double size = 360.0, margin = 20.0;
    const double width = 3 * size + 4 * margin, height = size + 2 * margin + 16.0;

    Vec3 lo = curve.point(0), hi = curve.point(0);
    auto widen = [&](const SampledCurve& c) {
        for (const auto& p : c.points()) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
    };
    widen(curve);
    if (overlay) widen(*overlay);
    const double extent = std::max({hi.x() - lo.x(), hi.y() - lo.y(), hi.z() - lo.z(), 1e-12});
    const double scale = size / extent;

    std::string svg;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  width, height, width, height);
    svg += buf;

    const Panel panels[3] = {{"xy", 0, 1}, {"xz", 0, 2}, {"yz", 1, 2}};
    for (int k = 0; k < 3; ++k) {
        const double x0 = margin + k * (size + margin);
        const double y0 = margin;
        std::snprintf(buf, sizeof(buf),
                      "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
                      "fill=\"none\" stroke=\"#999\"/>\n",
                      x0, y0, size, size);
        svg += buf;
        std::snprintf(buf, sizeof(buf),
                      "<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" "
                      "font-size=\"12\">%s</text>\n",
                      x0, y0 + size + 14.0, panels[k].name);
        svg += buf;
        append_polyline(svg, curve, panels[k], x0, y0, scale, lo, size, "#1f77b4");
        if (overlay)
            append_polyline(svg, *overlay, panels[k], x0, y0, scale, lo, size, "#d62728");
    }
    svg += "</svg>\n";
    return svg;
}

void write_projection_svg(const std::string& path, const SampledCurve& curve,
                          const SampledCurve* overlay) {
    atomic_write(path, projection_svg(curve, overlay));
}

} // namespace curvekit::io
