// JSON input/output for polygons and reports.
//
// Reading goes through nlohmann::json and validates shape, finiteness and
// counterclockwise orientation.  Writing is a small hand-rolled emitter:
// reports are part of the CLI contract and must be byte-identical across
// runs, so key order is fixed in code and every real is printed with 17
// significant digits.

#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bwstab/errors.hpp"
#include "bwstab/polygon.hpp"

namespace bwstab {

inline constexpr int kReportSchemaVersion = 1;

// 17 significant digits: enough to round-trip any double exactly.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

namespace io_detail {

inline std::string line_context(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace io_detail

// Parse {"vertices": [[x, y], ...]}.  Counterclockwise order is required on
// input (the writer normalizes, so round trips are stable); clockwise input
// is rejected rather than silently fixed.
inline ConvexPolygon parse_polygon_text(const std::string& text, const std::string& where) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(where + ": JSON parse error at " +
                          io_detail::line_context(text, e.byte ? e.byte - 1 : 0) + ": " +
                          e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw DomainError(where + ": expected an object with a \"vertices\" array");
    std::vector<Vec2> pts;
    for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw DomainError(where + ": each vertex must be a [x, y] number pair");
        const double x = v[0].get<double>(), y = v[1].get<double>();
        if (!std::isfinite(x) || !std::isfinite(y))
            throw DomainError(where + ": vertex coordinates must be finite");
        pts.push_back({x, y});
    }
    if (pts.size() < 3) throw DomainError(where + ": a polygon needs at least 3 vertices");
    double signed2 = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        signed2 += cross(pts[i], pts[(i + 1) % pts.size()]);
    if (signed2 < 0.0) throw DomainError(where + ": vertices must be in counterclockwise order");
    try {
        return ConvexPolygon(std::move(pts));
    } catch (const DomainError& e) {
        throw DomainError(where + ": " + e.what());
    }
}

inline ConvexPolygon read_polygon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_polygon_text(buf.str(), path);
}

// Minimal ordered JSON emitter.  Keys appear in call order; arrays and
// objects nest; no whitespace decisions are left to a library.
class JsonWriter {
  public:
    std::string str() const { return out_; }

    JsonWriter& begin_object() { return token("{"); }
    JsonWriter& end_object() {
        fresh_ = false;
        out_ += "}";
        return *this;
    }
    JsonWriter& begin_array() { return token("["); }
    JsonWriter& end_array() {
        fresh_ = false;
        out_ += "]";
        return *this;
    }
    JsonWriter& key(const std::string& k) {
        comma();
        out_ += "\"" + k + "\":";
        fresh_ = true;
        return *this;
    }
    JsonWriter& number(double x) { return token(fmt17(x)); }
    JsonWriter& integer(long long x) { return token(std::to_string(x)); }
    JsonWriter& boolean(bool b) { return token(b ? "true" : "false"); }
    JsonWriter& string(const std::string& s) {
        std::string esc;
        for (char c : s) {
            if (c == '"' || c == '\\') esc += '\\';
            esc += c;
        }
        return token("\"" + esc + "\"");
    }
    JsonWriter& interval(double lo, double hi) {  // certified values as [lo, hi]
        begin_array();
        number(lo);
        number(hi);
        return end_array();
    }
    JsonWriter& point(const Vec2& p) {
        begin_array();
        number(p.x);
        number(p.y);
        return end_array();
    }
    JsonWriter& points(const std::vector<Vec2>& ps) {
        begin_array();
        for (const auto& p : ps) point(p);
        return end_array();
    }

  private:
    JsonWriter& token(const std::string& t) {
        comma();
        out_ += t;
        fresh_ = (t == "{" || t == "[");
        return *this;
    }
    void comma() {
        if (!fresh_ && !out_.empty()) {
            const char back = out_.back();
            if (back != '{' && back != '[' && back != ':') out_ += ",";
        }
        fresh_ = false;
    }
    std::string out_;
    bool fresh_ = true;
};

inline std::string polygon_json(const ConvexPolygon& p) {
    JsonWriter w;
    w.begin_object().key("vertices").points(p.vertices()).end_object();
    return w.str();
}

}  // namespace bwstab
