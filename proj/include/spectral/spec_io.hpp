#pragma once

// Spectrum files (JSON):
//
//   {"schema": 1, "family": "power", "a": 1, "c": 0, "alpha": 2, "q": 0, "n_start": 1}
//   {"schema": 1, "family": "multipower", "q": 0,
//    "terms": [{"a": 1, "c": 0, "alpha": 2, "n_start": 1}, ...]}
//   {"schema": 1, "family": "explicit", "levels": [1, 2, 3],
//    "tail": {"a": 1, "c": 0, "alpha": 2, "q": 0, "n_start": 4}}
//
// "schema" is optional and must be 1 when present; "name" is an optional
// label. Power fields default to a = 1, c = 0, q = 0, n_start = 1; alpha is
// required. Unknown keys are rejected. Errors name the file, the line of the
// offending key and the field.

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "spectral/error.hpp"
#include "spectral/spectrum.hpp"

namespace spectral {

namespace detail {

class SpecReader {
public:
    SpecReader(std::string origin, std::string text) : origin_(std::move(origin)), text_(std::move(text)) {}

    SpectrumSpec read() {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text_);
        } catch (const nlohmann::json::parse_error& e) {
            fail(Errc::ParseError, line_at(e.byte > 0 ? e.byte - 1 : 0), "", std::string("malformed JSON: ") + e.what());
        }
        if (!j.is_object()) fail(Errc::ParseError, 1, "", "top level must be an object");
        if (j.contains("schema")) {
            const auto& s = j["schema"];
            if (!s.is_number_integer() || s.get<long>() != 1)
                fail(Errc::ParseError, line_of("schema"), "schema", "unsupported schema version (expected 1)");
        }
        if (!j.contains("family") || !j["family"].is_string())
            fail(Errc::ParseError, line_of("family"), "family", "missing or not a string");
        const auto family = j["family"].get<std::string>();
        if (family == "power") {
            allow(j, {"schema", "name", "family", "a", "c", "alpha", "q", "n_start"}, 0);
            const auto p = power(j, 0, true);
            return SpectrumSpec::power(p);
        }
        if (family == "multipower") {
            allow(j, {"schema", "name", "family", "terms", "q"}, 0);
            if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
                fail(Errc::ParseError, line_of("terms"), "terms", "must be a non-empty array");
            MultiPowerSpec m;
            m.q = number(j, "q", 0.0, 0);
            if (m.q < 0.0) fail(Errc::InvariantViolation, line_of("q"), "q", "must be >= 0");
            std::size_t seen_alpha = 0;
            for (const auto& t : j["terms"]) {
                if (!t.is_object()) fail(Errc::ParseError, line_of("terms"), "terms", "entries must be objects");
                allow(t, {"a", "c", "alpha", "n_start"}, seen_alpha);
                const auto p = power(t, seen_alpha, false);
                m.terms.push_back({p.a, p.c, p.alpha, p.n_start});
                ++seen_alpha;
            }
            return SpectrumSpec::multipower(m);
        }
        if (family == "explicit") {
            allow(j, {"schema", "name", "family", "levels", "tail"}, 0);
            if (!j.contains("levels") || !j["levels"].is_array())
                fail(Errc::ParseError, line_of("levels"), "levels", "must be an array of numbers");
            ExplicitSpec e;
            for (const auto& v : j["levels"]) {
                if (!v.is_number()) fail(Errc::ParseError, line_of("levels"), "levels", "must be an array of numbers");
                e.levels.push_back(v.get<double>());
            }
            for (std::size_t i = 0; i < e.levels.size(); ++i) {
                if (!(e.levels[i] > 0.0))
                    fail(Errc::InvariantViolation, line_of("levels"), "levels", "levels must be positive");
                if (i > 0 && e.levels[i] < e.levels[i - 1])
                    fail(Errc::InvariantViolation, line_of("levels"), "levels", "levels must be non-decreasing");
            }
            if (j.contains("tail")) {
                const auto& t = j["tail"];
                if (!t.is_object()) fail(Errc::ParseError, line_of("tail"), "tail", "must be an object");
                allow(t, {"a", "c", "alpha", "q", "n_start"}, 0);
                e.tail = power(t, 0, true);
                if (!e.levels.empty() && e.tail->level(e.tail->n_start) < e.levels.back())
                    fail(Errc::InvariantViolation, line_of("tail"), "tail", "must start at or above the last level");
            } else if (e.levels.empty()) {
                fail(Errc::InvariantViolation, line_of("levels"), "levels", "no levels and no tail");
            }
            return SpectrumSpec::explicit_levels(e);
        }
        fail(Errc::ParseError, line_of("family"), "family", "unknown family '" + family + "'");
    }

private:
    [[noreturn]] void fail(Errc code, std::size_t line, const std::string& field, const std::string& msg) const {
        std::ostringstream os;
        os << origin_ << ":" << line << ": ";
        if (!field.empty()) os << "field '" << field << "': ";
        os << msg;
        raise(code, os.str());
    }

    std::size_t line_at(std::size_t offset) const {
        std::size_t line = 1;
        for (std::size_t i = 0; i < offset && i < text_.size(); ++i)
            if (text_[i] == '\n') ++line;
        return line;
    }

    // Line of the nth occurrence of "key" (as a JSON key), or 1.
    std::size_t line_of(const std::string& key, std::size_t nth = 0) const {
        const std::string needle = "\"" + key + "\"";
        std::size_t pos = 0;
        for (std::size_t k = 0;; ++k) {
            pos = text_.find(needle, pos);
            if (pos == std::string::npos) return 1;
            if (k == nth) return line_at(pos);
            pos += needle.size();
        }
    }

    void allow(const nlohmann::json& obj, std::set<std::string> keys, std::size_t nth) const {
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!keys.count(it.key())) fail(Errc::ParseError, line_of(it.key(), nth), it.key(), "unknown key");
    }

    double number(const nlohmann::json& obj, const std::string& key, double fallback, std::size_t nth) const {
        if (!obj.contains(key)) return fallback;
        if (!obj[key].is_number()) fail(Errc::ParseError, line_of(key, nth), key, "must be a number");
        return obj[key].get<double>();
    }

    PowerSpec power(const nlohmann::json& obj, std::size_t nth, bool with_q) const {
        PowerSpec p;
        if (!obj.contains("alpha")) fail(Errc::ParseError, line_of("alpha", nth), "alpha", "required");
        p.alpha = number(obj, "alpha", 1.0, nth);
        p.a = number(obj, "a", 1.0, nth);
        p.c = number(obj, "c", 0.0, nth);
        if (with_q) p.q = number(obj, "q", 0.0, nth);
        if (obj.contains("n_start")) {
            if (!obj["n_start"].is_number_integer())
                fail(Errc::ParseError, line_of("n_start", nth), "n_start", "must be an integer");
            p.n_start = obj["n_start"].get<long>();
        }
        if (!(p.a > 0.0)) fail(Errc::InvariantViolation, line_of("a", nth), "a", "must be > 0");
        if (!(p.alpha > 0.0)) fail(Errc::InvariantViolation, line_of("alpha", nth), "alpha", "must be > 0");
        if (!(p.q >= 0.0)) fail(Errc::InvariantViolation, line_of("q", nth), "q", "must be >= 0");
        if (!(static_cast<double>(p.n_start) + p.c > 0.0))
            fail(Errc::InvariantViolation, line_of(obj.contains("c") ? "c" : "n_start", nth), "c",
                 "n_start + c must be > 0");
        return p;
    }

    std::string origin_;
    std::string text_;
};

}  // namespace detail

/// Parses a spectrum from JSON text; `origin` prefixes error messages.
inline SpectrumSpec parse_spec(const std::string& text, const std::string& origin = "<spec>") {
    return detail::SpecReader(origin, text).read();
}

inline SpectrumSpec load_spec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::ParseError, path + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_spec(os.str(), path);
}

}  // namespace spectral
