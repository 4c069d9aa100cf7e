#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <variant>

#include "assetgraph/error.hpp"

namespace assetgraph {

// UTC timestamp with seconds resolution. Parses from and renders to
// ISO-8601 (YYYY-MM-DDTHH:MM:SSZ). Calendar arithmetic is done without
// the C library so results never depend on the process time zone.
struct Timestamp {
    std::int64_t epoch_seconds = 0;

    auto operator<=>(const Timestamp&) const = default;

    static constexpr std::int64_t kSecondsPerHour = 3600;

    // Days since 1970-01-01 for a proleptic Gregorian civil date.
    static std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
        y -= m <= 2;
        const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
    }

    static void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
        z += 719468;
        const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
        const unsigned doe = static_cast<unsigned>(z - era * 146097);
        const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
        const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
        const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
        const unsigned mp = (5 * doy + 2) / 153;
        d = doy - (153 * mp + 2) / 5 + 1;
        m = mp + (mp < 10 ? 3 : -9);
        y = static_cast<int>(yy + (m <= 2));
    }

    static Timestamp from_civil(int y, unsigned mo, unsigned d, unsigned h = 0,
                                unsigned mi = 0, unsigned s = 0) {
        return Timestamp{days_from_civil(y, mo, d) * 86400 +
                         static_cast<std::int64_t>(h) * 3600 + mi * 60 + s};
    }

    // Parses "YYYY-MM-DDTHH:MM:SS" with optional trailing "Z". The date-only
    // form "YYYY-MM-DD" is accepted as midnight UTC.
    static std::optional<Timestamp> parse(std::string_view text) {
        auto digits = [&](size_t pos, size_t n, int& out) {
            if (pos + n > text.size()) return false;
            int v = 0;
            for (size_t i = 0; i < n; ++i) {
                char c = text[pos + i];
                if (c < '0' || c > '9') return false;
                v = v * 10 + (c - '0');
            }
            out = v;
            return true;
        };
        int y, mo, d;
        if (!digits(0, 4, y) || text.size() < 10 || text[4] != '-' ||
            !digits(5, 2, mo) || text[7] != '-' || !digits(8, 2, d))
            return std::nullopt;
        if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
        int h = 0, mi = 0, s = 0;
        size_t rest = 10;
        if (text.size() > 10) {
            if (text[10] != 'T' && text[10] != ' ') return std::nullopt;
            if (!digits(11, 2, h) || text.size() < 19 || text[13] != ':' ||
                !digits(14, 2, mi) || text[16] != ':' || !digits(17, 2, s))
                return std::nullopt;
            if (h > 23 || mi > 59 || s > 60) return std::nullopt;
            rest = 19;
        }
        if (rest < text.size()) {
            if (!(rest + 1 == text.size() && text[rest] == 'Z')) return std::nullopt;
        }
        return from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d),
                          static_cast<unsigned>(h), static_cast<unsigned>(mi),
                          static_cast<unsigned>(s));
    }

    std::string to_iso8601() const {
        std::int64_t days = epoch_seconds / 86400;
        std::int64_t sod = epoch_seconds % 86400;
        if (sod < 0) {
            sod += 86400;
            days -= 1;
        }
        int y;
        unsigned mo, d;
        civil_from_days(days, y, mo, d);
        char buf[24];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, mo, d,
                      static_cast<long long>(sod / 3600),
                      static_cast<long long>((sod % 3600) / 60),
                      static_cast<long long>(sod % 60));
        return buf;
    }
};

// Property value: text, integer, float, boolean, or timestamp.
class Scalar {
public:
    using Storage = std::variant<std::string, std::int64_t, double, bool, Timestamp>;

    enum class Kind { Text = 0, Integer = 1, Float = 2, Boolean = 3, Time = 4 };

    Scalar() : v_(std::string{}) {}
    Scalar(std::string s) : v_(std::move(s)) {}
    Scalar(const char* s) : v_(std::string(s)) {}
    Scalar(std::int64_t i) : v_(i) {}
    Scalar(int i) : v_(static_cast<std::int64_t>(i)) {}
    Scalar(double d) : v_(d) {}
    Scalar(bool b) : v_(b) {}
    Scalar(Timestamp t) : v_(t) {}

    Kind kind() const { return static_cast<Kind>(v_.index()); }
    bool is_text() const { return kind() == Kind::Text; }
    bool is_integer() const { return kind() == Kind::Integer; }
    bool is_float() const { return kind() == Kind::Float; }
    bool is_boolean() const { return kind() == Kind::Boolean; }
    bool is_time() const { return kind() == Kind::Time; }
    bool is_numeric() const { return is_integer() || is_float(); }

    const std::string& text() const { return std::get<std::string>(v_); }
    std::int64_t integer() const { return std::get<std::int64_t>(v_); }
    double floating() const { return std::get<double>(v_); }
    bool boolean() const { return std::get<bool>(v_); }
    Timestamp time() const { return std::get<Timestamp>(v_); }

    double as_double() const {
        return is_integer() ? static_cast<double>(integer()) : floating();
    }

    bool operator==(const Scalar& o) const {
        if (is_numeric() && o.is_numeric() && kind() != o.kind())
            return as_double() == o.as_double();
        return v_ == o.v_;
    }

    // Total order used by indices and deterministic iteration: by kind tag,
    // then value. Cross-kind numeric comparison for queries lives in
    // compare() below, not here.
    bool operator<(const Scalar& o) const {
        if (v_.index() != o.v_.index()) return v_.index() < o.v_.index();
        return v_ < o.v_;
    }

    // Query comparison. Returns nullopt when the two kinds are not
    // comparable (query semantics then treat the comparison as false).
    std::optional<int> compare(const Scalar& o) const {
        if (is_numeric() && o.is_numeric()) {
            if (is_integer() && o.is_integer()) {
                auto a = integer(), b = o.integer();
                return a < b ? -1 : (a > b ? 1 : 0);
            }
            double a = as_double(), b = o.as_double();
            return a < b ? -1 : (a > b ? 1 : 0);
        }
        if (kind() != o.kind()) return std::nullopt;
        switch (kind()) {
            case Kind::Text: {
                int c = text().compare(o.text());
                return c < 0 ? -1 : (c > 0 ? 1 : 0);
            }
            case Kind::Boolean:
                return static_cast<int>(boolean()) - static_cast<int>(o.boolean());
            case Kind::Time: {
                auto a = time().epoch_seconds, b = o.time().epoch_seconds;
                return a < b ? -1 : (a > b ? 1 : 0);
            }
            default:
                return std::nullopt;
        }
    }

    static std::string render_double(double d) {
        char buf[32];
        auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), d);
        (void)ec;
        std::string s(buf, p);
        // Keep floats visually distinct from integers.
        if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
            s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
            s += ".0";
        return s;
    }

    // Plain value rendering (no quoting) for answers and tables.
    std::string render() const {
        switch (kind()) {
            case Kind::Text: return text();
            case Kind::Integer: return std::to_string(integer());
            case Kind::Float: return render_double(floating());
            case Kind::Boolean: return boolean() ? "true" : "false";
            case Kind::Time: return time().to_iso8601();
        }
        return {};
    }

private:
    Storage v_;
};

} // namespace assetgraph
