#include "ghabuse/time.hpp"

#include <cctype>
#include <cstdio>

#include "ghabuse/error.hpp"

namespace ghabuse {
namespace {

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const auto doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y += m <= 2;
}

class Cursor {
public:
    explicit Cursor(std::string_view s) : s_(s) {}

    int digits(std::size_t n) {
        int v = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail();
            v = v * 10 + (s_[pos_++] - '0');
        }
        return v;
    }
    void expect(char c) {
        if (pos_ >= s_.size() || s_[pos_] != c) fail();
        ++pos_;
    }
    bool accept(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool done() const { return pos_ == s_.size(); }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_digits() {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail() const {
        throw InvalidInput("malformed ISO-8601 timestamp: '" + std::string(s_) + "'");
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

UnixSeconds parse_iso8601(std::string_view text) {
    Cursor c(text);
    const int year = c.digits(4);
    c.expect('-');
    const int month = c.digits(2);
    c.expect('-');
    const int day = c.digits(2);
    if (!c.accept('T') && !c.accept(' ')) c.fail();
    const int hour = c.digits(2);
    c.expect(':');
    const int minute = c.digits(2);
    c.expect(':');
    const int second = c.digits(2);
    if (c.accept('.')) c.skip_digits();
    std::int64_t offset = 0;
    if (c.accept('Z')) {
    } else if (c.peek() == '+' || c.peek() == '-') {
        const int sign = c.accept('+') ? 1 : (c.accept('-'), -1);
        const int oh = c.digits(2);
        c.accept(':');
        const int om = c.digits(2);
        offset = sign * (oh * 3600 + om * 60);
    } else {
        c.fail();
    }
    if (!c.done() || month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
        minute > 59 || second > 60)
        c.fail();
    const std::int64_t days =
        days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    return days * kSecondsPerDay + hour * 3600 + minute * 60 + second - offset;
}

std::string format_iso8601(UnixSeconds t) {
    std::int64_t days = t / kSecondsPerDay;
    std::int64_t rem = t % kSecondsPerDay;
    if (rem < 0) {
        rem += kSecondsPerDay;
        --days;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>(rem / 60 % 60), static_cast<long long>(rem % 60));
    return buf;
}

}  // namespace ghabuse
