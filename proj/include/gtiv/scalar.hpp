#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gtiv {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Traits that abstract over the two arithmetic modes: exact rationals and
/// tolerance-based doubles. Every comparison in geometric predicates goes
/// through these, so the tolerance lives in exactly one place.
template <class R>
struct scalar_traits;

template <>
struct scalar_traits<Rat> {
    static constexpr bool exact = true;
    static constexpr const char* mode_name = "exact";
    static bool eq(const Rat& a, const Rat& b) { return a == b; }
    static bool le(const Rat& a, const Rat& b) { return a <= b; }
    static bool lt(const Rat& a, const Rat& b) { return a < b; }
    static bool is_zero(const Rat& a) { return a == 0; }
    static Rat from_int(long v) { return Rat(v); }
    static double to_double(const Rat& a) { return a.convert_to<double>(); }
    static BigInt floor(const Rat& a) {
        BigInt q = numerator(a) / denominator(a);
        if (numerator(a) < 0 && q * denominator(a) != numerator(a)) --q;
        return q;
    }
    static BigInt ceil(const Rat& a) { return -floor(Rat(-a)); }
    static Rat abs(const Rat& a) { return a < 0 ? Rat(-a) : a; }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static constexpr const char* mode_name = "float";
    inline static double eps = 1e-9;  // eps_geom; adjustable via the CLI --tol flag
    static bool eq(double a, double b) { return std::abs(a - b) <= eps * (1.0 + std::abs(a) + std::abs(b)); }
    static bool le(double a, double b) { return a <= b + eps * (1.0 + std::abs(a) + std::abs(b)); }
    static bool lt(double a, double b) { return a < b && !eq(a, b); }
    static bool is_zero(double a) { return std::abs(a) <= eps; }
    static double from_int(long v) { return static_cast<double>(v); }
    static double to_double(double a) { return a; }
    static double floor(double a) { return std::floor(a + eps); }
    static double ceil(double a) { return std::ceil(a - eps); }
    static double abs(double a) { return std::abs(a); }
};

template <class R>
double to_double(const R& a) { return scalar_traits<R>::to_double(a); }

/// Integer floor as a long. Throws if the value does not fit.
template <class R>
long floor_long(const R& a) {
    if constexpr (scalar_traits<R>::exact) {
        BigInt f = scalar_traits<R>::floor(a);
        if (f > std::numeric_limits<long>::max() || f < std::numeric_limits<long>::min())
            throw std::overflow_error("floor_long: value out of range");
        return f.convert_to<long>();
    } else {
        double f = scalar_traits<R>::floor(a);
        if (f > 9e18 || f < -9e18) throw std::overflow_error("floor_long: value out of range");
        return static_cast<long>(f);
    }
}

template <class R>
long ceil_long(const R& a) { return -floor_long(R(-a)); }

/// Renders a scalar in the structured-text form used by the document schema:
/// rationals as "p" or "p/q", doubles as decimal literals.
inline std::string format_scalar(const Rat& a) {
    std::ostringstream os;
    os << numerator(a);
    if (denominator(a) != 1) os << "/" << denominator(a);
    return os.str();
}

inline std::string format_scalar(double a) {
    std::ostringstream os;
    os.precision(17);
    os << a;
    std::string s = os.str();
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

struct ParsedScalar {
    Rat rational;      // valid when !is_decimal
    double value;      // always valid
    bool is_decimal;   // decimal literal seen: forces float mode
};

/// Accepts "p", "-p", "p/q" and decimal literals ("0.25", "1e-3").
inline std::optional<ParsedScalar> parse_scalar(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const bool decimal = text.find('.') != std::string::npos ||
                         text.find('e') != std::string::npos ||
                         text.find('E') != std::string::npos;
    try {
        if (decimal) {
            size_t pos = 0;
            double v = std::stod(text, &pos);
            if (pos != text.size()) return std::nullopt;
            return ParsedScalar{Rat(0), v, true};
        }
        auto slash = text.find('/');
        if (slash == std::string::npos) {
            BigInt n(text);
            Rat r(n);
            return ParsedScalar{r, r.convert_to<double>(), false};
        }
        BigInt n(text.substr(0, slash));
        BigInt d(text.substr(slash + 1));
        if (d == 0) return std::nullopt;
        Rat r(n, d);
        return ParsedScalar{r, r.convert_to<double>(), false};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace gtiv
