#include "levylab/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace levylab {

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    double m = std::frexp(x, &exp);            // x = m * 2^exp, |m| in [0.5, 1)
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));  // exact, <= 53 bits
    exp -= 53;
    Rational r(mant);
    if (exp > 0) {
        r *= Rational(BigInt(1) << exp);
    } else if (exp < 0) {
        r /= Rational(BigInt(1) << (-exp));
    }
    return r;
}

namespace {

bool parse_uint_digits(std::string_view s, BigInt& out) {
    if (s.empty()) return false;
    out = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        out = out * 10 + (c - '0');
    }
    return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) return std::nullopt;

    bool neg = false;
    if (s.front() == '+' || s.front() == '-') {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) return std::nullopt;

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        BigInt p, q;
        if (!parse_uint_digits(s.substr(0, slash), p)) return std::nullopt;
        if (!parse_uint_digits(s.substr(slash + 1), q)) return std::nullopt;
        if (q == 0) return std::nullopt;
        Rational r(p, q);
        return neg ? -r : r;
    }

    // decimal form: digits[.digits][e|E[sign]digits]
    std::string_view mant = s;
    long long e10 = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        mant = s.substr(0, epos);
        std::string_view es = s.substr(epos + 1);
        bool eneg = false;
        if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
            eneg = es.front() == '-';
            es.remove_prefix(1);
        }
        BigInt ev;
        if (!parse_uint_digits(es, ev) || ev > 100000) return std::nullopt;
        e10 = ev.convert_to<long long>();
        if (eneg) e10 = -e10;
    }

    std::string digits;
    long long frac_len = 0;
    if (auto dot = mant.find('.'); dot != std::string_view::npos) {
        digits = std::string(mant.substr(0, dot)) + std::string(mant.substr(dot + 1));
        frac_len = static_cast<long long>(mant.size() - dot - 1);
    } else {
        digits = std::string(mant);
    }
    BigInt num;
    if (!parse_uint_digits(digits, num)) return std::nullopt;

    Rational r(num);
    long long pow = e10 - frac_len;
    BigInt ten = 10;
    if (pow > 0) {
        r *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(pow)));
    } else if (pow < 0) {
        r /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-pow)));
    }
    return neg ? -r : r;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational rational_gcd(const Rational& a, const Rational& b) {
    using boost::multiprecision::gcd;
    if (a == 0) return boost::multiprecision::abs(b);
    if (b == 0) return boost::multiprecision::abs(a);
    // gcd(p1/q, p2/q) over the common denominator q = lcm of the two.
    BigInt q = boost::multiprecision::lcm(denominator(a), denominator(b));
    BigInt p1 = numerator(a) * (q / denominator(a));
    BigInt p2 = numerator(b) * (q / denominator(b));
    return Rational(gcd(boost::multiprecision::abs(p1), boost::multiprecision::abs(p2)), q);
}

bool is_integer(const Rational& r) { return denominator(r) == 1; }

std::string to_string(const Rational& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace levylab
