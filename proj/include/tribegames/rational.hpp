#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tribegames {

// Exact rational over int64 with __int128 intermediates. Always normalized:
// denominator > 0, gcd(num, den) == 1. Narrowing overflow throws rather than
// wrapping, so every welfare figure in this library is either exact or loud.
class Rational {
public:
    constexpr Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) {
        if (den_ == o.den_) {
            // common case in welfare sums; one gcd pass keeps terms small
            i128 n = i128(num_) + i128(o.num_);
            renorm(n, den_);
            return *this;
        }
        i128 n = i128(num_) * o.den_ + i128(o.num_) * den_;
        i128 d = i128(den_) * o.den_;
        renorm(n, d);
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        i128 n = i128(num_) * o.num_;
        i128 d = i128(den_) * o.den_;
        renorm(n, d);
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw std::domain_error("rational: division by zero");
        i128 n = i128(num_) * o.den_;
        i128 d = i128(den_) * o.num_;
        renorm(n, d);
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        // cross-multiply; denominators are positive
        i128 lhs = i128(a.num_) * b.den_;
        i128 rhs = i128(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    // "p/q", or just "p" when q == 1
    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) {
            s += '/';
            s += std::to_string(den_);
        }
        return s;
    }

    // Fixed-point decimal with `places` digits, round half away from zero.
    std::string decimal(int places = 6) const {
        i128 scale = 1;
        for (int i = 0; i < places; ++i) scale *= 10;
        i128 doubled = 2 * i128(num_ < 0 ? -num_ : num_) * scale + den_;
        i128 scaled = doubled / (2 * i128(den_));
        i128 ip = scaled / scale, fp = scaled % scale;
        std::string frac(static_cast<std::size_t>(places), '0');
        for (int i = places - 1; i >= 0; --i) {
            frac[static_cast<std::size_t>(i)] = char('0' + int(fp % 10));
            fp /= 10;
        }
        std::string s = num_ < 0 && scaled != 0 ? "-" : "";
        s += std::to_string(std::int64_t(ip));
        if (places > 0) {
            s += '.';
            s += frac;
        }
        return s;
    }

    static Rational parse(std::string_view text) {
        auto bad = [&] { throw std::invalid_argument("rational: cannot parse '" + std::string(text) + "'"); };
        if (text.empty()) bad();
        std::size_t slash = text.find('/');
        std::int64_t n = parse_int(text.substr(0, slash), bad);
        std::int64_t d = 1;
        if (slash != std::string_view::npos) d = parse_int(text.substr(slash + 1), bad);
        return Rational(n, d);
    }

private:
    using i128 = __int128;

    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("rational: zero denominator");
        renorm(i128(n), i128(d));
    }

    void renorm(i128 n, i128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (n == 0) {
            num_ = 0;
            den_ = 1;
            return;
        }
        i128 a = n < 0 ? -n : n, b = d;
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        n /= a;
        d /= a;
        constexpr i128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi) throw std::overflow_error("rational: value outside 64-bit range");
        num_ = std::int64_t(n);
        den_ = std::int64_t(d);
    }

    template <typename Fail>
    static std::int64_t parse_int(std::string_view t, Fail bad) {
        if (t.empty()) bad();
        bool neg = t[0] == '-';
        if (neg) t.remove_prefix(1);
        if (t.empty()) bad();
        i128 v = 0;
        for (char c : t) {
            if (c < '0' || c > '9') bad();
            v = v * 10 + (c - '0');
            if (v > i128(INT64_MAX) + 1) bad();
        }
        if (!neg && v > INT64_MAX) bad();
        return neg ? std::int64_t(-v) : std::int64_t(v);
    }

    std::int64_t num_;
    std::int64_t den_;
};

} // namespace tribegames
