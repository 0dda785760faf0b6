#include "posterforge/core/rational.hpp"

#include "posterforge/core/error.hpp"

#include <charconv>
#include <limits>
#include <numeric>

namespace posterforge {
namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min() + 1) {
        throw Error(ErrorCode::ArithmeticOverflow, "rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

void normalize(i128& num, i128& den) {
    if (den == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
}

std::int64_t floor_div(std::int64_t n, std::int64_t d) {
    std::int64_t q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return q;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    i128 n = num, d = den;
    normalize(n, d);
    num_ = narrow(n);
    den_ = narrow(d);
}

std::int64_t Rational::floor() const noexcept { return floor_div(num_, den_); }

std::int64_t Rational::ceil() const noexcept { return -floor_div(-num_, den_); }

std::int64_t Rational::round_half_up() const noexcept {
    // floor(x + 1/2) == floor((2n + d) / 2d)
    i128 n = static_cast<i128>(num_) * 2 + den_;
    i128 d = static_cast<i128>(den_) * 2;
    i128 q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return static_cast<std::int64_t>(q);
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = narrow(-static_cast<i128>(num_));
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& rhs) {
    i128 n = static_cast<i128>(num_) * rhs.den_ + static_cast<i128>(rhs.num_) * den_;
    i128 d = static_cast<i128>(den_) * rhs.den_;
    normalize(n, d);
    num_ = narrow(n);
    den_ = narrow(d);
    return *this;
}

Rational& Rational::operator-=(const Rational& rhs) { return *this += -rhs; }

Rational& Rational::operator*=(const Rational& rhs) {
    i128 n = static_cast<i128>(num_) * rhs.num_;
    i128 d = static_cast<i128>(den_) * rhs.den_;
    normalize(n, d);
    num_ = narrow(n);
    den_ = narrow(d);
    return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.num_ == 0) throw Error(ErrorCode::InvalidArgument, "rational division by zero");
    i128 n = static_cast<i128>(num_) * rhs.den_;
    i128 d = static_cast<i128>(den_) * rhs.num_;
    normalize(n, d);
    num_ = narrow(n);
    den_ = narrow(d);
    return *this;
}

std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    i128 a = static_cast<i128>(lhs.num_) * rhs.den_;
    i128 b = static_cast<i128>(rhs.num_) * lhs.den_;
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

bool Rational::has_terminating_decimal() const noexcept {
    std::int64_t d = den_;
    while (d % 2 == 0) d /= 2;
    while (d % 5 == 0) d /= 5;
    return d == 1;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    if (!has_terminating_decimal()) return std::to_string(num_) + "/" + std::to_string(den_);

    // Scale to the smallest power of ten that clears the denominator.
    int digits = 0;
    i128 scale = 1;
    while (scale % den_ != 0) {
        scale *= 10;
        ++digits;
    }
    i128 scaled = static_cast<i128>(num_) * (scale / den_);
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    i128 int_part = scaled / scale;
    i128 frac_part = scaled % scale;

    std::string frac;
    for (int i = 0; i < digits; ++i) {
        frac.insert(frac.begin(), static_cast<char>('0' + static_cast<int>(frac_part % 10)));
        frac_part /= 10;
    }
    std::string out = negative ? "-" : "";
    out += std::to_string(static_cast<std::int64_t>(int_part));
    out += '.';
    out += frac;
    return out;
}

std::optional<Rational> Rational::parse(std::string_view text) {
    if (text.empty()) return std::nullopt;

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        std::int64_t n = 0, d = 0;
        auto lhs = text.substr(0, slash);
        auto rhs = text.substr(slash + 1);
        auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), n);
        auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), d);
        if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size()) return std::nullopt;
        if (r2.ec != std::errc{} || r2.ptr != rhs.data() + rhs.size() || d <= 0) return std::nullopt;
        return Rational(n, d);
    }

    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        i = 1;
    }
    i128 int_part = 0;
    i128 frac = 0;
    i128 scale = 1;
    int int_digits = 0;
    int frac_digits = 0;
    for (; i < text.size() && text[i] != '.'; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') return std::nullopt;
        int_part = int_part * 10 + (c - '0');
        if (++int_digits > 15) return std::nullopt;
    }
    if (i < text.size()) {
        ++i;  // '.'
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c < '0' || c > '9') return std::nullopt;
            frac = frac * 10 + (c - '0');
            scale *= 10;
            if (++frac_digits > 12) return std::nullopt;
        }
    }
    if (int_digits == 0 && frac_digits == 0) return std::nullopt;
    i128 n = int_part * scale + frac;
    if (negative) n = -n;
    i128 d = scale;
    normalize(n, d);
    Rational r;
    try {
        r = Rational(narrow(n), narrow(d));
    } catch (const Error&) {
        return std::nullopt;
    }
    return r;
}

Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace posterforge
