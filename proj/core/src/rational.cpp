#include "efx/rational.hpp"

#include "efx/errors.hpp"

#include <cctype>

namespace efx {

namespace {

bool allDigits(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
        if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
}

} // namespace

Value parseValue(const std::string& text) {
    std::string s = text;
    // trim
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    require(!s.empty(), "empty value literal");

    bool negative = false;
    if (s[0] == '+' || s[0] == '-') {
        negative = s[0] == '-';
        s.erase(s.begin());
    }

    Value result;
    if (auto slash = s.find('/'); slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        require(allDigits(num) && allDigits(den), "malformed rational literal: " + text);
        BigInt p(num), q(den);
        require(q != 0, "zero denominator: " + text);
        result = Value(p, q);
    } else if (auto dot = s.find('.'); dot != std::string::npos) {
        std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
        if (whole.empty()) whole = "0";
        require(allDigits(whole) && allDigits(frac), "malformed decimal literal: " + text);
        BigInt scale = 1;
        for (size_t k = 0; k < frac.size(); ++k) scale *= 10;
        result = Value(BigInt(whole) * scale + BigInt(frac), scale);
    } else {
        require(allDigits(s), "malformed value literal: " + text);
        result = Value(BigInt(s));
    }
    return negative ? Value(-result) : result;
}

std::string formatValue(const Value& v) {
    std::string num = numerator(v).str();
    if (denominator(v) == 1) return num;
    return num + "/" + denominator(v).str();
}

BigInt ceilRational(const Value& v) {
    BigInt p = numerator(v), q = denominator(v); // q > 0 canonical
    BigInt d = p / q;                            // truncates toward zero
    if (d * q != p && p > 0) ++d;
    return d;
}

} // namespace efx
