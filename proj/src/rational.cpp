#include "pucci/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace pucci {

Rational Rational::parse(const std::string& text) {
    const auto bad = [&]() -> ContractViolation {
        return ContractViolation("Rational::parse: cannot read '" + text + "'");
    };
    std::size_t pos = 0;
    auto skip_ws = [&]() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip_ws();
    bool neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) neg = text[pos++] == '-';
    auto digits = [&](std::int64_t& out, int& count) {
        out = 0;
        count = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (count >= 15) throw bad();  // keep within exact int64 range
            out = out * 10 + (text[pos] - '0');
            ++pos;
            ++count;
        }
    };
    std::int64_t ip = 0;
    int ic = 0;
    digits(ip, ic);
    std::int64_t num, den;
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        std::int64_t d = 0;
        int dc = 0;
        digits(d, dc);
        if (ic == 0 || dc == 0 || d == 0) throw bad();
        num = ip;
        den = d;
    } else if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::int64_t fp = 0;
        int fc = 0;
        digits(fp, fc);
        if (ic == 0 && fc == 0) throw bad();
        den = 1;
        for (int i = 0; i < fc; ++i) den *= 10;
        num = ip * den + fp;
    } else {
        if (ic == 0) throw bad();
        num = ip;
        den = 1;
    }
    skip_ws();
    if (pos != text.size()) throw bad();
    return Rational(neg ? -num : num, den);
}

}  // namespace pucci
