#include "kslab/rational.hpp"

#include <charconv>

#include "kslab/errors.hpp"

namespace kslab {

std::string to_string(const Rat& r) {
    std::string s = std::to_string(r.numerator());
    if (r.denominator() != 1) {
        s += '/';
        s += std::to_string(r.denominator());
    }
    return s;
}

static long long parse_ll(std::string_view text, std::string_view whole) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ParseError("not a rational number: '" + std::string(whole) + "'");
    return v;
}

Rat parse_rational(std::string_view text) {
    if (text.empty()) throw ParseError("empty rational");
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rat(parse_ll(text, text));
    long long p = parse_ll(text.substr(0, slash), text);
    long long q = parse_ll(text.substr(slash + 1), text);
    if (q == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
    return Rat(p, q);
}

double to_double(const Rat& r) {
    return boost::rational_cast<double>(r);
}

} // namespace kslab
