#include "cmc/timestamp.hpp"

#include <charconv>
#include <numeric>

#include "cmc/error.hpp"

namespace cmc {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    std::int64_t value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw Error("malformed timestamp '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Timestamp::Timestamp(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("timestamp with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num < 0) throw Error("negative timestamp");
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Timestamp Timestamp::parse(std::string_view text) {
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        return {parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text)};
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        const auto whole = text.substr(0, dot);
        const auto frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 17) throw Error("malformed timestamp '" + std::string(text) + "'");
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        const std::int64_t w = whole.empty() ? 0 : parse_int(whole, text);
        return {w * den + parse_int(frac, text), den};
    }
    return {parse_int(text, text), 1};
}

std::string Timestamp::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace cmc
