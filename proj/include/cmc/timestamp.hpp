#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace cmc {

// Exact non-negative rational time point. Always kept in lowest terms with a
// positive denominator, so structural equality is value equality.
class Timestamp {
public:
    constexpr Timestamp() = default;
    Timestamp(std::int64_t num, std::int64_t den = 1);

    // Accepts "12", "15.5" and "31/2".
    static Timestamp parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    // "n" for integers, "n/d" otherwise. parse(to_string()) is the identity.
    std::string to_string() const;
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend bool operator==(const Timestamp&, const Timestamp&) = default;
    friend std::strong_ordering operator<=>(const Timestamp& a, const Timestamp& b) noexcept {
        const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
        const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace cmc
