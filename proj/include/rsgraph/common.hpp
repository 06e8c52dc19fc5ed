#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rsg {

using int128 = __int128;

// Shifts live on the dyadic grid k/2^20; squared radii on q/2^40. Scaling every
// comparison to these denominators keeps all lattice membership tests in exact
// integer arithmetic.
inline constexpr std::int64_t kShiftScale = std::int64_t{1} << 20;
inline constexpr std::int64_t kRadiusSqScale = std::int64_t{1} << 40;

inline constexpr std::int64_t kDefaultPointBudget = 100'000'000;
inline constexpr std::int64_t kDefaultPairBudget = 2'000'000'000;
inline constexpr std::int64_t kDefaultTripleBudget = 8'000'000;

// A configured resource cap was exceeded; the message names the bound.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; carries the 1-based offending line.
struct FormatError : std::runtime_error {
    FormatError(const std::string& msg, std::size_t line_no)
        : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    std::size_t line;
};

// Exact nonnegative-denominator rational, always reduced.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Fraction() = default;
    Fraction(std::int64_t n, std::int64_t d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Fraction: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Fraction& a, const Fraction& b) {
        return a.num == b.num && a.den == b.den;
    }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Independent per-task seed streams (trials, Monte-Carlo chunks, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) ^ splitmix64(stream * 0xd1342543de82ef95ull + 1));
}

inline std::uint64_t hash_span(const std::int64_t* p, int dim) {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(dim);
    for (int i = 0; i < dim; ++i) h = splitmix64(h ^ static_cast<std::uint64_t>(p[i]));
    return h;
}

}  // namespace rsg
