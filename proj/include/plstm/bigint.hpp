#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "plstm/common.hpp"

namespace plstm {

// Arbitrary-precision unsigned integer, base 2^32 limbs, little-endian.
// Supports exactly what the combinatorial oracles need: addition, comparison,
// conversion to double / log2 / decimal string.
class BigUint {
  public:
    BigUint() = default;
    BigUint(std::uint64_t v) {  // NOLINT(google-explicit-constructor)
        if (v != 0) {
            limbs_.push_back(static_cast<std::uint32_t>(v & 0xffffffffULL));
            if (v >> 32) limbs_.push_back(static_cast<std::uint32_t>(v >> 32));
        }
    }

    bool is_zero() const { return limbs_.empty(); }

    friend BigUint operator+(const BigUint& a, const BigUint& b) {
        BigUint r;
        const std::size_t n = std::max(a.limbs_.size(), b.limbs_.size());
        r.limbs_.reserve(n + 1);
        std::uint64_t carry = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t s = carry;
            if (i < a.limbs_.size()) s += a.limbs_[i];
            if (i < b.limbs_.size()) s += b.limbs_[i];
            r.limbs_.push_back(static_cast<std::uint32_t>(s & 0xffffffffULL));
            carry = s >> 32;
        }
        if (carry) r.limbs_.push_back(static_cast<std::uint32_t>(carry));
        return r;
    }

    BigUint& operator+=(const BigUint& b) { return *this = *this + b; }

    friend bool operator==(const BigUint& a, const BigUint& b) { return a.limbs_ == b.limbs_; }
    friend bool operator!=(const BigUint& a, const BigUint& b) { return !(a == b); }

    // Exact when the value fits in 53 bits, correctly rounded otherwise.
    double to_double() const {
        double r = 0.0;
        for (std::size_t i = limbs_.size(); i-- > 0;) r = r * 4294967296.0 + limbs_[i];
        return r;
    }

    // Natural log; valid for values far beyond double range.
    double log() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        // Top 96 bits give ~64 significant bits of mantissa.
        const std::size_t n = limbs_.size();
        double top = limbs_[n - 1];
        if (n >= 2) top = top * 4294967296.0 + limbs_[n - 2];
        if (n >= 3) top += limbs_[n - 3] / 4294967296.0;
        const double shift = n >= 2 ? 32.0 * static_cast<double>(n - 2) : 0.0;
        return std::log(top) + shift * 0.6931471805599453094172321;
    }

    bool fits_u64() const { return limbs_.size() <= 2; }

    std::uint64_t to_u64() const {
        if (!fits_u64()) throw RangeError("BigUint value exceeds 64 bits");
        std::uint64_t v = 0;
        if (limbs_.size() >= 2) v = static_cast<std::uint64_t>(limbs_[1]) << 32;
        if (!limbs_.empty()) v |= limbs_[0];
        return v;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<std::uint32_t> work(limbs_);
        std::string out;
        while (!work.empty()) {
            // Divide by 1e9, collecting the remainder as one decimal chunk.
            std::uint64_t rem = 0;
            for (std::size_t i = work.size(); i-- > 0;) {
                std::uint64_t cur = (rem << 32) | work[i];
                work[i] = static_cast<std::uint32_t>(cur / 1000000000ULL);
                rem = cur % 1000000000ULL;
            }
            while (!work.empty() && work.back() == 0) work.pop_back();
            std::string chunk = std::to_string(rem);
            if (!work.empty()) chunk = std::string(9 - chunk.size(), '0') + chunk;
            out = chunk + out;
        }
        return out;
    }

  private:
    std::vector<std::uint32_t> limbs_;
};

// One row of Pascal's triangle: binomial(n, k) for k in [0, n], exact.
inline std::vector<BigUint> binomial_row(int n) {
    if (n < 0) throw RangeError("binomial_row: n must be >= 0");
    std::vector<BigUint> row{BigUint(1)};
    for (int i = 1; i <= n; ++i) {
        std::vector<BigUint> next(static_cast<std::size_t>(i) + 1);
        next[0] = BigUint(1);
        next[static_cast<std::size_t>(i)] = BigUint(1);
        for (int k = 1; k < i; ++k)
            next[static_cast<std::size_t>(k)] =
                row[static_cast<std::size_t>(k - 1)] + row[static_cast<std::size_t>(k)];
        row = std::move(next);
    }
    return row;
}

inline BigUint binomial_exact(int n, int k) {
    if (n < 0 || k < 0) throw RangeError("binomial_exact: negative argument");
    if (k > n) return BigUint(0);
    return binomial_row(n)[static_cast<std::size_t>(k)];
}

}  // namespace plstm
