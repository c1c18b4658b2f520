#pragma once

// Roots of unity evaluated from exactly reduced rationals. Exponential sums
// of thousands of terms stay within ~1e-14 of exact values this way.

#include <complex>
#include <numbers>
#include <vector>

#include "kzt/arith.hpp"

namespace kzt::arith {

using cplx = std::complex<double>;

// e(num/den) = exp(2*pi*i*num/den). The fraction is reduced and folded into a
// quarter turn before any trigonometry.
inline cplx unit_root(i64 num, i64 den) {
    if (den <= 0) throw std::invalid_argument("unit_root: denominator must be positive");
    num %= den;
    if (num < 0) num += den;
    if (num == 0) return {1.0, 0.0};
    i64 g = std::gcd(num, den);
    num /= g;
    den /= g;
    i64 quad = 4 * num / den;
    i64 rem = 4 * num - quad * den;  // angle = (quad + rem/den) * pi/2
    long double theta = (std::numbers::pi_v<long double> / 2.0L) * (long double)rem / (long double)den;
    double c = double(std::cos(theta)), s = double(std::sin(theta));
    switch (quad) {
        case 0: return {c, s};
        case 1: return {-s, c};
        case 2: return {-c, -s};
        default: return {s, -c};
    }
}

// Table of e(j/n) for j = 0..n-1, filled by chunked incremental rotation with
// periodic resynchronisation so the drift stays at the eps level. Components
// are stored separately; real_only skips the imaginary half when the caller
// needs cosines alone.
struct RootTable {
    i64 n = 0;
    bool real_only = false;
    std::vector<double> re, im;

    RootTable() = default;
    explicit RootTable(i64 n_) { reset(n_); }

    void reset(i64 n_, bool real_only_ = false) {
        n = n_;
        real_only = real_only_;
        re.resize(size_t(n));
        im.resize(real_only ? 0 : size_t(n));
        const cplx step = unit_root(1, n);
        cplx cur;
        for (i64 j = 0; j < n; ++j) {
            if ((j & 255) == 0) cur = unit_root(j, n);
            else cur *= step;
            re[size_t(j)] = cur.real();
            if (!real_only) im[size_t(j)] = cur.imag();
        }
    }
    cplx operator[](i64 j) const { return {re[size_t(j)], im[size_t(j)]}; }
    double real_at(i64 j) const { return re[size_t(j)]; }
};

}  // namespace kzt::arith
