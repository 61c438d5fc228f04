// SPDX-License-Identifier: Apache-2.0
//
// Exact scalar arithmetic: arbitrary-precision rationals and Gaussian
// rationals Q(i).  Everything in this layer is exact; no rounding ever
// happens here (floating point lives only in the numeric oracle).
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace supint {

using Rational = boost::multiprecision::mpq_rational;

inline double to_double(const Rational& r) { return r.template convert_to<double>(); }

// An element of Q(i): re + im*i with exact rational components.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(long v) : re(v), im(0) {}          // NOLINT(google-explicit-constructor)
    GaussianRational(Rational r) : re(std::move(r)), im(0) {}  // NOLINT
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_one() const { return re == 1 && im == 0; }
    bool is_real() const { return im == 0; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        // Purely real factors dominate in practice; skipping the vanishing
        // cross terms avoids most of the rational canonicalization cost.
        const bool ar = a.im.is_zero(), br = b.im.is_zero();
        if (ar && br) return {a.re * b.re, Rational(0)};
        if (ar) return {a.re * b.re, a.re * b.im};
        if (br) return {a.re * b.re, a.im * b.re};
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussianRational inverse() const {
        Rational n = re * re + im * im;
        if (n == 0) throw std::domain_error("GaussianRational: division by zero");
        return {re / n, -im / n};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        return a * b.inverse();
    }
    GaussianRational& operator+=(const GaussianRational& b) { *this = *this + b; return *this; }
    GaussianRational& operator-=(const GaussianRational& b) { *this = *this - b; return *this; }
    GaussianRational& operator*=(const GaussianRational& b) { *this = *this * b; return *this; }
    GaussianRational& operator/=(const GaussianRational& b) { *this = *this / b; return *this; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    GaussianRational pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        GaussianRational acc(1), base = *this;
        while (e > 0) {
            if (e & 1) acc *= base;
            base *= base;
            e >>= 1;
        }
        return acc;
    }

    std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }

    // Canonical text form, e.g. "3/2", "i", "-1/2*i", "1+2*i".
    std::string str() const {
        auto rat = [](const Rational& r) { return r.str(); };
        if (im == 0) return rat(re);
        std::string imag;
        if (im == 1) imag = "i";
        else if (im == -1) imag = "-i";
        else imag = rat(im) + "*i";
        if (re == 0) return imag;
        if (im > 0) return rat(re) + "+" + (im == 1 ? std::string("i") : rat(im) + "*i");
        return rat(re) + "-" + (im == -1 ? std::string("i") : rat(-im) + "*i");
    }
};

}  // namespace supint
