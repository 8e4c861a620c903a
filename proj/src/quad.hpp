#pragma once

// Extended-precision complex arithmetic for cancellation-heavy sums.
// Uses __float128 where the compiler has it, long double otherwise.

#include <complex>

namespace capstone::detail {

#if defined(__SIZEOF_FLOAT128__)
__extension__ typedef __float128 qreal;
#else
typedef long double qreal;
#endif

struct QComplex {
    qreal re = 0;
    qreal im = 0;

    QComplex() = default;
    QComplex(qreal r, qreal i) : re(r), im(i) {}
    QComplex(std::complex<double> z) : re(z.real()), im(z.imag()) {}  // NOLINT(implicit)

    std::complex<double> to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
    double abs() const { return std::abs(to_complex()); }

    QComplex& operator+=(const QComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    QComplex& operator-=(const QComplex& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
};

inline QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
inline QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
inline QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
inline QComplex operator*(const QComplex& a, const QComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline QComplex operator/(const QComplex& a, const QComplex& b) {
    const qreal d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

}  // namespace capstone::detail
