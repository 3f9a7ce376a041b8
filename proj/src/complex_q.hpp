#pragma once

#include <gmpxx.h>

#include <vector>

namespace bonacci::detail {

// Exact complex rational; only used for root refinement and embedding.
struct ComplexQ {
    mpq_class re;
    mpq_class im;

    ComplexQ operator+(const ComplexQ& o) const { return {re + o.re, im + o.im}; }
    ComplexQ operator-(const ComplexQ& o) const { return {re - o.re, im - o.im}; }
    ComplexQ operator*(const ComplexQ& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    ComplexQ operator*(const mpq_class& s) const { return {re * s, im * s}; }
    mpq_class norm2() const { return re * re + im * im; }
    ComplexQ conj() const { return {re, -im}; }
    ComplexQ operator/(const ComplexQ& o) const {
        mpq_class n = o.norm2();
        ComplexQ num = *this * o.conj();
        return {num.re / n, num.im / n};
    }
};

inline mpq_class pow2(long e) {
    mpq_class r = 1;
    if (e >= 0) {
        mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e));
    } else {
        mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    }
    return r;
}

// Nearest multiple of 2^-bits (ties toward +inf).
inline mpq_class round_dyadic(const mpq_class& x, int bits) {
    mpz_class scaled = x.get_num();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(bits + 1));
    mpz_class den = x.get_den();
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
    // q = floor(2x * 2^bits); round(x*2^bits) = floor((q+1)/2)
    q += 1;
    mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), 1);
    mpq_class r(q);
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    r.canonicalize();
    return r;
}

// Dyadic upper bound on sqrt(q), within 2^-bits.
inline mpq_class sqrt_upper(const mpq_class& q, int bits) {
    mpz_class num = q.get_num();
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * bits));
    mpz_class den = q.get_den();
    mpz_class n;
    mpz_cdiv_q(n.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
    if (s * s < n) {
        s += 1;
    }
    mpq_class r(s);
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    r.canonicalize();
    return r;
}

// Horner evaluation of an integer polynomial (constant term first).
inline ComplexQ eval_poly(const std::vector<int>& poly, const ComplexQ& z) {
    ComplexQ acc{0, 0};
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        acc = acc * z;
        acc.re += *it;
    }
    return acc;
}

inline ComplexQ eval_derivative(const std::vector<int>& poly, const ComplexQ& z) {
    ComplexQ acc{0, 0};
    for (std::size_t i = poly.size() - 1; i >= 1; --i) {
        acc = acc * z;
        acc.re += static_cast<long>(poly[i]) * static_cast<long>(i);
    }
    return acc;
}

} // namespace bonacci::detail
