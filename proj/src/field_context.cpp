#include <algorithm>
#include <cmath>
#include <complex>

#include "bonacci/field.hpp"
#include "complex_q.hpp"

namespace bonacci {

namespace {

using detail::ComplexQ;

int poly_sign_at(const std::vector<int>& poly, const mpq_class& x) {
    mpq_class acc = 0;
    for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
        acc = acc * x + *it;
    }
    return sgn(acc);
}

// Durand-Kerner starting approximations in long double.
std::vector<std::complex<long double>> approximate_roots(const std::vector<int>& poly) {
    const int d = static_cast<int>(poly.size()) - 1;
    using C = std::complex<long double>;
    std::vector<C> z(d);
    const C seed(0.4L, 0.9L);
    C w(1.0L, 0.0L);
    for (int i = 0; i < d; ++i) {
        z[i] = w;
        w *= seed;
    }
    auto p = [&](C x) {
        C acc = 0;
        for (int i = d; i >= 0; --i) {
            acc = acc * x + static_cast<long double>(poly[i]);
        }
        return acc;
    };
    for (int iter = 0; iter < 2000; ++iter) {
        long double change = 0;
        for (int i = 0; i < d; ++i) {
            C denom = 1;
            for (int j = 0; j < d; ++j) {
                if (j != i) {
                    denom *= (z[i] - z[j]);
                }
            }
            C delta = p(z[i]) / denom;
            z[i] -= delta;
            change = std::max(change, std::abs(delta));
        }
        if (change < 1e-17L) {
            break;
        }
    }
    return z;
}

struct RootSeed {
    ComplexQ z;
    bool real;
};

// Newton refinement in exact dyadic arithmetic until the step is below
// 2^-(bits+12).
ComplexQ refine_root(const std::vector<int>& poly, ComplexQ z, bool real, int bits) {
    const int grid = bits + 16;
    const mpq_class tol2 = detail::pow2(-2L * (bits + 12));
    for (int iter = 0; iter < 200; ++iter) {
        ComplexQ step = detail::eval_poly(poly, z) / detail::eval_derivative(poly, z);
        z = z - step;
        z.re = detail::round_dyadic(z.re, grid);
        z.im = real ? mpq_class(0) : detail::round_dyadic(z.im, grid);
        if (step.norm2() < tol2) {
            return z;
        }
    }
    throw Error(ErrorCode::precision_too_low, "root refinement did not converge");
}

std::vector<int> bonacci_poly(int d) {
    std::vector<int> poly(static_cast<std::size_t>(d) + 1, -1);
    poly[d] = 1;
    return poly;
}

// Refines all seeds to the requested precision and certifies one root per
// disk (Weierstrass inclusion radii, disks pairwise disjoint) and the Pisot
// property of the non-dominant roots.
std::shared_ptr<ConjugateTable> certify(const std::vector<int>& poly, const ComplexQ& beta,
                                        const std::vector<RootSeed>& seeds, int bits) {
    const int d = static_cast<int>(poly.size()) - 1;
    std::vector<ComplexQ> all;
    std::vector<bool> is_real;
    all.push_back(refine_root(poly, beta, true, bits));
    is_real.push_back(true);
    for (const auto& s : seeds) {
        ComplexQ z = refine_root(poly, s.z, s.real, bits);
        all.push_back(z);
        is_real.push_back(s.real);
    }
    // Partners of the complex representatives complete the root list.
    const std::size_t reps = all.size();
    for (std::size_t i = 1; i < reps; ++i) {
        if (!is_real[i]) {
            all.push_back(all[i].conj());
            is_real.push_back(false);
        }
    }
    if (static_cast<int>(all.size()) != d) {
        throw Error(ErrorCode::precision_too_low, "root count mismatch during isolation");
    }

    std::vector<mpq_class> radius(all.size());
    const mpq_class d2 = mpq_class(d) * d;
    for (std::size_t i = 0; i < all.size(); ++i) {
        mpq_class den = 1;
        for (std::size_t j = 0; j < all.size(); ++j) {
            if (j != i) {
                den *= (all[i] - all[j]).norm2();
            }
        }
        if (den == 0) {
            throw Error(ErrorCode::precision_too_low, "coincident root approximations");
        }
        mpq_class w2 = detail::eval_poly(poly, all[i]).norm2() / den;
        radius[i] = detail::sqrt_upper(d2 * w2, bits + 24);
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            mpq_class sum = radius[i] + radius[j];
            if ((all[i] - all[j]).norm2() <= sum * sum) {
                throw Error(ErrorCode::precision_too_low, "isolating disks overlap");
            }
        }
    }
    const mpq_class limit = detail::pow2(-bits);
    auto table = std::make_shared<ConjugateTable>();
    table->bits = bits;
    for (std::size_t i = 1; i < reps; ++i) {
        const mpq_class& r = radius[i];
        if (r > limit) {
            throw Error(ErrorCode::precision_too_low, "isolating disk wider than requested precision");
        }
        mpq_class slack = 1 - r;
        if (r >= 1 || all[i].norm2() >= slack * slack) {
            throw Error(ErrorCode::precision_too_low, "cannot certify conjugate modulus below 1");
        }
        table->roots.push_back(ConjugateRoot{all[i].re, all[i].im, r, static_cast<bool>(is_real[i])});
    }
    for (const auto& root : table->roots) {
        std::vector<std::pair<mpq_class, mpq_class>> pw;
        ComplexQ acc{1, 0};
        const ComplexQ z{root.re, root.im};
        for (int i = 0; i < d; ++i) {
            pw.emplace_back(acc.re, acc.im);
            acc = acc * z;
        }
        table->powers.push_back(std::move(pw));
    }
    return table;
}

} // namespace

FieldContext::FieldContext(Token, int d, int precision_bits)
    : d_(d), precision_bits_(precision_bits), min_poly_(bonacci_poly(d)) {
    const auto approx = approximate_roots(min_poly_);

    // Dominant real root, then the remaining roots grouped by kind.
    std::size_t beta_idx = 0;
    for (std::size_t i = 1; i < approx.size(); ++i) {
        if (approx[i].real() > approx[beta_idx].real()) {
            beta_idx = i;
        }
    }
    std::vector<RootSeed> complex_seeds;
    std::vector<RootSeed> real_seeds;
    for (std::size_t i = 0; i < approx.size(); ++i) {
        if (i == beta_idx) {
            continue;
        }
        const auto& z = approx[i];
        if (std::abs(z.imag()) < 1e-9L) {
            real_seeds.push_back({ComplexQ{mpq_class(static_cast<double>(z.real())), 0}, true});
        } else if (z.imag() > 0) {
            complex_seeds.push_back({ComplexQ{mpq_class(static_cast<double>(z.real())),
                                              mpq_class(static_cast<double>(z.imag()))},
                                     false});
        }
    }
    auto by_re = [](const RootSeed& a, const RootSeed& b) { return a.z.re < b.z.re; };
    std::sort(complex_seeds.begin(), complex_seeds.end(), by_re);
    std::sort(real_seeds.begin(), real_seeds.end(), by_re);
    complex_pairs_ = static_cast<int>(complex_seeds.size());

    std::vector<RootSeed> seeds = complex_seeds;
    seeds.insert(seeds.end(), real_seeds.begin(), real_seeds.end());
    const ComplexQ beta_seed{mpq_class(static_cast<double>(approx[beta_idx].real())), 0};
    auto table = certify(min_poly_, beta_seed, seeds, precision_bits);
    table_ = table;

    // Bracket beta by an explicit sign change inside (1, 2).
    ComplexQ beta = refine_root(min_poly_, beta_seed, true, precision_bits);
    const mpq_class half_width = detail::pow2(-(precision_bits + 1));
    mpq_class lo = detail::round_dyadic(beta.re, precision_bits + 1) - half_width;
    mpq_class hi = lo + 2 * half_width;
    if (!(lo > 1 && hi < 2 && poly_sign_at(min_poly_, lo) < 0 && poly_sign_at(min_poly_, hi) > 0)) {
        throw Error(ErrorCode::precision_too_low, "cannot bracket the dominant root");
    }
    beta_interval_ = {lo, hi};
    beta_double_ = mpq_class((lo + hi) / 2).get_d();

    mpq_class plo = 1;
    mpq_class phi = 1;
    for (int i = 0; i < d_; ++i) {
        lo_pows_.push_back(plo);
        hi_pows_.push_back(phi);
        pows_double_.push_back(mpq_class((plo + phi) / 2).get_d());
        plo *= lo;
        phi *= hi;
    }
}

ContextPtr FieldContext::make(int d, int precision_bits) {
    if (d < 2) {
        throw Error(ErrorCode::invalid_parameter, "d must be at least 2");
    }
    if (d > 64) {
        throw Error(ErrorCode::invalid_parameter, "d above 64 is not supported");
    }
    if (precision_bits < 64) {
        throw Error(ErrorCode::invalid_parameter, "precision must be at least 64 bits");
    }
    return std::make_shared<const FieldContext>(Token{}, d, precision_bits);
}

RationalInterval FieldContext::beta_interval(int bits) const {
    RationalInterval iv = beta_interval_;
    const mpq_class target = detail::pow2(-bits);
    while (iv.hi - iv.lo > target) {
        mpq_class mid = (iv.lo + iv.hi) / 2;
        int s = poly_sign_at(min_poly_, mid);
        if (s == 0) {
            return {mid, mid};
        }
        (s < 0 ? iv.lo : iv.hi) = mid;
    }
    return iv;
}

std::shared_ptr<const ConjugateTable> FieldContext::conjugate_table(int bits) const {
    if (bits <= precision_bits_) {
        return table_;
    }
    // Round up so nearby requests share a table.
    bits = (bits + 63) / 64 * 64;
    std::lock_guard lock(cache_mutex_);
    if (auto it = cache_.find(bits); it != cache_.end()) {
        return it->second;
    }
    std::vector<RootSeed> seeds;
    for (const auto& r : table_->roots) {
        seeds.push_back({ComplexQ{r.re, r.im}, r.real});
    }
    const ComplexQ beta{(beta_interval_.lo + beta_interval_.hi) / 2, 0};
    auto table = certify(min_poly_, beta, seeds, bits);
    cache_.emplace(bits, table);
    return table;
}

} // namespace bonacci
