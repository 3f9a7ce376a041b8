#include <cmath>
#include <cstdlib>
#include <sstream>

#include "bonacci/field.hpp"
#include "complex_q.hpp"

namespace bonacci {

AlgNum::AlgNum(ContextPtr ctx) : ctx_(std::move(ctx)) {
    coeffs_.resize(static_cast<std::size_t>(ctx_->degree()));
}

AlgNum::AlgNum(ContextPtr ctx, std::vector<mpq_class> coeffs) : ctx_(std::move(ctx)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != ctx_->degree()) {
        throw Error(ErrorCode::invalid_parameter, "coefficient vector length must equal d");
    }
    for (auto& c : coeffs_) {
        c.canonicalize();
    }
}

AlgNum AlgNum::integer(ContextPtr ctx, long value) {
    AlgNum x(std::move(ctx));
    x.coeffs_[0] = value;
    return x;
}

AlgNum AlgNum::rational(ContextPtr ctx, const mpq_class& value) {
    AlgNum x(std::move(ctx));
    x.coeffs_[0] = value;
    return x;
}

AlgNum AlgNum::beta_power(ContextPtr ctx, int k) {
    return integer(std::move(ctx), 1).mul_beta_pow(k);
}

bool AlgNum::is_zero() const noexcept {
    for (const auto& c : coeffs_) {
        if (sgn(c) != 0) {
            return false;
        }
    }
    return true;
}

bool AlgNum::is_integral() const noexcept {
    for (const auto& c : coeffs_) {
        if (c.get_den() != 1) {
            return false;
        }
    }
    return true;
}

void AlgNum::check_same(const AlgNum& other) const {
    if (ctx_ != other.ctx_ && ctx_->degree() != other.ctx_->degree()) {
        throw Error(ErrorCode::context_mismatch, "operands belong to different fields");
    }
}

AlgNum AlgNum::operator-() const {
    AlgNum r(*this);
    for (auto& c : r.coeffs_) {
        c = -c;
    }
    return r;
}

AlgNum& AlgNum::operator+=(const AlgNum& other) {
    check_same(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] += other.coeffs_[i];
    }
    return *this;
}

AlgNum& AlgNum::operator-=(const AlgNum& other) {
    check_same(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        coeffs_[i] -= other.coeffs_[i];
    }
    return *this;
}

AlgNum& AlgNum::operator*=(const AlgNum& other) {
    check_same(other);
    const std::size_t d = coeffs_.size();
    std::vector<mpq_class> prod(2 * d - 1);
    for (std::size_t i = 0; i < d; ++i) {
        if (sgn(coeffs_[i]) == 0) {
            continue;
        }
        for (std::size_t j = 0; j < d; ++j) {
            prod[i + j] += coeffs_[i] * other.coeffs_[j];
        }
    }
    // beta^k = beta^{k-1} + ... + beta^{k-d} for k >= d.
    for (std::size_t k = 2 * d - 2; k >= d; --k) {
        if (sgn(prod[k]) != 0) {
            for (std::size_t i = k - d; i < k; ++i) {
                prod[i] += prod[k];
            }
        }
    }
    prod.resize(d);
    coeffs_ = std::move(prod);
    return *this;
}

AlgNum& AlgNum::operator*=(const mpq_class& scalar) {
    for (auto& c : coeffs_) {
        c *= scalar;
    }
    return *this;
}

AlgNum AlgNum::mul_beta_pow(int k) const {
    AlgNum r(*this);
    auto& c = r.coeffs_;
    const std::size_t d = c.size();
    for (; k > 0; --k) {
        mpq_class top = c[d - 1];
        for (std::size_t i = d - 1; i >= 1; --i) {
            c[i] = c[i - 1] + top;
        }
        c[0] = top;
    }
    // beta^{-1} = beta^{d-1} - beta^{d-2} - ... - 1.
    for (; k < 0; ++k) {
        mpq_class low = c[0];
        for (std::size_t i = 0; i + 1 < d; ++i) {
            c[i] = c[i + 1] - low;
        }
        c[d - 1] = low;
    }
    return r;
}

AlgNum AlgNum::inverse() const {
    if (is_zero()) {
        throw Error(ErrorCode::invalid_parameter, "inverse of zero");
    }
    const std::size_t d = coeffs_.size();
    // Column j of the multiplication matrix is x * beta^j; solve M v = e_0.
    std::vector<std::vector<mpq_class>> m(d, std::vector<mpq_class>(d + 1));
    AlgNum col(*this);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < d; ++i) {
            m[i][j] = col.coeffs_[i];
        }
        col = col.mul_beta_pow(1);
    }
    m[0][d] = 1;
    for (std::size_t c = 0; c < d; ++c) {
        std::size_t pivot = c;
        while (pivot < d && sgn(m[pivot][c]) == 0) {
            ++pivot;
        }
        if (pivot == d) {
            throw Error(ErrorCode::structure_error, "singular multiplication matrix");
        }
        std::swap(m[pivot], m[c]);
        for (std::size_t r = 0; r < d; ++r) {
            if (r == c || sgn(m[r][c]) == 0) {
                continue;
            }
            mpq_class f = m[r][c] / m[c][c];
            for (std::size_t k = c; k <= d; ++k) {
                m[r][k] -= f * m[c][k];
            }
        }
    }
    std::vector<mpq_class> v(d);
    for (std::size_t i = 0; i < d; ++i) {
        v[i] = m[i][d] / m[i][i];
    }
    return AlgNum(ctx_, std::move(v));
}

bool operator==(const AlgNum& a, const AlgNum& b) {
    a.check_same(b);
    return a.coeffs_ == b.coeffs_;
}

std::size_t AlgNum::hash() const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (const auto& c : coeffs_) {
        const std::size_t n = mpz_get_ui(c.get_num_mpz_t()) ^ (static_cast<std::size_t>(sgn(c) + 1) << 62);
        const std::size_t q = mpz_get_ui(c.get_den_mpz_t());
        h ^= n + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= q + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

std::string AlgNum::to_string() const {
    std::ostringstream out;
    bool first = true;
    for (int k = degree() - 1; k >= 0; --k) {
        const mpq_class& c = coeffs_[static_cast<std::size_t>(k)];
        if (sgn(c) == 0) {
            continue;
        }
        mpq_class mag = abs(c);
        if (first) {
            out << (sgn(c) < 0 ? "-" : "");
        } else {
            out << (sgn(c) < 0 ? " - " : " + ");
        }
        first = false;
        if (k == 0) {
            out << mag.get_str();
            continue;
        }
        if (mag != 1) {
            out << mag.get_str() << "*";
        }
        out << "b";
        if (k > 1) {
            out << "^" << k;
        }
    }
    return first ? "0" : out.str();
}

double AlgNum::approx() const {
    const auto& pw = ctx_->beta_powers_double();
    double s = 0;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        s += coeffs_[i].get_d() * pw[i];
    }
    return s;
}

bool AlgNumLess::operator()(const AlgNum& a, const AlgNum& b) const {
    return compare(a, b) < 0;
}

AlgNum arith(const AlgNum& x, const AlgNum& y, ArithOp op) {
    switch (op) {
    case ArithOp::add:
        return x + y;
    case ArithOp::sub:
        return x - y;
    case ArithOp::mul:
        return x * y;
    case ArithOp::neg:
        if (x.context()->degree() != y.context()->degree()) {
            throw Error(ErrorCode::context_mismatch, "operands belong to different fields");
        }
        return -x;
    }
    throw Error(ErrorCode::invalid_parameter, "unknown arithmetic operation");
}

namespace {

// Bounds of x over beta in [lo, hi] (beta > 0, so beta^i is monotone).
int interval_sign(const std::vector<mpq_class>& c, const std::vector<mpq_class>& lo_pows,
                  const std::vector<mpq_class>& hi_pows) {
    mpq_class lower = 0;
    mpq_class upper = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const int s = sgn(c[i]);
        if (s == 0) {
            continue;
        }
        if (s > 0) {
            lower += c[i] * lo_pows[i];
            upper += c[i] * hi_pows[i];
        } else {
            lower += c[i] * hi_pows[i];
            upper += c[i] * lo_pows[i];
        }
    }
    if (sgn(lower) > 0) {
        return 1;
    }
    if (sgn(upper) < 0) {
        return -1;
    }
    return 0;
}

} // namespace

int sign(const AlgNum& x) {
    if (x.is_zero()) {
        return 0;
    }
    const auto& c = x.coeffs();
    const auto& ctx = *x.context();

    // Floating filter: the rounding error of this sum is far below
    // (d + 4) * 2^-53 * magnitude, and 2^-40 covers that for d <= 64.
    {
        const auto& pw = ctx.beta_powers_double();
        double s = 0;
        double mag = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double t = c[i].get_d() * pw[i];
            s += t;
            mag += std::fabs(t);
        }
        if (std::isfinite(mag) && mag > 1e-250 && std::fabs(s) > mag * 0x1p-40) {
            return s > 0 ? 1 : -1;
        }
    }

    if (int s = interval_sign(c, ctx.beta_lo_powers(), ctx.beta_hi_powers()); s != 0) {
        return s;
    }
    // x != 0, so a narrow enough bracket always decides.
    for (int bits = 2 * ctx.precision_bits();; bits *= 2) {
        const RationalInterval iv = ctx.beta_interval(bits);
        std::vector<mpq_class> lo_pows;
        std::vector<mpq_class> hi_pows;
        mpq_class plo = 1;
        mpq_class phi = 1;
        for (std::size_t i = 0; i < c.size(); ++i) {
            lo_pows.push_back(plo);
            hi_pows.push_back(phi);
            plo *= iv.lo;
            phi *= iv.hi;
        }
        if (int s = interval_sign(c, lo_pows, hi_pows); s != 0) {
            return s;
        }
    }
}

int compare(const AlgNum& a, const AlgNum& b) {
    // Same filter as in sign(), applied before forming a - b.
    if (a.degree() == b.degree()) {
        const auto& pw = a.context()->beta_powers_double();
        const auto& ca = a.coeffs();
        const auto& cb = b.coeffs();
        double s = 0;
        double mag = 0;
        for (std::size_t i = 0; i < ca.size(); ++i) {
            const double ta = ca[i].get_d() * pw[i];
            const double tb = cb[i].get_d() * pw[i];
            s += ta - tb;
            mag += std::fabs(ta) + std::fabs(tb);
        }
        if (std::isfinite(mag) && mag > 1e-250 && std::fabs(s) > mag * 0x1p-40) {
            return s > 0 ? 1 : -1;
        }
    }
    return sign(a - b);
}

bool in_interval(const AlgNum& x, const AlgNum& lo, const AlgNum& hi, bool closed_lo, bool closed_hi) {
    const int below = compare(x, lo);
    if (below < 0 || (below == 0 && !closed_lo)) {
        return false;
    }
    const int above = compare(x, hi);
    return above < 0 || (above == 0 && closed_hi);
}

ResidueClass make_residue(long value, int d) {
    const long m = d - 1;
    if (m <= 1) {
        return ResidueClass{1, 1};
    }
    long r = ((value - 1) % m + m) % m + 1;
    return ResidueClass{static_cast<int>(r), static_cast<int>(m)};
}

ResidueClass congruence_class(const AlgNum& x) {
    if (!x.is_integral()) {
        throw Error(ErrorCode::not_integral, "congruence class needs an element of Z[beta]");
    }
    const int d = x.context()->degree();
    if (d <= 2) {
        return ResidueClass{1, 1};
    }
    // beta = 1 mod (beta - 1), so the class is the coefficient sum mod d - 1.
    mpz_class sum = 0;
    for (const auto& c : x.coeffs()) {
        sum += c.get_num();
    }
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), sum.get_mpz_t(), static_cast<unsigned long>(d - 1));
    return make_residue(r.get_si(), d);
}

std::vector<double> EmbeddedPoint::approx() const {
    std::vector<double> out;
    out.reserve(coords.size());
    for (const auto& c : coords) {
        out.push_back(c.get_d());
    }
    return out;
}

EmbeddedPoint embed(const AlgNum& x, int precision_bits) {
    const auto& ctx = *x.context();
    EmbeddedPoint p;
    p.error_radius = 0;
    if (x.is_zero()) {
        p.coords.assign(static_cast<std::size_t>(ctx.embedding_dimension()), mpq_class(0));
        return p;
    }
    const auto& c = x.coeffs();

    // |sigma^i - z^i| <= i * r when |z| + r < 1, so the error of the sum is
    // at most r * sum(i * |c_i|).
    mpq_class weight = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
        weight += abs(c[i]) * static_cast<long>(i);
    }
    int extra = 2;
    if (sgn(weight) > 0) {
        const double w = weight.get_d();
        extra += std::isfinite(w) ? static_cast<int>(std::ceil(std::log2(w + 1.0))) : 4096;
    }
    const int grid = precision_bits + 4;
    const auto table = ctx.conjugate_table(precision_bits + extra);

    mpq_class rounding = 0;
    auto push = [&](mpq_class v) {
        if (mpz_sizeinbase(v.get_den_mpz_t(), 2) > static_cast<std::size_t>(grid) + 1) {
            v = detail::round_dyadic(v, grid);
            rounding = detail::pow2(-grid);
        }
        p.coords.push_back(std::move(v));
    };
    for (std::size_t j = 0; j < table->roots.size(); ++j) {
        const auto& pw = table->powers[j];
        mpq_class re = 0;
        mpq_class im = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (sgn(c[i]) == 0) {
                continue;
            }
            re += c[i] * pw[i].first;
            im += c[i] * pw[i].second;
        }
        push(std::move(re));
        if (!table->roots[j].real) {
            push(std::move(im));
        }
    }
    mpq_class max_r = 0;
    for (const auto& r : table->roots) {
        if (r.radius > max_r) {
            max_r = r.radius;
        }
    }
    p.error_radius = weight * max_r + rounding;
    return p;
}

} // namespace bonacci
