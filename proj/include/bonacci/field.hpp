#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "bonacci/error.hpp"

namespace bonacci {

inline constexpr int default_precision_bits = 192;

class FieldContext;
using ContextPtr = std::shared_ptr<const FieldContext>;

struct RationalInterval {
    mpq_class lo;
    mpq_class hi;
};

/// Closed disk around one root of the minimal polynomial. The center is a
/// dyadic rational; exactly one root lies in the disk.
struct ConjugateRoot {
    mpq_class re;
    mpq_class im;
    mpq_class radius;
    bool real = false;
};

/// Conjugate data certified at a given precision, plus exact powers of each
/// center used by the embedding.
struct ConjugateTable {
    int bits = 0;
    std::vector<ConjugateRoot> roots;
    // powers[j][i] = center_j^i, exact.
    std::vector<std::vector<std::pair<mpq_class, mpq_class>>> powers;
};

/// The d-Bonacci number field Q(beta), beta^d = beta^{d-1} + ... + beta + 1.
///
/// Immutable after construction apart from an internal memo of conjugate
/// tables at higher precisions, which is guarded by a mutex.
class FieldContext {
    struct Token {};

  public:
    FieldContext(Token, int d, int precision_bits);

    /// Certified context; throws invalid_parameter for d < 2 and
    /// precision_too_low if the Pisot certificate fails at this precision.
    static ContextPtr make(int d, int precision_bits = default_precision_bits);

    int degree() const noexcept { return d_; }
    int precision_bits() const noexcept { return precision_bits_; }
    int embedding_dimension() const noexcept { return d_ - 1; }
    int complex_pairs() const noexcept { return complex_pairs_; }
    int real_conjugates() const noexcept { return d_ - 2 * complex_pairs_ - 1; }

    /// Coefficients from the constant term upwards: -1, ..., -1, 1.
    const std::vector<int>& min_poly() const noexcept { return min_poly_; }
    const RationalInterval& beta_interval() const noexcept { return beta_interval_; }
    /// Complex representatives (positive imaginary part, by real part), then
    /// real conjugates ascending.
    const std::vector<ConjugateRoot>& conjugates() const noexcept { return table_->roots; }
    double beta_approx() const noexcept { return beta_double_; }

    /// Isolating interval of width at most 2^-bits (bisection from the stored one).
    RationalInterval beta_interval(int bits) const;

    /// Conjugate disks with radius at most 2^-bits.
    std::shared_ptr<const ConjugateTable> conjugate_table(int bits) const;

    // Sign-evaluation tables at the stored precision.
    const std::vector<mpq_class>& beta_lo_powers() const noexcept { return lo_pows_; }
    const std::vector<mpq_class>& beta_hi_powers() const noexcept { return hi_pows_; }
    const std::vector<double>& beta_powers_double() const noexcept { return pows_double_; }

  private:
    int d_;
    int precision_bits_;
    int complex_pairs_ = 0;
    std::vector<int> min_poly_;
    RationalInterval beta_interval_;
    double beta_double_ = 0.0;
    std::vector<mpq_class> lo_pows_;
    std::vector<mpq_class> hi_pows_;
    std::vector<double> pows_double_;
    std::shared_ptr<const ConjugateTable> table_;

    mutable std::mutex cache_mutex_;
    mutable std::map<int, std::shared_ptr<const ConjugateTable>> cache_;
};

/// Element of Q(beta) in the power basis 1, beta, ..., beta^{d-1}.
class AlgNum {
  public:
    explicit AlgNum(ContextPtr ctx);
    AlgNum(ContextPtr ctx, std::vector<mpq_class> coeffs);

    static AlgNum integer(ContextPtr ctx, long value);
    static AlgNum rational(ContextPtr ctx, const mpq_class& value);
    /// beta^k for any integer k.
    static AlgNum beta_power(ContextPtr ctx, int k);

    const ContextPtr& context() const noexcept { return ctx_; }
    const std::vector<mpq_class>& coeffs() const noexcept { return coeffs_; }
    int degree() const noexcept { return static_cast<int>(coeffs_.size()); }

    bool is_zero() const noexcept;
    bool is_integral() const noexcept;

    AlgNum operator-() const;
    AlgNum& operator+=(const AlgNum& other);
    AlgNum& operator-=(const AlgNum& other);
    AlgNum& operator*=(const AlgNum& other);
    AlgNum& operator*=(const mpq_class& scalar);

    friend AlgNum operator+(AlgNum a, const AlgNum& b) { return a += b; }
    friend AlgNum operator-(AlgNum a, const AlgNum& b) { return a -= b; }
    friend AlgNum operator*(AlgNum a, const AlgNum& b) { return a *= b; }
    friend AlgNum operator*(AlgNum a, const mpq_class& s) { return a *= s; }
    friend AlgNum operator*(const mpq_class& s, AlgNum a) { return a *= s; }

    /// x * beta^k.
    AlgNum mul_beta_pow(int k) const;
    /// Multiplicative inverse; invalid_parameter on zero.
    AlgNum inverse() const;

    friend bool operator==(const AlgNum& a, const AlgNum& b);
    friend bool operator!=(const AlgNum& a, const AlgNum& b) { return !(a == b); }

    std::size_t hash() const noexcept;
    /// Power-basis text, e.g. "3/2*b^2 - b - 1"; parse_algnum reads it back.
    std::string to_string() const;
    double approx() const;

  private:
    void check_same(const AlgNum& other) const;

    ContextPtr ctx_;
    std::vector<mpq_class> coeffs_;
};

struct AlgNumHash {
    std::size_t operator()(const AlgNum& x) const noexcept { return x.hash(); }
};

/// Strict weak order by real value; used to keep point sets deterministic.
struct AlgNumLess {
    bool operator()(const AlgNum& a, const AlgNum& b) const;
};

enum class ArithOp { add, sub, mul, neg };

/// Binary ring operation (neg ignores y apart from the context check).
AlgNum arith(const AlgNum& x, const AlgNum& y, ArithOp op);

/// Exact sign of the real value of x.
int sign(const AlgNum& x);
int compare(const AlgNum& a, const AlgNum& b);

bool in_interval(const AlgNum& x, const AlgNum& lo, const AlgNum& hi, bool closed_lo, bool closed_hi);

/// Class of x modulo beta - 1, represented in {1, ..., d-1} with residue 0
/// mapped to d-1. For d = 2 there is one class, reported as 1.
struct ResidueClass {
    int rep = 1;
    int modulus = 1;

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
    friend auto operator<=>(const ResidueClass&, const ResidueClass&) = default;
};

ResidueClass make_residue(long value, int d);
ResidueClass congruence_class(const AlgNum& x);

/// Phi(x): values of x under the non-identity conjugates, complex ones split
/// into real and imaginary parts. Coordinates are dyadic; every coordinate is
/// within error_radius of the true value.
struct EmbeddedPoint {
    std::vector<mpq_class> coords;
    mpq_class error_radius;

    std::vector<double> approx() const;
    double radius() const { return error_radius.get_d(); }
};

/// Absolute error at most 2^-bits.
EmbeddedPoint embed(const AlgNum& x, int precision_bits = default_precision_bits);

/// Reads a signed sum of terms c*b^k (c rational, k any integer).
AlgNum parse_algnum(const ContextPtr& ctx, std::string_view text);

} // namespace bonacci

template <>
struct std::hash<bonacci::AlgNum> {
    std::size_t operator()(const bonacci::AlgNum& x) const noexcept { return x.hash(); }
};
