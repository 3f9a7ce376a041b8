#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bonacci/field.hpp"

namespace bonacci {

using DigitWord = std::vector<int>;

enum class TransformKind { symmetric, balanced };

/// Half-open interval [lo, hi) with exact endpoints.
struct Interval {
    AlgNum lo;
    AlgNum hi;

    bool contains(const AlgNum& x) const { return in_interval(x, lo, hi, true, false); }
};

/// A beta-transformation x -> beta*x - D(x) on a union of half-open intervals.
///
/// Symmetric: X_S = [-1/2, beta/2 - 1) u [1 - beta/2, 1/2), digits {-1, 0, 1},
/// D(x) the unique digit with beta*x - D in [-1/2, 1/2).
/// Balanced: X_B = [(2 - beta)/(2beta - 2), beta/(2beta - 2)), digits {0, 1},
/// D(x) = 1 iff x >= 1/(2beta - 2).
class TransformSpec {
  public:
    static TransformSpec symmetric(const ContextPtr& ctx);
    static TransformSpec balanced(const ContextPtr& ctx);

    TransformKind kind() const noexcept { return kind_; }
    const ContextPtr& context() const noexcept { return ctx_; }
    const std::vector<Interval>& domain() const noexcept { return domain_; }
    const std::vector<int>& alphabet() const noexcept { return alphabet_; }

    bool contains(const AlgNum& x) const;
    bool in_alphabet(int digit) const;
    /// Digit of x, without a domain check.
    int digit(const AlgNum& x) const;
    /// Digit of x, or nullopt outside the domain.
    std::optional<int> digit_if_inside(const AlgNum& x) const;

  private:
    TransformSpec(TransformKind kind, ContextPtr ctx);

    TransformKind kind_;
    ContextPtr ctx_;
    std::vector<Interval> domain_;
    std::vector<int> alphabet_;
    struct Cut {
        AlgNum value;
        double approx;
        double err;
    };
    struct Probe {
        double approx;
        double err;
    };
    Probe probe(const AlgNum& x) const;
    int compare_cut(const AlgNum& x, const Probe& p, const Cut& c) const;
    bool inside(const AlgNum& x, const Probe& p) const;
    int digit_at(const AlgNum& x, const Probe& p) const;
    Cut make_cut(AlgNum v) const;

    // symmetric: [-1/2, beta/2 - 1), [1 - beta/2, 1/2), digit cuts -+1/(2 beta)
    // balanced: [lo, hi), digit cut 1/(2 beta - 2)
    std::vector<Cut> ends_;
    std::vector<Cut> digit_cuts_;
};

struct Step {
    int digit;
    AlgNum next;
};

/// One application of the transformation; domain_error outside the domain.
Step step(const TransformSpec& spec, const AlgNum& x);

/// First n digits of the expansion of x.
DigitWord expansion(const TransformSpec& spec, const AlgNum& x, std::size_t n);

/// Eventually periodic digit sequence preperiod (period)^omega.
struct EventuallyPeriodic {
    DigitWord preperiod;
    DigitWord period;

    /// Minimal period, then the shortest preperiod.
    EventuallyPeriodic canonical() const;
    /// Digit at 0-based position i.
    int at(std::size_t i) const;
    DigitWord prefix(std::size_t n) const;
    bool purely_periodic() const { return preperiod.empty(); }

    friend bool operator==(const EventuallyPeriodic&, const EventuallyPeriodic&) = default;
};

struct OrbitCycle {
    std::size_t preperiod_len = 0;
    std::size_t period_len = 0;
    EventuallyPeriodic expansion;
};

inline constexpr std::size_t default_orbit_budget = 1'000'000;

/// Exact cycle detection (Brent) on the orbit of x.
OrbitCycle orbit_cycle(const TransformSpec& spec, const AlgNum& x, std::size_t budget = default_orbit_budget);

/// Value sum(w_i beta^-i) of preperiod (period)^omega.
AlgNum value_of(const ContextPtr& ctx, const EventuallyPeriodic& digits);

/// Conjugacy X_S -> X_B: x/(beta-1) on the right piece, (x+1)/(beta-1) on the left.
AlgNum psi(const AlgNum& x);
AlgNum psi_inverse(const AlgNum& t);

/// First n symmetric digits of x equal the differences t_{i+1} - t_i of the
/// balanced digits of psi(x).
bool digit_difference_law(const AlgNum& x, std::size_t n);

/// The 2^d - 2 nonzero purely periodic points +-sum_{i=2}^{d} p_i beta^-i,
/// sorted by value.
std::vector<AlgNum> periodic_points(const ContextPtr& ctx);

/// Exhaustive search over coordinates in [-bound, bound]; test oracle for
/// periodic_points.
std::vector<AlgNum> periodic_points_bruteforce(const ContextPtr& ctx, int coeff_bound);

/// Checks the invariant density c_k = beta^-1 + ... + beta^-k on the pieces
/// Y_{+-k} against the transition structure of the symmetric automaton.
bool verify_invariant_measure(const ContextPtr& ctx);

/// Density c_k as an exact element.
AlgNum invariant_density(const ContextPtr& ctx, int k);

struct ClassCharacterization {
    ResidueClass from_period;     // class read off the balanced period sum
    int period_sum = 0;           // digit sum over one block of d digits
    ResidueClass from_coefficients;
    EventuallyPeriodic balanced_expansion;
};

/// Class of x in Z[beta] n X_S, x != 0, read from the balanced expansion of
/// |x|/(beta-1).
ClassCharacterization characterize_class(const AlgNum& x);

/// Seeded uniform draw of elements of Z[beta] with coordinates in
/// [-coeff_bound, coeff_bound].
std::vector<AlgNum> sample_lattice_points(const ContextPtr& ctx, std::size_t count, int coeff_bound,
                                          std::uint64_t seed);

/// Same distribution conditioned on lying in X_S (rejection sampling).
std::vector<AlgNum> sample_domain_points(const ContextPtr& ctx, std::size_t count, int coeff_bound,
                                         std::uint64_t seed);

/// Digits as text; -1 is written "T".
std::string compact_digits(const DigitWord& word);

} // namespace bonacci
