#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bonacci/automaton.hpp"
#include "bonacci/dynamics.hpp"

namespace bonacci {

namespace {

AlgNum half(const ContextPtr& ctx) {
    return AlgNum::rational(ctx, mpq_class(1, 2));
}

AlgNum beta(const ContextPtr& ctx) {
    return AlgNum::beta_power(ctx, 1);
}

AlgNum inv_beta_minus_one(const ContextPtr& ctx) {
    return (beta(ctx) - AlgNum::integer(ctx, 1)).inverse();
}

} // namespace

TransformSpec::TransformSpec(TransformKind kind, ContextPtr ctx) : kind_(kind), ctx_(std::move(ctx)) {
    const AlgNum b = beta(ctx_);
    const AlgNum one = AlgNum::integer(ctx_, 1);
    if (kind_ == TransformKind::symmetric) {
        const AlgNum h = half(ctx_);
        domain_.push_back({-h, b * mpq_class(1, 2) - one});
        domain_.push_back({one - b * mpq_class(1, 2), h});
        alphabet_ = {-1, 0, 1};
        const AlgNum cut = AlgNum::beta_power(ctx_, -1) * mpq_class(1, 2);
        digit_cuts_ = {make_cut(-cut), make_cut(cut)};
    } else {
        const AlgNum inv = (b * mpq_class(2) - AlgNum::integer(ctx_, 2)).inverse();
        domain_.push_back({(AlgNum::integer(ctx_, 2) - b) * inv, b * inv});
        alphabet_ = {0, 1};
        digit_cuts_ = {make_cut(inv)};
    }
    for (const auto& iv : domain_) {
        ends_.push_back(make_cut(iv.lo));
        ends_.push_back(make_cut(iv.hi));
    }
}

TransformSpec::Cut TransformSpec::make_cut(AlgNum v) const {
    const Probe p = probe(v);
    return {std::move(v), p.approx, p.err};
}

TransformSpec::Probe TransformSpec::probe(const AlgNum& x) const {
    const auto& pw = ctx_->beta_powers_double();
    const auto& c = x.coeffs();
    double s = 0;
    double mag = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double t = c[i].get_d() * pw[i];
        s += t;
        mag += std::fabs(t);
    }
    if (!std::isfinite(mag)) {
        return {0, std::numeric_limits<double>::infinity()};
    }
    return {s, mag * 0x1p-40 + 1e-300};
}

int TransformSpec::compare_cut(const AlgNum& x, const Probe& p, const Cut& c) const {
    const double gap = p.approx - c.approx;
    if (std::fabs(gap) > p.err + c.err) {
        return gap > 0 ? 1 : -1;
    }
    return compare(x, c.value);
}

bool TransformSpec::inside(const AlgNum& x, const Probe& p) const {
    for (std::size_t i = 0; i < ends_.size(); i += 2) {
        if (compare_cut(x, p, ends_[i]) >= 0 && compare_cut(x, p, ends_[i + 1]) < 0) {
            return true;
        }
    }
    return false;
}

int TransformSpec::digit_at(const AlgNum& x, const Probe& p) const {
    if (kind_ == TransformKind::balanced) {
        return compare_cut(x, p, digit_cuts_[0]) >= 0 ? 1 : 0;
    }
    if (compare_cut(x, p, digit_cuts_[1]) >= 0) {
        return 1;
    }
    if (compare_cut(x, p, digit_cuts_[0]) < 0) {
        return -1;
    }
    return 0;
}

TransformSpec TransformSpec::symmetric(const ContextPtr& ctx) {
    return TransformSpec(TransformKind::symmetric, ctx);
}

TransformSpec TransformSpec::balanced(const ContextPtr& ctx) {
    return TransformSpec(TransformKind::balanced, ctx);
}

bool TransformSpec::contains(const AlgNum& x) const {
    return inside(x, probe(x));
}

bool TransformSpec::in_alphabet(int digit) const {
    return std::find(alphabet_.begin(), alphabet_.end(), digit) != alphabet_.end();
}

int TransformSpec::digit(const AlgNum& x) const {
    return digit_at(x, probe(x));
}

std::optional<int> TransformSpec::digit_if_inside(const AlgNum& x) const {
    const Probe p = probe(x);
    if (!inside(x, p)) {
        return std::nullopt;
    }
    return digit_at(x, p);
}

Step step(const TransformSpec& spec, const AlgNum& x) {
    const auto dg = spec.digit_if_inside(x);
    if (!dg) {
        throw Error(ErrorCode::domain_error, x.to_string() + " is outside the transformation domain");
    }
    AlgNum next = x.mul_beta_pow(1) - AlgNum::integer(x.context(), *dg);
    return {*dg, std::move(next)};
}

DigitWord expansion(const TransformSpec& spec, const AlgNum& x, std::size_t n) {
    DigitWord out;
    out.reserve(n);
    AlgNum cur = x;
    for (std::size_t i = 0; i < n; ++i) {
        Step s = step(spec, cur);
        out.push_back(s.digit);
        cur = std::move(s.next);
    }
    return out;
}

EventuallyPeriodic EventuallyPeriodic::canonical() const {
    EventuallyPeriodic r = *this;
    if (r.period.empty()) {
        throw Error(ErrorCode::invalid_parameter, "period must be nonempty");
    }
    const std::size_t len = r.period.size();
    for (std::size_t p = 1; p <= len; ++p) {
        if (len % p != 0) {
            continue;
        }
        bool ok = true;
        for (std::size_t i = p; i < len && ok; ++i) {
            ok = r.period[i] == r.period[i - p];
        }
        if (ok) {
            r.period.resize(p);
            break;
        }
    }
    while (!r.preperiod.empty() && r.preperiod.back() == r.period.back()) {
        r.preperiod.pop_back();
        std::rotate(r.period.rbegin(), r.period.rbegin() + 1, r.period.rend());
    }
    return r;
}

int EventuallyPeriodic::at(std::size_t i) const {
    if (i < preperiod.size()) {
        return preperiod[i];
    }
    return period[(i - preperiod.size()) % period.size()];
}

DigitWord EventuallyPeriodic::prefix(std::size_t n) const {
    DigitWord out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(at(i));
    }
    return out;
}

OrbitCycle orbit_cycle(const TransformSpec& spec, const AlgNum& x, std::size_t budget) {
    std::size_t used = 0;
    auto advance = [&](const AlgNum& v) {
        if (++used > budget) {
            throw Error(ErrorCode::budget_error, "orbit of " + x.to_string() + " exceeded the iteration budget");
        }
        return step(spec, v).next;
    };

    // Brent: find the cycle length first.
    std::size_t power = 1;
    std::size_t lam = 1;
    AlgNum tortoise = x;
    AlgNum hare = advance(x);
    while (tortoise != hare) {
        if (power == lam) {
            tortoise = hare;
            power *= 2;
            lam = 0;
        }
        hare = advance(hare);
        ++lam;
    }
    // Then the preperiod: hare runs lam steps ahead.
    tortoise = x;
    hare = x;
    for (std::size_t i = 0; i < lam; ++i) {
        hare = advance(hare);
    }
    std::size_t mu = 0;
    while (tortoise != hare) {
        tortoise = advance(tortoise);
        hare = advance(hare);
        ++mu;
    }

    const DigitWord digits = expansion(spec, x, mu + lam);
    EventuallyPeriodic e;
    e.preperiod.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(mu));
    e.period.assign(digits.begin() + static_cast<std::ptrdiff_t>(mu), digits.end());
    e = e.canonical();
    return {e.preperiod.size(), e.period.size(), e};
}

AlgNum value_of(const ContextPtr& ctx, const EventuallyPeriodic& digits) {
    if (digits.period.empty()) {
        throw Error(ErrorCode::invalid_parameter, "period must be nonempty");
    }
    AlgNum pre(ctx);
    int k = 0;
    for (int dg : digits.preperiod) {
        ++k;
        pre += AlgNum::beta_power(ctx, -k) * mpq_class(dg);
    }
    AlgNum per(ctx);
    int j = 0;
    for (int dg : digits.period) {
        ++j;
        per += AlgNum::beta_power(ctx, -j) * mpq_class(dg);
    }
    // (period block) / (1 - beta^-L), shifted past the preperiod.
    const AlgNum geometric = (AlgNum::integer(ctx, 1) - AlgNum::beta_power(ctx, -j)).inverse();
    return pre + (per * geometric).mul_beta_pow(-k);
}

AlgNum psi(const AlgNum& x) {
    const auto& ctx = x.context();
    const TransformSpec sym = TransformSpec::symmetric(ctx);
    if (!sym.contains(x)) {
        throw Error(ErrorCode::domain_error, x.to_string() + " is outside X_S");
    }
    const AlgNum inv = inv_beta_minus_one(ctx);
    if (sym.domain()[1].contains(x)) {
        return x * inv;
    }
    return (x + AlgNum::integer(ctx, 1)) * inv;
}

AlgNum psi_inverse(const AlgNum& t) {
    const auto& ctx = t.context();
    const TransformSpec bal = TransformSpec::balanced(ctx);
    if (!bal.contains(t)) {
        throw Error(ErrorCode::domain_error, t.to_string() + " is outside X_B");
    }
    const AlgNum scaled = t * (beta(ctx) - AlgNum::integer(ctx, 1));
    if (bal.digit(t) == 0) {
        return scaled;
    }
    return scaled - AlgNum::integer(ctx, 1);
}

bool digit_difference_law(const AlgNum& x, std::size_t n) {
    const auto& ctx = x.context();
    const DigitWord sym = expansion(TransformSpec::symmetric(ctx), x, n);
    const DigitWord bal = expansion(TransformSpec::balanced(ctx), psi(x), n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        if (sym[i] != bal[i + 1] - bal[i]) {
            return false;
        }
    }
    return true;
}

std::vector<AlgNum> periodic_points(const ContextPtr& ctx) {
    const int d = ctx->degree();
    const TransformSpec sym = TransformSpec::symmetric(ctx);
    std::vector<AlgNum> points;
    const unsigned masks = 1U << static_cast<unsigned>(d - 1);
    for (unsigned mask = 1; mask < masks; ++mask) {
        AlgNum v(ctx);
        for (int i = 2; i <= d; ++i) {
            if (mask & (1U << static_cast<unsigned>(i - 2))) {
                v += AlgNum::beta_power(ctx, -i);
            }
        }
        points.push_back(v);
        points.push_back(-v);
    }
    for (const auto& p : points) {
        const OrbitCycle c = orbit_cycle(sym, p);
        if (c.preperiod_len != 0 || d % static_cast<int>(c.period_len) != 0) {
            throw Error(ErrorCode::structure_error, p.to_string() + " is not purely periodic with period dividing d");
        }
    }
    std::sort(points.begin(), points.end(), AlgNumLess{});
    return points;
}

std::vector<AlgNum> periodic_points_bruteforce(const ContextPtr& ctx, int coeff_bound) {
    const int d = ctx->degree();
    const TransformSpec sym = TransformSpec::symmetric(ctx);
    std::vector<AlgNum> found;
    if (coeff_bound < 1) {
        return found;
    }
    const auto& pw = ctx->beta_powers_double();
    std::vector<int> c(static_cast<std::size_t>(d), -coeff_bound);
    while (true) {
        double approx = 0;
        bool zero = true;
        for (int i = 0; i < d; ++i) {
            approx += c[i] * pw[i];
            zero = zero && c[i] == 0;
        }
        // Cheap rejection far from [-1/2, 1/2); the exact test decides the rest.
        if (!zero && std::fabs(approx) < 0.5 + 1e-6) {
            std::vector<mpq_class> q(c.begin(), c.end());
            AlgNum x(ctx, std::move(q));
            if (sym.contains(x) && orbit_cycle(sym, x).preperiod_len == 0) {
                found.push_back(std::move(x));
            }
        }
        int i = 0;
        while (i < d && c[i] == coeff_bound) {
            c[i] = -coeff_bound;
            ++i;
        }
        if (i == d) {
            break;
        }
        ++c[i];
    }
    std::sort(found.begin(), found.end(), AlgNumLess{});
    return found;
}

AlgNum invariant_density(const ContextPtr& ctx, int k) {
    AlgNum c(ctx);
    for (int i = 1; i <= k; ++i) {
        c += AlgNum::beta_power(ctx, -i);
    }
    return c;
}

bool verify_invariant_measure(const ContextPtr& ctx) {
    const int d = ctx->degree();
    std::vector<AlgNum> c;
    for (int k = 0; k <= d; ++k) {
        c.push_back(invariant_density(ctx, k));
    }
    const AlgNum inv_beta = AlgNum::beta_power(ctx, -1);

    // Closed form of the functional equation.
    if (!(c[1] - inv_beta * c[d]).is_zero()) {
        return false;
    }
    for (int j = 2; j <= d; ++j) {
        if (!(c[j] - inv_beta * (c[j - 1] + c[d])).is_zero()) {
            return false;
        }
    }

    // The same identity, with the preimage pieces taken from the automaton:
    // f(x) = beta^-1 * sum of f over the pieces that map onto x's piece.
    const IntervalAutomaton aut = build_automaton(TransformSpec::symmetric(ctx));
    const auto& states = aut.states();
    for (std::size_t s = 0; s < states.size(); ++s) {
        AlgNum incoming(ctx);
        for (const auto& t : aut.transitions()) {
            if (t.to == s) {
                incoming += c[static_cast<std::size_t>(std::abs(states[t.from].label))];
            }
        }
        const AlgNum own = c[static_cast<std::size_t>(std::abs(states[s].label))];
        if (!(own - inv_beta * incoming).is_zero()) {
            return false;
        }
        if (sign(own) <= 0) {
            return false;
        }
    }
    return true;
}

ClassCharacterization characterize_class(const AlgNum& x) {
    const auto& ctx = x.context();
    const int d = ctx->degree();
    const TransformSpec sym = TransformSpec::symmetric(ctx);
    if (x.is_zero() || !sym.contains(x)) {
        throw Error(ErrorCode::domain_error, x.to_string() + " must be a nonzero point of X_S");
    }
    const int sx = sign(x);
    const AlgNum magnitude = sx < 0 ? -x : x;
    const AlgNum t = magnitude * inv_beta_minus_one(ctx);
    const OrbitCycle cyc = orbit_cycle(TransformSpec::balanced(ctx), t);
    if (d % static_cast<int>(cyc.period_len) != 0) {
        throw Error(ErrorCode::structure_error,
                    "balanced period of " + t.to_string() + " has length " + std::to_string(cyc.period_len));
    }
    int block_sum = 0;
    for (int dg : cyc.expansion.period) {
        block_sum += dg;
    }
    block_sum *= d / static_cast<int>(cyc.period_len);

    ClassCharacterization out;
    out.period_sum = block_sum;
    out.balanced_expansion = cyc.expansion;
    if (sx > 0 || block_sum == d - 1) {
        out.from_period = make_residue(block_sum, d);
    } else {
        out.from_period = make_residue(d - 1 - block_sum, d);
    }
    out.from_coefficients = congruence_class(x);
    return out;
}

std::vector<AlgNum> sample_lattice_points(const ContextPtr& ctx, std::size_t count, int coeff_bound,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-coeff_bound, coeff_bound);
    std::vector<AlgNum> out;
    out.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        std::vector<mpq_class> c;
        for (int i = 0; i < ctx->degree(); ++i) {
            c.emplace_back(dist(rng));
        }
        out.emplace_back(ctx, std::move(c));
    }
    return out;
}

std::vector<AlgNum> sample_domain_points(const ContextPtr& ctx, std::size_t count, int coeff_bound,
                                         std::uint64_t seed) {
    if (coeff_bound < 1) {
        throw Error(ErrorCode::invalid_parameter, "coefficient bound must be positive");
    }
    const TransformSpec sym = TransformSpec::symmetric(ctx);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(-coeff_bound, coeff_bound);
    const auto& pw = ctx->beta_powers_double();
    std::vector<AlgNum> out;
    std::vector<int> c(static_cast<std::size_t>(ctx->degree()));
    for (std::size_t tries = 0; out.size() < count; ++tries) {
        if (tries > 1000 * count + 100000) {
            throw Error(ErrorCode::budget_error, "too few lattice points in X_S for this coefficient bound");
        }
        double approx = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            c[i] = dist(rng);
            approx += c[i] * pw[i];
        }
        if (std::fabs(approx) > 0.5 + 1e-6) {
            continue;
        }
        AlgNum x(ctx, std::vector<mpq_class>(c.begin(), c.end()));
        if (sym.contains(x)) {
            out.push_back(std::move(x));
        }
    }
    return out;
}

std::string compact_digits(const DigitWord& word) {
    std::string s;
    for (int dg : word) {
        if (dg == -1) {
            s.push_back('T');
        } else if (dg >= 0 && dg <= 9) {
            s.push_back(static_cast<char>('0' + dg));
        } else {
            s += "(" + std::to_string(dg) + ")";
        }
    }
    return s;
}

} // namespace bonacci
