#include <random>
#include <set>

#include "bonacci/automaton.hpp"
#include "bonacci/dynamics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bonacci;

namespace {

AlgNum parse(const ContextPtr& ctx, const char* text) {
    return parse_algnum(ctx, text);
}

template <class F>
ErrorCode error_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an exception");
    return ErrorCode::spec_error;
}

} // namespace

TEST_CASE("symmetric and balanced steps") {
    auto ctx = FieldContext::make(3);
    const auto sym = TransformSpec::symmetric(ctx);
    const auto bal = TransformSpec::balanced(ctx);

    const AlgNum x = parse(ctx, "b^-2 + b^-3");
    Step s = step(sym, x);
    CHECK(s.digit == 1);
    CHECK(s.next == -AlgNum::beta_power(ctx, -3));
    CHECK(oracle::float_symmetric_digits(oracle::value(x), 3, 1)[0] == 1);

    s = step(sym, -AlgNum::beta_power(ctx, -3));
    CHECK(s.digit == 0);
    CHECK(s.next == -AlgNum::beta_power(ctx, -2));

    s = step(bal, AlgNum::beta_power(ctx, -1));
    CHECK(s.digit == 0);
    CHECK(s.next == AlgNum::integer(ctx, 1));
    CHECK(bal.contains(AlgNum::integer(ctx, 1)));

    CHECK(error_of([&] { step(sym, AlgNum::integer(ctx, 1)); }) == ErrorCode::domain_error);
    CHECK(error_of([&] { step(sym, AlgNum(ctx)); }) == ErrorCode::domain_error);
    CHECK(error_of([&] { step(sym, AlgNum::rational(ctx, mpq_class(1, 2))); }) == ErrorCode::domain_error);
    CHECK_NOTHROW(step(sym, AlgNum::rational(ctx, mpq_class(-1, 2))));
}

TEST_CASE("digit rule keeps -1/2 inside the domain") {
    // floor(beta*x - 1/2) would give -2 at x = -1/2
    for (int d = 2; d <= 6; ++d) {
        auto ctx = FieldContext::make(d);
        const auto sym = TransformSpec::symmetric(ctx);
        Step s = step(sym, AlgNum::rational(ctx, mpq_class(-1, 2)));
        CHECK(s.digit == -1);
        CHECK(sym.contains(s.next));
    }
}

TEST_CASE("expansions match floating simulation") {
    auto ctx = FieldContext::make(3);
    const auto sym = TransformSpec::symmetric(ctx);
    const auto bal = TransformSpec::balanced(ctx);
    CHECK(expansion(sym, parse(ctx, "b^-2 + b^-3"), 6) == DigitWord{1, 0, -1, 1, 0, -1});
    CHECK(expansion(sym, parse(ctx, "b^-3"), 3) == DigitWord{0, 1, -1});
    CHECK(expansion(bal, parse(ctx, "b^-1"), 6) == DigitWord{0, 1, 1, 0, 1, 1});
    CHECK(expansion(sym, parse(ctx, "b^-3"), 0).empty());

    for (int d = 2; d <= 6; ++d) {
        auto c = FieldContext::make(d);
        const auto s = TransformSpec::symmetric(c);
        const auto b = TransformSpec::balanced(c);
        for (const auto& x : sample_domain_points(c, 30, 3, 100 + d)) {
            const long double v = oracle::value(x);
            CHECK(expansion(s, x, 12) == oracle::float_symmetric_digits(v, d, 12));
            const AlgNum t = psi(x);
            CHECK(expansion(b, t, 12) == oracle::float_balanced_digits(oracle::value(t), d, 12));
        }
    }
}

TEST_CASE("eventually periodic canonical form") {
    EventuallyPeriodic e{{1, 0, 1}, {0, 1, 0, 1}};
    auto c = e.canonical();
    CHECK(c.period == DigitWord{1, 0});
    CHECK(c.preperiod.empty());
    CHECK(c.prefix(7) == e.prefix(7));

    EventuallyPeriodic f{{1, 1, 1}, {1}};
    CHECK(f.canonical() == EventuallyPeriodic{{}, {1}});
    EventuallyPeriodic g{{0, 1}, {1, 0}};
    CHECK(g.canonical() == g);
    EventuallyPeriodic h{{0, 1, 0}, {1, 0}};
    CHECK(h.canonical() == EventuallyPeriodic{{}, {0, 1}});
    CHECK(h.at(0) == 0);
    CHECK(h.at(4) == 0);
    CHECK(h.at(5) == 1);
}

TEST_CASE("orbit_cycle") {
    auto ctx = FieldContext::make(3);
    const auto sym = TransformSpec::symmetric(ctx);
    OrbitCycle c = orbit_cycle(sym, AlgNum::beta_power(ctx, -3));
    CHECK(c.preperiod_len == 0);
    CHECK(c.period_len == 3);
    CHECK(c.expansion.period == DigitWord{0, 1, -1});

    c = orbit_cycle(sym, -AlgNum::beta_power(ctx, -2));
    CHECK(c.preperiod_len == 0);
    CHECK(c.period_len == 3);
    CHECK(c.expansion.period == DigitWord{-1, 1, 0});

    CHECK(error_of([&] { orbit_cycle(sym, AlgNum::integer(ctx, 2)); }) == ErrorCode::domain_error);
    CHECK(error_of([&] { orbit_cycle(sym, parse(ctx, "1/1000*b^-2"), 5); }) == ErrorCode::domain_error);
    CHECK(error_of([&] { orbit_cycle(sym, parse(ctx, "1001/1000*b^-2"), 5); }) == ErrorCode::budget_error);

    // value_of inverts orbit_cycle
    for (const auto& x : sample_domain_points(ctx, 50, 3, 5)) {
        const auto cyc = orbit_cycle(sym, x);
        CHECK(value_of(ctx, cyc.expansion) == x);
    }
}

TEST_CASE("psi") {
    auto ctx = FieldContext::make(3);
    const AlgNum inv = (AlgNum::beta_power(ctx, 1) - AlgNum::integer(ctx, 1)).inverse();
    CHECK(psi(parse(ctx, "b^-2 + b^-3")) == AlgNum::beta_power(ctx, -1));
    CHECK(psi(AlgNum::rational(ctx, mpq_class(-1, 2))) == inv * mpq_class(1, 2));
    const AlgNum right = parse(ctx, "b^-3");
    CHECK(psi(right) == right * inv);
    CHECK(psi_inverse(psi(right)) == right);
    CHECK(error_of([&] { psi(AlgNum(ctx)); }) == ErrorCode::domain_error);
}

TEST_CASE("digit_difference_law") {
    auto ctx = FieldContext::make(3);
    CHECK(digit_difference_law(parse(ctx, "b^-2 + b^-3"), 5));
    CHECK(digit_difference_law(parse(ctx, "b^-3"), 5));
    CHECK(digit_difference_law(parse(ctx, "b^-3"), 0));
}

TEST_CASE("conjugacy holds exactly on random lattice points") {
    for (int d = 3; d <= 5; ++d) {
        auto ctx = FieldContext::make(d);
        const auto sym = TransformSpec::symmetric(ctx);
        const auto bal = TransformSpec::balanced(ctx);
        for (const auto& x : sample_domain_points(ctx, 60, 3, 17 * d)) {
            CHECK(psi(step(sym, x).next) == step(bal, psi(x)).next);
            CHECK(digit_difference_law(x, 60));
            const auto cs = orbit_cycle(sym, x);
            const auto cb = orbit_cycle(bal, psi(x));
            CHECK(cs.period_len == cb.period_len);
            CHECK(cs.expansion.purely_periodic() == cb.expansion.purely_periodic());
            CHECK(d % static_cast<int>(cs.period_len) == 0);
        }
    }
}

TEST_CASE("domain closure over long orbits") {
    std::size_t steps = 0;
    for (int d = 2; d <= 6; ++d) {
        auto ctx = FieldContext::make(d);
        const auto sym = TransformSpec::symmetric(ctx);
        const auto bal = TransformSpec::balanced(ctx);
        // rational points have long, non-repeating-looking orbits
        for (const auto& x : sample_domain_points(ctx, 10, 3, 900 + d)) {
            AlgNum cur = x * mpq_class(7, 9);
            if (!sym.contains(cur)) {
                continue;
            }
            AlgNum t = psi(cur);
            for (int i = 0; i < 200; ++i) {
                cur = step(sym, cur).next;
                t = step(bal, t).next;
                REQUIRE(sym.contains(cur));
                REQUIRE(bal.contains(t));
                ++steps;
            }
        }
    }
    CHECK(steps > 5000);
}

TEST_CASE("automaton structure") {
    auto ctx = FieldContext::make(3);
    const auto sym_aut = build_automaton(TransformSpec::symmetric(ctx));
    CHECK(sym_aut.states().size() == 6);
    std::set<int> labels;
    for (const auto& s : sym_aut.states()) {
        labels.insert(s.label);
    }
    CHECK(labels == std::set<int>{-3, -2, -1, 1, 2, 3});
    for (int sgn : {1, -1}) {
        const std::size_t top = *sym_aut.state_of_label(3 * sgn);
        std::set<int> img;
        for (auto t : sym_aut.successors(top)) {
            img.insert(sym_aut.states()[t].label);
        }
        CHECK(img == std::set<int>{-3 * sgn, -2 * sgn, -sgn});
        for (int k = 1; k < 3; ++k) {
            const auto succ = sym_aut.successors(*sym_aut.state_of_label(k * sgn));
            REQUIRE(succ.size() == 1);
            CHECK(sym_aut.states()[succ[0]].label == (k + 1) * sgn);
        }
    }
    const auto bal_aut = build_automaton(TransformSpec::balanced(ctx));
    CHECK(bal_aut.states().size() == 6);
    CHECK(same_shape(sym_aut, bal_aut));
    // U_k = psi(Y_k)
    for (const auto& s : sym_aut.states()) {
        const auto& u = bal_aut.states()[*bal_aut.state_of_label(s.label)];
        CHECK(psi(s.piece.lo) == u.piece.lo);
    }

    auto ctx2 = FieldContext::make(2);
    CHECK(build_automaton(TransformSpec::symmetric(ctx2)).states().size() == 4);
    for (int d = 2; d <= 8; ++d) {
        auto c = FieldContext::make(d);
        const auto a = build_automaton(TransformSpec::symmetric(c));
        const auto b = build_automaton(TransformSpec::balanced(c));
        CHECK(a.states().size() == static_cast<std::size_t>(2 * d));
        CHECK(same_shape(a, b));
    }
}

TEST_CASE("admissibility") {
    auto ctx = FieldContext::make(3);
    const auto sym_aut = build_automaton(TransformSpec::symmetric(ctx));
    const auto bal_aut = build_automaton(TransformSpec::balanced(ctx));
    CHECK(is_admissible(sym_aut, {1, 0, -1, 1, 0, -1}));
    CHECK(is_admissible(sym_aut, {}));
    CHECK_FALSE(is_admissible(sym_aut, {1, 1}));
    CHECK_FALSE(is_admissible(sym_aut, {0, 0, 0}));
    CHECK_FALSE(is_admissible(bal_aut, {0, 0, 0, 0}));
    CHECK_FALSE(is_admissible(bal_aut, {1, 1, 1, 1}));
    CHECK(is_admissible(bal_aut, {0, 1, 1, 0, 1, 1}));
    CHECK(error_of([&] { is_admissible(bal_aut, {0, -1}); }) == ErrorCode::alphabet_mismatch);
    CHECK(error_of([&] { is_admissible(sym_aut, {2}); }) == ErrorCode::alphabet_mismatch);

    for (int d = 3; d <= 5; ++d) {
        auto c = FieldContext::make(d);
        const auto sym = TransformSpec::symmetric(c);
        const auto bal = TransformSpec::balanced(c);
        const auto sa = build_automaton(sym);
        const auto ba = build_automaton(bal);
        for (const auto& x : sample_domain_points(c, 40, 3, 3 * d)) {
            const DigitWord ws = expansion(sym, x, 40);
            const DigitWord wb = expansion(bal, psi(x), 40);
            for (std::size_t n = 0; n <= ws.size(); n += 7) {
                CHECK(is_admissible(sa, DigitWord(ws.begin(), ws.begin() + static_cast<long>(n))));
                CHECK(is_admissible(ba, DigitWord(wb.begin(), wb.begin() + static_cast<long>(n))));
            }
            CHECK(is_admissible(sa, ws));
            CHECK(is_admissible(ba, wb));
            // classify agrees with the symbolic state sequence
            CHECK(sa.states()[sa.classify(x)].digit == ws[0]);
        }
    }
}

TEST_CASE("periodic points") {
    auto ctx = FieldContext::make(3);
    const auto p = periodic_points(ctx);
    CHECK(p.size() == 6);
    std::vector<AlgNum> expected = {parse(ctx, "b^-3"), parse(ctx, "b^-2"), parse(ctx, "b^-2 + b^-3")};
    for (const auto& e : std::vector<AlgNum>(expected)) {
        expected.push_back(-e);
    }
    std::sort(expected.begin(), expected.end(), AlgNumLess{});
    CHECK(p == expected);

    auto ctx2 = FieldContext::make(2);
    const auto p2 = periodic_points(ctx2);
    REQUIRE(p2.size() == 2);
    CHECK(p2[0] == -AlgNum::beta_power(ctx2, -2));
    CHECK(p2[1] == AlgNum::beta_power(ctx2, -2));

    CHECK(periodic_points(FieldContext::make(4)).size() == 14);
}

TEST_CASE("periodic points match the exhaustive oracle") {
    for (int d = 2; d <= 4; ++d) {
        auto ctx = FieldContext::make(d);
        CHECK(periodic_points_bruteforce(ctx, 4) == periodic_points(ctx));
    }
    CHECK(periodic_points_bruteforce(FieldContext::make(3), 0).empty());
}

TEST_CASE("invariant measure") {
    for (int d = 2; d <= 8; ++d) {
        CAPTURE(d);
        CHECK(verify_invariant_measure(FieldContext::make(d)));
    }
    auto ctx = FieldContext::make(3);
    for (int k = 1; k < 3; ++k) {
        CHECK(compare(invariant_density(ctx, k), invariant_density(ctx, k + 1)) < 0);
    }
    CHECK(invariant_density(ctx, 3) == AlgNum::integer(ctx, 1));
}

TEST_CASE("class characterization from balanced periods") {
    auto ctx = FieldContext::make(3);
    auto c = characterize_class(parse(ctx, "b^-2 + b^-3"));
    CHECK(c.balanced_expansion.period == DigitWord{0, 1, 1});
    CHECK(c.period_sum == 2);
    CHECK(c.from_period.rep == 2);
    CHECK(c.from_coefficients.rep == 2);

    c = characterize_class(parse(ctx, "b^-3"));
    CHECK(c.period_sum == 1);
    CHECK(c.from_period.rep == 1);

    // -b^-3 is in class [1] (= [-1] mod 2); |x|/(beta-1) has period (001).
    c = characterize_class(-parse(ctx, "b^-3"));
    CHECK(c.balanced_expansion.period == DigitWord{0, 0, 1});
    CHECK(c.period_sum == 1);
    CHECK(c.from_period.rep == 1);
    CHECK(c.from_coefficients.rep == 1);

    CHECK(error_of([&] { characterize_class(AlgNum(ctx)); }) == ErrorCode::domain_error);

    for (int d = 3; d <= 5; ++d) {
        auto cd = FieldContext::make(d);
        for (const auto& x : sample_domain_points(cd, 40, 3, 1000 + d)) {
            const auto r = characterize_class(x);
            CHECK(r.from_period == r.from_coefficients);
        }
    }
}
