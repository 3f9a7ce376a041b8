#include <set>

#include "bonacci/tiling.hpp"
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

// y = beta^-n x + sum D_i beta^-i for a digit word D_1..D_n.
AlgNum from_path(const AlgNum& x, const DigitWord& path) {
    const auto& ctx = x.context();
    AlgNum y = x.mul_beta_pow(-static_cast<int>(path.size()));
    for (std::size_t i = 0; i < path.size(); ++i) {
        y += AlgNum::beta_power(ctx, -static_cast<int>(i + 1)) * mpq_class(path[i]);
    }
    return y;
}

// All words in {-1,0,1}^n whose y lies in X_S and expands with that word.
std::vector<DigitWord> exhaustive_paths(const AlgNum& x, int n) {
    const TransformSpec sym = TransformSpec::symmetric(x.context());
    std::vector<DigitWord> out;
    DigitWord w(static_cast<std::size_t>(n), -1);
    while (true) {
        const AlgNum y = from_path(x, w);
        if (sym.contains(y) && expansion(sym, y, w.size()) == w) {
            out.push_back(w);
        }
        std::size_t i = w.size();
        while (i > 0 && w[i - 1] == 1) {
            w[--i] = -1;
        }
        if (i == 0) {
            break;
        }
        ++w[i - 1];
    }
    return out;
}

EventuallyPeriodic sym_expansion(const AlgNum& x) {
    return orbit_cycle(TransformSpec::symmetric(x.context()), x).expansion;
}

} // namespace

TEST_CASE("preimages") {
    auto ctx = FieldContext::make(3);
    const auto sym = TransformSpec::symmetric(ctx);
    const AlgNum x = -AlgNum::beta_power(ctx, -3);
    const auto pre = preimages(x);
    CHECK(pre.size() >= 1);
    CHECK(pre.size() <= 3);
    CHECK(std::find(pre.begin(), pre.end(), parse(ctx, "b^-2 + b^-3")) != pre.end());
    for (int d = 2; d <= 5; ++d) {
        auto c = FieldContext::make(d);
        const auto s = TransformSpec::symmetric(c);
        for (const auto& p : sample_domain_points(c, 40, 3, 11 * d)) {
            for (const auto& y : preimages(p)) {
                CHECK(step(s, y).next == p);
            }
        }
    }
    CHECK(error_of([&] { preimages(AlgNum::integer(ctx, 1)); }) == ErrorCode::domain_error);
}

TEST_CASE("tile approximation") {
    auto ctx = FieldContext::make(3);
    const AlgNum x = AlgNum::beta_power(ctx, -3);

    const TileApprox t0 = tile_approx(x, 0);
    REQUIRE(t0.points.size() == 1);
    CHECK(abs(t0.points[0].coords[0] - embed(x).coords[0]) <= t0.points[0].error_radius + embed(x).error_radius);
    CHECK(t0.layer.rep == 1);
    CHECK(t0.expansion.period == DigitWord{0, 1, -1});

    const TileApprox t8 = tile_approx(x, 8);
    const auto paths = exhaustive_paths(x, 8);
    CHECK(t8.paths == paths); // exhaustive search lists words in lexicographic order
    CHECK(t8.points.size() == paths.size());

    const auto sym = TransformSpec::symmetric(ctx);
    for (std::size_t i = 0; i < t8.points.size(); ++i) {
        AlgNum y = from_path(x, t8.paths[i]);
        const EmbeddedPoint direct = embed(y.mul_beta_pow(8));
        CHECK(t8.points[i].error_radius <= mpq_class(1) / mpq_class(mpz_class(1) << default_precision_bits));
        for (std::size_t c = 0; c < direct.coords.size(); ++c) {
            mpq_class gap = t8.points[i].coords[c] - direct.coords[c];
            CHECK(abs(gap) <= t8.points[i].error_radius + direct.error_radius);
        }
        for (int n = 0; n < 8; ++n) {
            y = step(sym, y).next;
        }
        CHECK(y == x);
    }

    std::size_t prev = 1;
    for (int n = 1; n <= 10; ++n) {
        const std::size_t count = tile_approx(x, n, 64).points.size();
        CHECK(count > prev);
        prev = count;
    }

    const TileApprox t14 = tile_approx(x, 14, 64);
    CHECK(t14.points.size() > 1000);
    CHECK(t14.points.size() < 10000);

    CHECK(error_of([&] { tile_approx(AlgNum::integer(ctx, 1), 3); }) == ErrorCode::domain_error);
    CHECK(error_of([&] { tile_approx(x, -1); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("tile of -x is the reflected tile") {
    for (int d = 3; d <= 4; ++d) {
        auto ctx = FieldContext::make(d);
        for (const auto& x : sample_domain_points(ctx, 4, 2, 3 + d)) {
            const TileApprox a = tile_approx(x, 6, 96);
            const TileApprox b = tile_approx(-x, 6, 96);
            REQUIRE(a.points.size() == b.points.size());
            for (std::size_t i = 0; i < a.points.size(); ++i) {
                DigitWord neg = a.paths[i];
                for (int& dg : neg) {
                    dg = -dg;
                }
                const auto j = static_cast<std::size_t>(
                    std::find(b.paths.begin(), b.paths.end(), neg) - b.paths.begin());
                REQUIRE(j < b.paths.size());
                const auto pa = a.points[i].approx();
                const auto pb = b.points[j].approx();
                for (std::size_t c = 0; c < pa.size(); ++c) {
                    CHECK(std::fabs(pa[c] + pb[c]) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("find_prefix_k") {
    auto ctx = FieldContext::make(3);
    TileOracle oracle(ctx);
    CHECK(oracle.find_prefix_k(AlgNum(ctx)) == 9);
    CHECK(find_prefix_k(AlgNum(ctx)) == 9);

    // At k = 9 the point y = -b^-2 loses its first digit: beta*y < -1/2 but
    // beta*(y + b^-9 z) > -1/2. The next candidate k = 12 works.
    const AlgNum z = parse(ctx, "1 + b^3");
    const AlgNum y = -AlgNum::beta_power(ctx, -2);
    const long double shifted = oracle::value(y + z.mul_beta_pow(-9));
    CHECK(oracle::float_symmetric_digits(oracle::value(y), 3, 1)[0] == -1);
    CHECK(oracle::float_symmetric_digits(shifted, 3, 1)[0] == 0);
    CHECK(oracle.find_prefix_k(z) == 12);

    // postcondition, checked against floating digits
    for (int d = 3; d <= 4; ++d) {
        auto c = FieldContext::make(d);
        TileOracle o(c);
        for (auto zz : sample_lattice_points(c, 20, 3, 40 + d)) {
            if (sign(zz) < 0) {
                zz = -zz;
            }
            const int k = o.find_prefix_k(zz);
            CHECK(k >= d * d);
            CHECK((k - d * d) % d == 0);
            for (const auto& p : o.periodic()) {
                const int len = static_cast<int>(orbit_cycle(TransformSpec::symmetric(c), p).period_len);
                CHECK(oracle::float_symmetric_digits(oracle::value(p), d, len) ==
                      oracle::float_symmetric_digits(oracle::value(p + zz.mul_beta_pow(-k)), d, len));
            }
        }
    }

    oracle.set_cap(8);
    CHECK(error_of([&] { oracle.find_prefix_k(z); }) == ErrorCode::budget_error);
    CHECK(error_of([&] { find_prefix_k(-z); }) == ErrorCode::domain_error);
}

TEST_CASE("tiles at the witness points") {
    auto ctx = FieldContext::make(3);
    auto tiles = tiles_containing(parse(ctx, "1 + b^3"));
    std::vector<AlgNum> expected{AlgNum::beta_power(ctx, -3), parse(ctx, "b^-2 + b^-3")};
    CHECK(tiles == expected);
    CHECK(sym_expansion(tiles[0]) == EventuallyPeriodic{{}, {0, 1, -1}});
    CHECK(sym_expansion(tiles[1]) == EventuallyPeriodic{{}, {1, 0, -1}});
    CHECK(layer_of(tiles[0]).rep == 1);
    CHECK(layer_of(tiles[1]).rep == 2);

    CHECK(tiles_containing(AlgNum(ctx)) == periodic_points(ctx));

    auto ctx4 = FieldContext::make(4);
    auto t4 = tiles_containing(parse(ctx4, "1 + b^4 + b^8"));
    REQUIRE(t4.size() == 3);
    std::set<int> layers;
    for (const auto& t : t4) {
        layers.insert(layer_of(t).rep);
    }
    CHECK(layers == std::set<int>{1, 2, 3});

    for (int d = 3; d <= 5; ++d) {
        auto c = FieldContext::make(d);
        const Witness w = canonical_witness(c);
        REQUIRE(w.expected.size() == static_cast<std::size_t>(d - 1));
        const auto ts = tiles_containing(w.z);
        REQUIRE(ts.size() == w.expected.size());
        std::vector<bool> seen(w.expected.size(), false);
        for (const auto& t : ts) {
            const int h = layer_of(t).rep;
            CHECK(sym_expansion(t) == w.expected[static_cast<std::size_t>(h - 1)]);
            CHECK_FALSE(seen[static_cast<std::size_t>(h - 1)]);
            seen[static_cast<std::size_t>(h - 1)] = true;
        }
    }
    const Witness w3 = canonical_witness(ctx);
    CHECK(w3.z == parse(ctx, "1 + b^3"));
    CHECK(w3.expected[0].period == DigitWord{0, 1, -1});
    CHECK(w3.expected[1].period == DigitWord{1, 0, -1});
    const Witness w4 = canonical_witness(ctx4);
    CHECK(w4.expected[0].period == DigitWord{0, 0, 1, -1});
    CHECK(w4.expected[1].period == DigitWord{0, 1, 0, -1});
    CHECK(w4.expected[2].period == DigitWord{1, 0, 0, -1});
    CHECK(error_of([&] { canonical_witness(FieldContext::make(2)); }) == ErrorCode::invalid_parameter);
}

TEST_CASE("tiles_containing is odd") {
    for (int d = 3; d <= 4; ++d) {
        auto ctx = FieldContext::make(d);
        TileOracle o(ctx);
        for (const auto& z : sample_lattice_points(ctx, 30, 3, 70 + d)) {
            auto pos = o.tiles_containing(z).tiles;
            auto neg = o.tiles_containing(-z).tiles;
            for (auto& t : neg) {
                t = -t;
            }
            std::sort(neg.begin(), neg.end(), AlgNumLess{});
            CHECK(pos == neg);
        }
    }
}

TEST_CASE("layers") {
    auto ctx = FieldContext::make(3);
    CHECK(layer_of(AlgNum::beta_power(ctx, -3)).rep == 1);
    CHECK(layer_of(parse(ctx, "b^-2 + b^-3")).rep == 2);
    CHECK(layer_of(-AlgNum::beta_power(ctx, -3)).rep == 2);
    auto ctx2 = FieldContext::make(2);
    CHECK(layer_of(AlgNum::beta_power(ctx2, -2)).rep == 1);
    CHECK(layer_of(-AlgNum::beta_power(ctx2, -2)).rep == 1);
    CHECK(error_of([&] { layer_of(AlgNum::integer(ctx, 1)); }) == ErrorCode::domain_error);
    CHECK(error_of([&] { layer_of(parse(ctx, "1/3*b^-2")); }) == ErrorCode::not_integral);

    // fibres are the sets ([h] n right) u ([h-d] n left)
    for (int d = 3; d <= 5; ++d) {
        auto c = FieldContext::make(d);
        const AlgNum right_lo = AlgNum::integer(c, 1) - AlgNum::beta_power(c, 1) * mpq_class(1, 2);
        for (const auto& x : sample_domain_points(c, 500, 3, 500 + d)) {
            const int h = layer_of(x).rep;
            const bool right = compare(x, right_lo) >= 0;
            const ResidueClass want = right ? make_residue(h, d) : make_residue(h - d, d);
            CHECK(congruence_class(x) == want);
        }
        // orbits of periodic points stay in one layer
        const auto sym = TransformSpec::symmetric(c);
        for (const auto& y : periodic_points(c)) {
            const ResidueClass h = layer_of(y);
            AlgNum w = y;
            for (int n = 0; n < d; ++n) {
                w = step(sym, w).next;
                CHECK(layer_of(w) == h);
            }
        }
    }
}

TEST_CASE("covering report") {
    auto ctx = FieldContext::make(3);
    const auto zero = TileOracle(ctx).tiles_containing(AlgNum(ctx));
    CHECK(zero.tiles.size() == 6);
    std::map<int, int> per_layer;
    for (const auto& t : zero.tiles) {
        ++per_layer[layer_of(t).rep];
    }
    CHECK(per_layer == std::map<int, int>{{1, 3}, {2, 3}});

    for (int d = 3; d <= 5; ++d) {
        CAPTURE(d);
        const CoveringReport rep = covering_report(d, 60, 3, 9);
        CHECK(rep.ok());
        CHECK(rep.samples.size() == 60);
        CHECK(rep.min_count >= static_cast<std::size_t>(d - 1));
        std::size_t total = 0;
        for (const auto& [count, freq] : rep.histogram) {
            total += freq;
        }
        CHECK(total == 60);
        for (const auto& s : rep.samples) {
            CHECK(s.all_layers);
            CHECK(s.raw_count == periodic_points(FieldContext::make(d)).size());
        }
    }
    const CoveringReport a = covering_report(3, 20, 3, 5);
    const CoveringReport b = covering_report(3, 20, 3, 5);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].z == b.samples[i].z);
        CHECK(a.samples[i].tiles == b.samples[i].tiles);
    }
    CHECK(error_of([&] { covering_report(3, 0); }) == ErrorCode::invalid_parameter);
}
