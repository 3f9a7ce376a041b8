#include "bonacci/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bonacci {

std::vector<AlgNum> preimages(const AlgNum& x) {
    return preimages(TransformSpec::symmetric(x.context()), x);
}

std::vector<AlgNum> preimages(const TransformSpec& sym, const AlgNum& x) {
    const auto& ctx = x.context();
    if (!sym.contains(x)) {
        throw Error(ErrorCode::domain_error, x.to_string() + " is outside X_S");
    }
    std::vector<AlgNum> out;
    for (int dg : sym.alphabet()) {
        AlgNum y = (x + AlgNum::integer(ctx, dg)).mul_beta_pow(-1);
        if (sym.digit_if_inside(y) == dg) {
            out.push_back(std::move(y));
        }
    }
    return out;
}

ResidueClass layer_of(const AlgNum& x) {
    const auto& ctx = x.context();
    const TransformSpec sym = TransformSpec::symmetric(ctx);
    if (x.is_zero() || !sym.contains(x)) {
        throw Error(ErrorCode::domain_error, x.to_string() + " must be a nonzero point of X_S");
    }
    const ResidueClass c = congruence_class(x);
    if (sign(x) > 0) {
        return c;
    }
    return make_residue(c.rep + 1, ctx->degree());
}

TileApprox tile_approx(const AlgNum& x, int depth, int precision_bits) {
    if (depth < 0) {
        throw Error(ErrorCode::invalid_parameter, "depth must be nonnegative");
    }
    const auto& ctx = x.context();
    const TransformSpec sym = TransformSpec::symmetric(ctx);
    if (!sym.contains(x)) {
        throw Error(ErrorCode::domain_error, x.to_string() + " is outside X_S");
    }
    // Phi(beta^{m+1} y') = Phi(beta^m y) + D Phi(beta^m) for y' = (y + D)/beta,
    // so each node carries its embedded point.
    int extra = 1;
    while ((1 << (extra - 1)) < depth + 2) {
        ++extra;
    }
    const int bits = precision_bits + extra;
    std::vector<EmbeddedPoint> powers;
    for (int m = 0; m < depth; ++m) {
        powers.push_back(embed(AlgNum::beta_power(ctx, m), bits));
    }
    const EmbeddedPoint origin = embed(x, bits);
    const std::size_t dim = origin.coords.size();

    // Offsets from Phi(x) are kept as integers over one common denominator;
    // the last slot carries the error radius.
    mpz_class scale = 1;
    for (const auto& pw : powers) {
        for (const auto& c : pw.coords) {
            mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), c.get_den_mpz_t());
        }
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), pw.error_radius.get_den_mpz_t());
    }
    std::vector<std::vector<mpz_class>> steps;
    for (const auto& pw : powers) {
        std::vector<mpz_class> v;
        for (const auto& c : pw.coords) {
            v.push_back(c.get_num() * (scale / c.get_den()));
        }
        v.push_back(pw.error_radius.get_num() * (scale / pw.error_radius.get_den()));
        steps.push_back(std::move(v));
    }

    struct Node {
        AlgNum y;
        DigitWord path;
        std::vector<mpz_class> offset;
    };
    const AlgNum inv = AlgNum::beta_power(ctx, -1);
    const AlgNum neg_inv = -inv;
    std::vector<Node> level;
    level.push_back({x, {}, std::vector<mpz_class>(dim + 1, mpz_class(0))});
    for (int n = 0; n < depth; ++n) {
        const auto& step_n = steps[static_cast<std::size_t>(n)];
        std::vector<Node> next;
        for (auto& node : level) {
            AlgNum shifted = node.y.mul_beta_pow(-1);
            std::vector<std::pair<int, AlgNum>> kids;
            for (int dg : {-1, 1}) {
                AlgNum y = shifted + (dg < 0 ? neg_inv : inv);
                if (sym.digit_if_inside(y) == dg) {
                    kids.emplace_back(dg, std::move(y));
                }
            }
            if (sym.digit_if_inside(shifted) == 0) {
                kids.emplace_back(0, std::move(shifted));
            }
            for (std::size_t k = 0; k < kids.size(); ++k) {
                const int dg = kids[k].first;
                DigitWord path;
                path.reserve(node.path.size() + 1);
                path.push_back(dg);
                path.insert(path.end(), node.path.begin(), node.path.end());
                std::vector<mpz_class> off = k + 1 == kids.size() ? std::move(node.offset) : node.offset;
                if (dg != 0) {
                    for (std::size_t i = 0; i < dim; ++i) {
                        if (dg > 0) {
                            off[i] += step_n[i];
                        } else {
                            off[i] -= step_n[i];
                        }
                    }
                    off[dim] += step_n[dim];
                }
                next.push_back({std::move(kids[k].second), std::move(path), std::move(off)});
            }
        }
        level = std::move(next);
    }
    std::sort(level.begin(), level.end(), [](const Node& a, const Node& b) { return a.path < b.path; });

    TileApprox t{x, depth, {}, {}, layer_of(x), orbit_cycle(sym, x).expansion};
    t.points.reserve(level.size());
    t.paths.reserve(level.size());
    for (auto& node : level) {
        EmbeddedPoint p = origin;
        for (std::size_t i = 0; i <= dim; ++i) {
            mpq_class q(node.offset[i], scale);
            q.canonicalize();
            (i < dim ? p.coords[i] : p.error_radius) += q;
        }
        t.points.push_back(std::move(p));
        t.paths.push_back(std::move(node.path));
    }
    return t;
}

TileOracle::TileOracle(ContextPtr ctx)
    : ctx_(std::move(ctx)), sym_(TransformSpec::symmetric(ctx_)), points_(periodic_points(ctx_)),
      cap_(50 * ctx_->degree() * ctx_->degree()) {
    for (const auto& y : points_) {
        periods_.push_back(orbit_cycle(sym_, y).period_len);
    }
}

bool TileOracle::prefix_ok(const AlgNum& z, int k) const {
    const AlgNum shift = z.mul_beta_pow(-k);
    for (std::size_t i = 0; i < points_.size(); ++i) {
        AlgNum a = points_[i];
        AlgNum b = a + shift;
        if (!sym_.contains(b)) {
            return false;
        }
        for (std::size_t n = 0; n < periods_[i]; ++n) {
            Step sa = step(sym_, a);
            Step sb = step(sym_, b);
            if (sa.digit != sb.digit) {
                return false;
            }
            a = std::move(sa.next);
            b = std::move(sb.next);
        }
    }
    return true;
}

int TileOracle::find_prefix_k(const AlgNum& z) const {
    if (sign(z) < 0) {
        throw Error(ErrorCode::domain_error, "find_prefix_k needs z >= 0");
    }
    if (!z.is_integral()) {
        throw Error(ErrorCode::not_integral, z.to_string() + " is not in Z[beta]");
    }
    const int d = ctx_->degree();
    for (int k = d * d; k <= cap_; k += d) {
        if (prefix_ok(z, k)) {
            return k;
        }
    }
    throw Error(ErrorCode::budget_error, "no prefix length found up to k = " + std::to_string(cap_));
}

TileSet TileOracle::tiles_containing(const AlgNum& z) const {
    if (sign(z) < 0) {
        TileSet r = tiles_containing(-z);
        for (auto& t : r.tiles) {
            t = -t;
        }
        std::reverse(r.tiles.begin(), r.tiles.end());
        std::reverse(r.multiplicity.begin(), r.multiplicity.end());
        return r;
    }
    TileSet r;
    r.k = find_prefix_k(z);
    const AlgNum shift = z.mul_beta_pow(-r.k);
    std::vector<AlgNum> raw;
    for (const auto& y : points_) {
        AlgNum w = y + shift;
        for (int n = 0; n < r.k; ++n) {
            w = step(sym_, w).next;
        }
        raw.push_back(std::move(w));
    }
    std::sort(raw.begin(), raw.end(), AlgNumLess{});
    for (auto& w : raw) {
        if (!r.tiles.empty() && r.tiles.back() == w) {
            ++r.multiplicity.back();
        } else {
            r.tiles.push_back(std::move(w));
            r.multiplicity.push_back(1);
        }
    }
    return r;
}

int find_prefix_k(const AlgNum& z) {
    return TileOracle(z.context()).find_prefix_k(z);
}

std::vector<AlgNum> tiles_containing(const AlgNum& z) {
    return TileOracle(z.context()).tiles_containing(z).tiles;
}

CoveringReport covering_report(const ContextPtr& ctx, std::size_t n_samples, int coeff_bound, std::uint64_t seed) {
    if (n_samples < 1) {
        throw Error(ErrorCode::invalid_parameter, "need at least one sample");
    }
    const int d = ctx->degree();
    const TileOracle oracle(ctx);
    CoveringReport rep;
    rep.d = d;
    rep.min_count = std::numeric_limits<std::size_t>::max();
    const std::size_t layers = d >= 3 ? static_cast<std::size_t>(d - 1) : 1;
    for (auto& z : sample_lattice_points(ctx, n_samples, coeff_bound, seed)) {
        TileSet ts = oracle.tiles_containing(z);
        CoverSample s{z, std::move(ts.tiles), {}, 0, ts.k, false, true};
        s.raw_count = std::accumulate(ts.multiplicity.begin(), ts.multiplicity.end(), std::size_t{0});
        for (const auto& t : s.tiles) {
            s.layers.push_back(layer_of(t));
        }
        std::sort(s.layers.begin(), s.layers.end());
        std::vector<ResidueClass> distinct = s.layers;
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        s.all_layers = distinct.size() == layers;
        if (s.tiles.size() == layers) {
            s.layer_unique = distinct.size() == s.layers.size();
        }
        const std::size_t count = s.tiles.size();
        ++rep.histogram[count];
        rep.min_count = std::min(rep.min_count, count);
        if (!s.all_layers) {
            rep.failures.push_back("z = " + z.to_string() + ": missing layer");
        }
        if (count < layers) {
            rep.failures.push_back("z = " + z.to_string() + ": only " + std::to_string(count) + " tiles");
        }
        if (!s.layer_unique) {
            rep.failures.push_back("z = " + z.to_string() + ": repeated layer at exact covering");
        }
        rep.samples.push_back(std::move(s));
    }
    return rep;
}

CoveringReport covering_report(int d, std::size_t n_samples, int coeff_bound, std::uint64_t seed) {
    return covering_report(FieldContext::make(d), n_samples, coeff_bound, seed);
}

Witness canonical_witness(const ContextPtr& ctx) {
    const int d = ctx->degree();
    if (d < 3) {
        throw Error(ErrorCode::invalid_parameter, "the witness needs d >= 3");
    }
    Witness w{AlgNum(ctx), {}};
    for (int j = 0; j <= d - 2; ++j) {
        w.z += AlgNum::beta_power(ctx, j * d);
    }
    for (int h = 1; h <= d - 1; ++h) {
        DigitWord period(static_cast<std::size_t>(d - h - 1), 0);
        period.push_back(1);
        period.insert(period.end(), static_cast<std::size_t>(h - 1), 0);
        period.push_back(-1);
        w.expected.push_back({{}, std::move(period)});
    }
    return w;
}

double nearest_point_distance(const TileApprox& tile, const std::vector<double>& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : tile.points) {
        const auto a = q.approx();
        double s = 0;
        for (std::size_t i = 0; i < a.size() && i < p.size(); ++i) {
            s += (a[i] - p[i]) * (a[i] - p[i]);
        }
        best = std::min(best, s);
    }
    return std::sqrt(best);
}

} // namespace bonacci
