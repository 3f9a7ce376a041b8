#include "bonacci/verify.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <json.hpp>

#include "bonacci/automaton.hpp"
#include "bonacci/dynamics.hpp"
#include "bonacci/tiling.hpp"

namespace bonacci {

namespace {

CheckResult make(const char* suite, std::string name, int d, bool ok, std::string detail = {}) {
    return {suite, std::move(name), d, ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)};
}

const char* status_text(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::info: return "info";
    }
    return "fail";
}

// Digits of a string such as "0111011"; 'T' is -1.
DigitWord digits(const std::string& s) {
    DigitWord w;
    for (char ch : s) {
        w.push_back(ch == 'T' ? -1 : ch - '0');
    }
    return w;
}

// +-.0 y_2 ... y_d as an element.
AlgNum point_of(const ContextPtr& ctx, const std::string& word, bool negative) {
    AlgNum x(ctx);
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (word[i] == '1') {
            x += AlgNum::beta_power(ctx, -static_cast<int>(i + 1));
        }
    }
    return negative ? -x : x;
}

} // namespace

bool VerifyReport::ok() const {
    return failed() == 0;
}

std::size_t VerifyReport::failed() const {
    return static_cast<std::size_t>(std::count_if(
        checks.begin(), checks.end(), [](const CheckResult& c) { return c.status == CheckStatus::fail; }));
}

std::string VerifyReport::to_json() const {
    using json = nlohmann::ordered_json;
    json doc;
    doc["ok"] = ok();
    doc["failed"] = failed();
    json arr = json::array();
    for (const auto& c : checks) {
        arr.push_back({{"suite", c.suite},
                       {"name", c.name},
                       {"d", c.d},
                       {"status", status_text(c.status)},
                       {"detail", c.detail}});
    }
    doc["checks"] = std::move(arr);
    return doc.dump(2);
}

const std::vector<std::string>& verify_suites() {
    static const std::vector<std::string> names{"periodic", "conjugacy", "measure", "degree", "paper-examples"};
    return names;
}

bool balanced_runs_ok(const std::vector<int>& word, int d) {
    int run = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        run = (i > 0 && word[i] == word[i - 1]) ? run + 1 : 1;
        if (run > d) {
            return false;
        }
    }
    return true;
}

std::vector<CheckResult> verify_periodic(const ContextPtr& ctx, const VerifyOptions&) {
    const int d = ctx->degree();
    std::vector<CheckResult> out;
    const auto pts = periodic_points(ctx);
    const std::size_t want = (std::size_t{1} << d) - 2;
    out.push_back(make("periodic", "cardinality", d, pts.size() == want,
                       std::to_string(pts.size()) + " points, expected " + std::to_string(want)));
    if (d <= 6) {
        const auto brute = periodic_points_bruteforce(ctx, 4);
        out.push_back(make("periodic", "bruteforce-bound-4", d, brute == pts,
                           std::to_string(brute.size()) + " points found by exhaustive search"));
    }
    const auto sym = TransformSpec::symmetric(ctx);
    bool pure = true;
    for (const auto& y : pts) {
        const auto c = orbit_cycle(sym, y);
        pure = pure && c.preperiod_len == 0 && d % static_cast<int>(c.period_len) == 0;
    }
    out.push_back(make("periodic", "purely-periodic", d, pure));
    return out;
}

std::vector<CheckResult> verify_conjugacy(const ContextPtr& ctx, const VerifyOptions& opts) {
    const int d = ctx->degree();
    const auto sym = TransformSpec::symmetric(ctx);
    const auto bal = TransformSpec::balanced(ctx);
    const auto sym_aut = build_automaton(sym);
    const auto bal_aut = build_automaton(bal);
    const auto xs = sample_domain_points(ctx, opts.samples, opts.coeff_bound, opts.seed);

    std::size_t commute = 0, law = 0, period = 0, admissible = 0, runs = 0, cls = 0;
    for (const auto& x : xs) {
        const AlgNum t = psi(x);
        commute += psi(step(sym, x).next) == step(bal, t).next;
        law += digit_difference_law(x, 60);
        const auto cs = orbit_cycle(sym, x);
        const auto cb = orbit_cycle(bal, t);
        period += cs.period_len == cb.period_len && cs.expansion.purely_periodic() == cb.expansion.purely_periodic();
        const DigitWord ws = expansion(sym, x, 60);
        const DigitWord wb = expansion(bal, t, 60);
        admissible += is_admissible(sym_aut, ws) && is_admissible(bal_aut, wb);
        runs += balanced_runs_ok(wb, d);
        if (d >= 3) {
            const auto c = characterize_class(x);
            cls += c.from_period == c.from_coefficients;
        } else {
            ++cls;
        }
    }
    const std::size_t n = xs.size();
    auto frac = [n](std::size_t k) { return std::to_string(k) + "/" + std::to_string(n); };
    std::vector<CheckResult> out;
    out.push_back(make("conjugacy", "psi-commutes", d, commute == n, frac(commute)));
    out.push_back(make("conjugacy", "digit-differences-60", d, law == n, frac(law)));
    out.push_back(make("conjugacy", "periods-agree", d, period == n, frac(period)));
    out.push_back(make("conjugacy", "automaton-accepts-prefixes", d, admissible == n, frac(admissible)));
    out.push_back(make("conjugacy", "balanced-runs-at-most-d", d, runs == n, frac(runs)));
    out.push_back(make("conjugacy", "class-from-balanced-period", d, cls == n, frac(cls)));

    // congruence classes on unrestricted lattice points
    const auto zs = sample_lattice_points(ctx, 1000, opts.coeff_bound, opts.seed + 1);
    std::set<int> reps;
    bool additive = true, shift = true;
    for (std::size_t i = 0; i < zs.size(); ++i) {
        const auto cz = congruence_class(zs[i]);
        reps.insert(cz.rep);
        const auto& w = zs[(i + 1) % zs.size()];
        additive = additive && congruence_class(zs[i] + w) == make_residue(cz.rep + congruence_class(w).rep, d);
        shift = shift && congruence_class(zs[i].mul_beta_pow(1)) == cz;
    }
    const std::size_t classes = d >= 3 ? static_cast<std::size_t>(d - 1) : 1;
    out.push_back(make("conjugacy", "congruence-class-count", d, reps.size() == classes,
                       std::to_string(reps.size()) + " classes over 1000 elements"));
    out.push_back(make("conjugacy", "congruence-additive", d, additive));
    out.push_back(make("conjugacy", "congruence-beta-invariant", d, shift));
    return out;
}

std::vector<CheckResult> verify_measure(const ContextPtr& ctx, const VerifyOptions&) {
    const int d = ctx->degree();
    std::vector<CheckResult> out;
    out.push_back(make("measure", "invariant-density", d, verify_invariant_measure(ctx)));
    const auto a = build_automaton(TransformSpec::symmetric(ctx));
    const auto b = build_automaton(TransformSpec::balanced(ctx));
    out.push_back(make("measure", "automata-same-shape", d,
                       same_shape(a, b) && a.states().size() == static_cast<std::size_t>(2 * d),
                       std::to_string(a.states().size()) + " states"));
    return out;
}

std::vector<CheckResult> verify_degree(const ContextPtr& ctx, const VerifyOptions& opts) {
    const int d = ctx->degree();
    std::vector<CheckResult> out;
    const TileOracle oracle(ctx);
    if (d >= 3) {
        const Witness w = canonical_witness(ctx);
        const TileSet ts = oracle.tiles_containing(w.z);
        const auto sym = TransformSpec::symmetric(ctx);
        std::set<int> layers;
        bool expansions = ts.tiles.size() == w.expected.size();
        for (const auto& t : ts.tiles) {
            const int h = layer_of(t).rep;
            layers.insert(h);
            expansions = expansions && orbit_cycle(sym, t).expansion == w.expected[static_cast<std::size_t>(h - 1)];
        }
        out.push_back(make("degree", "witness-exact", d, ts.tiles.size() == static_cast<std::size_t>(d - 1),
                           std::to_string(ts.tiles.size()) + " tiles at " + w.z.to_string() + ", k = " +
                               std::to_string(ts.k)));
        out.push_back(make("degree", "witness-expansions", d, expansions));
        out.push_back(make("degree", "witness-one-per-layer", d,
                           layers.size() == ts.tiles.size() && layers.size() == static_cast<std::size_t>(d - 1)));
    }
    const CoveringReport rep = covering_report(ctx, opts.samples, opts.coeff_bound, opts.seed);
    const std::size_t layers = d >= 3 ? static_cast<std::size_t>(d - 1) : 1;
    std::size_t all = 0, enough = 0, unique = 0, exact = 0;
    for (const auto& s : rep.samples) {
        all += s.all_layers;
        enough += s.tiles.size() >= layers;
        unique += s.layer_unique;
        exact += s.tiles.size() == layers;
    }
    const std::size_t n = rep.samples.size();
    auto frac = [n](std::size_t k) { return std::to_string(k) + "/" + std::to_string(n); };
    out.push_back(make("degree", "every-layer-present", d, all == n, frac(all)));
    out.push_back(make("degree", "at-least-d-1-tiles", d, enough == n, frac(enough)));
    out.push_back(make("degree", "one-tile-per-layer-where-exact", d, unique == n, frac(unique)));
    std::string hist;
    for (const auto& [count, freq] : rep.histogram) {
        hist += (hist.empty() ? "" : " ") + std::to_string(count) + ":" + std::to_string(freq);
    }
    out.push_back({"degree", "sample-min-count", d, CheckStatus::info,
                   "min " + std::to_string(rep.min_count) + ", exactly d-1 at " + frac(exact) + "; histogram " +
                       hist});
    return out;
}

std::vector<CheckResult> verify_worked_examples(const VerifyOptions&) {
    std::vector<CheckResult> out;
    auto ctx = FieldContext::make(3);
    const auto sym = TransformSpec::symmetric(ctx);
    const auto bal = TransformSpec::balanced(ctx);

    std::vector<AlgNum> want;
    for (const char* w : {"001", "010", "011"}) {
        want.push_back(point_of(ctx, w, false));
        want.push_back(point_of(ctx, w, true));
    }
    std::sort(want.begin(), want.end(), AlgNumLess{});
    out.push_back(make("paper-examples", "six-periodic-points", 3, periodic_points(ctx) == want));

    {
        const EventuallyPeriodic ex{digits("0111011"), digits("010")};
        const AlgNum x = value_of(ctx, ex);
        const auto cx = orbit_cycle(bal, x);
        const AlgNum y = x + AlgNum::beta_power(ctx, -7);
        const auto cy = orbit_cycle(bal, y);
        const EventuallyPeriodic want_y{digits("1000100101"), digits("100")};
        auto sum = [](const DigitWord& w) { return std::accumulate(w.begin(), w.end(), 0); };
        const bool ok = cx.expansion == ex && cy.expansion == want_y && sum(cx.expansion.period) == 1 &&
                        sum(cy.expansion.period) == 1;
        out.push_back(make("paper-examples", "balanced-addition-of-beta^-7", 3, ok,
                           compact_digits(cy.expansion.preperiod) + "(" + compact_digits(cy.expansion.period) +
                               ")"));
    }

    {
        const AlgNum z = parse_algnum(ctx, "1 + b^3");
        // rows y -> (t, x): t = E_B(psi(y + b^-9 z)), x = T^9(y + b^-9 z)
        struct Row {
            const char* y;
            bool neg;
            const char* t_pre;
            const char* t_per;
            const char* x_per;
        };
        const Row rows[] = {{"001", false, "001010101", "001", "01T"}, {"010", false, "010011101", "001", "01T"},
                            {"011", false, "011101010", "011", "10T"}, {"001", true, "111001010", "011", "10T"},
                            {"010", true, "110001010", "011", "10T"},  {"011", true, "100110001", "001", "01T"}};
        bool ok = true;
        std::string bad;
        for (const auto& r : rows) {
            const AlgNum w = point_of(ctx, r.y, r.neg) + z.mul_beta_pow(-9);
            const auto ct = orbit_cycle(bal, psi(w)).expansion;
            AlgNum x = w;
            for (int n = 0; n < 9; ++n) {
                x = step(sym, x).next;
            }
            const auto cxs = orbit_cycle(sym, x).expansion;
            const bool row_ok = ct == EventuallyPeriodic{digits(r.t_pre), digits(r.t_per)}.canonical() &&
                                cxs == EventuallyPeriodic{{}, digits(r.x_per)};
            if (!row_ok) {
                bad += std::string(r.neg ? "-" : "") + "." + r.y + " ";
            }
            ok = ok && row_ok;
        }
        out.push_back(make("paper-examples", "witness-table-d3", 3, ok, bad));

        const auto tiles = tiles_containing(z);
        bool named = tiles.size() == 2;
        std::set<int> layers;
        for (const auto& t : tiles) {
            layers.insert(layer_of(t).rep);
            const auto e = orbit_cycle(sym, t).expansion;
            named = named && (e == EventuallyPeriodic{{}, {0, 1, -1}} || e == EventuallyPeriodic{{}, {1, 0, -1}});
        }
        out.push_back(make("paper-examples", "two-tiles-at-1+b^3", 3, named && layers == std::set<int>{1, 2}));
    }

    {
        auto c4 = FieldContext::make(4);
        const auto tiles = tiles_containing(parse_algnum(c4, "1 + b^4 + b^8"));
        std::set<int> layers;
        for (const auto& t : tiles) {
            layers.insert(layer_of(t).rep);
        }
        out.push_back(make("paper-examples", "three-tiles-at-1+b^4+b^8", 4,
                           tiles.size() == 3 && layers == std::set<int>{1, 2, 3}));
    }

    {
        const auto c = characterize_class(-AlgNum::beta_power(ctx, -3));
        out.push_back(make("paper-examples", "class-of--b^-3", 3,
                           c.from_period.rep == 1 && c.from_coefficients.rep == 1 && c.period_sum == 1,
                           "balanced period " + compact_digits(c.balanced_expansion.period)));
    }

    {
        const auto e1 = orbit_cycle(sym, point_of(ctx, "011", false)).expansion;
        const auto e2 = orbit_cycle(sym, point_of(ctx, "001", false)).expansion;
        out.push_back(make("paper-examples", "periodic-expansions-d3", 3,
                           e1.period == DigitWord{1, 0, -1} && e2.period == DigitWord{0, 1, -1}));
    }
    return out;
}

VerifyReport run_verify(const std::vector<int>& ds, const std::string& suite, const VerifyOptions& opts) {
    const auto& names = verify_suites();
    if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
        throw Error(ErrorCode::invalid_parameter, "unknown suite '" + suite + "'");
    }
    for (int d : ds) {
        if (d < 2 || d > 64) {
            throw Error(ErrorCode::invalid_parameter, "d must lie in 2..64");
        }
    }
    if (opts.samples < 1 || opts.coeff_bound < 1) {
        throw Error(ErrorCode::invalid_parameter, "samples and coefficient bound must be positive");
    }
    auto wanted = [&](const char* s) { return suite == "all" || suite == s; };
    VerifyReport rep;
    auto add = [&rep](std::vector<CheckResult> r) { rep.checks.insert(rep.checks.end(), r.begin(), r.end()); };
    for (int d : ds) {
        auto ctx = FieldContext::make(d, opts.precision_bits);
        if (wanted("periodic")) {
            add(verify_periodic(ctx, opts));
        }
        if (wanted("conjugacy")) {
            add(verify_conjugacy(ctx, opts));
        }
        if (wanted("measure")) {
            add(verify_measure(ctx, opts));
        }
        if (wanted("degree")) {
            add(verify_degree(ctx, opts));
        }
    }
    if (wanted("paper-examples")) {
        add(verify_worked_examples(opts));
    }
    return rep;
}

} // namespace bonacci
