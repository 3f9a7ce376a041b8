#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "bonacci/dynamics.hpp"
#include "bonacci/render.hpp"
#include "bonacci/tiling.hpp"
#include "bonacci/verify.hpp"

namespace bonacci {

namespace {

using json = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_check = 1;
constexpr int exit_usage = 2;

struct Common {
    int d = 3;
    int precision = default_precision_bits;
    std::string output;
};

int env_precision() {
    const char* v = std::getenv("BONACCI_PRECISION");
    if (v == nullptr || *v == '\0') {
        return default_precision_bits;
    }
    char* end = nullptr;
    const long bits = std::strtol(v, &end, 10);
    if (*end != '\0' || bits < 64 || bits > 1 << 20) {
        throw Error(ErrorCode::invalid_parameter, std::string("BONACCI_PRECISION must be an integer >= 64, got ") + v);
    }
    return static_cast<int>(bits);
}

json expansion_json(const EventuallyPeriodic& e) {
    return {{"preperiod", e.preperiod}, {"period", e.period}};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error(ErrorCode::invalid_parameter, "cannot write " + path);
    }
    f << text;
}

AlgNum digits_literal(const ContextPtr& ctx, const std::string& word, bool negative) {
    AlgNum x(ctx);
    for (std::size_t i = 0; i < word.size(); ++i) {
        int dg = 0;
        if (word[i] == 'T') {
            dg = -1;
        } else if (word[i] == '0' || word[i] == '1') {
            dg = word[i] - '0';
        } else {
            throw Error(ErrorCode::parse_error, "digit literal may contain only 0, 1 and T");
        }
        x += AlgNum::beta_power(ctx, -static_cast<int>(i + 1)) * mpq_class(dg);
    }
    return negative ? -x : x;
}

int cmd_expand(const Common& c, const std::string& x_text, const std::string& digit_text, bool neg,
               const std::string& kind, std::size_t n, const std::string& format, std::ostream& out) {
    auto ctx = FieldContext::make(c.d, c.precision);
    if (x_text.empty() == digit_text.empty()) {
        throw Error(ErrorCode::invalid_parameter, "give exactly one of --x and --digits");
    }
    const AlgNum x = x_text.empty() ? digits_literal(ctx, digit_text, neg) : parse_algnum(ctx, x_text);
    const TransformSpec spec = kind == "bal" ? TransformSpec::balanced(ctx) : TransformSpec::symmetric(ctx);
    const DigitWord w = expansion(spec, x, n);
    std::optional<OrbitCycle> cyc;
    try {
        cyc = orbit_cycle(spec, x);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::budget_error) {
            throw;
        }
    }
    if (format == "text") {
        std::string s = "x = " + x.to_string() + "\ndigits: " + compact_digits(w) + "\n";
        if (cyc) {
            s += "expansion: ." + compact_digits(cyc->expansion.preperiod) + "(" +
                 compact_digits(cyc->expansion.period) + ")^omega\n";
        }
        emit(s, c.output, out);
        return exit_ok;
    }
    json doc{{"d", c.d}, {"kind", kind}, {"x", x.to_string()}, {"digits", w}, {"compact", compact_digits(w)}};
    if (cyc) {
        doc["preperiod"] = cyc->expansion.preperiod;
        doc["period"] = cyc->expansion.period;
    }
    emit(doc.dump(2) + "\n", c.output, out);
    return exit_ok;
}

int cmd_periodic(const Common& c, std::ostream& out) {
    auto ctx = FieldContext::make(c.d, c.precision);
    const auto sym = TransformSpec::symmetric(ctx);
    json arr = json::array();
    for (const auto& y : periodic_points(ctx)) {
        json item{{"value", y.to_string()}, {"approx", y.approx()},
                  {"expansion", expansion_json(orbit_cycle(sym, y).expansion)}};
        if (c.d >= 3) {
            item["layer"] = layer_of(y).rep;
        }
        arr.push_back(std::move(item));
    }
    emit(arr.dump(2) + "\n", c.output, out);
    return exit_ok;
}

int cmd_tiles_at(const Common& c, const std::string& z_text, std::ostream& out) {
    auto ctx = FieldContext::make(c.d, c.precision);
    const AlgNum z = parse_algnum(ctx, z_text);
    if (!z.is_integral()) {
        throw Error(ErrorCode::not_integral, z.to_string() + " is not in Z[beta]");
    }
    const TileSet ts = TileOracle(ctx).tiles_containing(z);
    const auto sym = TransformSpec::symmetric(ctx);
    json tiles = json::array();
    for (std::size_t i = 0; i < ts.tiles.size(); ++i) {
        const auto& t = ts.tiles[i];
        tiles.push_back({{"base", t.to_string()},
                         {"layer", layer_of(t).rep},
                         {"expansion", expansion_json(orbit_cycle(sym, t).expansion)},
                         {"multiplicity", ts.multiplicity[i]}});
    }
    json doc{{"d", c.d}, {"z", z.to_string()}, {"k", ts.k}, {"count", ts.tiles.size()}, {"tiles", tiles}};
    emit(doc.dump(2) + "\n", c.output, out);
    return exit_ok;
}

int cmd_verify(const Common& c, const std::string& range, const std::string& suite, const VerifyOptions& opts,
               std::ostream& out, std::ostream& err) {
    const auto ds = parse_degree_range(range);
    VerifyOptions o = opts;
    o.precision_bits = c.precision;
    const VerifyReport rep = run_verify(ds, suite, o);
    emit(rep.to_json() + "\n", c.output, out);
    for (const auto& ch : rep.checks) {
        if (ch.status == CheckStatus::fail) {
            err << "FAIL " << ch.suite << "/" << ch.name << " d=" << ch.d << " " << ch.detail << "\n";
        }
    }
    return rep.ok() ? exit_ok : exit_check;
}

struct PlotArgs {
    int depth = 14;
    std::string cut_through;
    double thickness = 0;
    std::string mark;
    int ball = 2;
    int width = 800;
    int height = 800;
    double marker = 1.0;
    bool labels = false;
    std::string format = "svg";
};

int cmd_plot(const Common& c, const PlotArgs& a, std::ostream& out) {
    if (a.depth < 0 || a.ball < 0) {
        throw Error(ErrorCode::invalid_parameter, "depth and ball radius must be nonnegative");
    }
    auto ctx = FieldContext::make(c.d, c.precision);
    const TileOracle oracle(ctx);

    // every base met by tiles_containing(z) for z with coordinates in [-ball, ball]
    std::vector<AlgNum> bases;
    std::vector<int> coord(static_cast<std::size_t>(c.d), -a.ball);
    while (true) {
        const AlgNum z(ctx, std::vector<mpq_class>(coord.begin(), coord.end()));
        for (auto& t : oracle.tiles_containing(z).tiles) {
            bases.push_back(std::move(t));
        }
        std::size_t i = 0;
        while (i < coord.size() && coord[i] == a.ball) {
            coord[i++] = -a.ball;
        }
        if (i == coord.size()) {
            break;
        }
        ++coord[i];
    }
    std::sort(bases.begin(), bases.end(), AlgNumLess{});
    bases.erase(std::unique(bases.begin(), bases.end()), bases.end());

    constexpr int plot_bits = 64;
    PlotSpec spec;
    for (const auto& b : bases) {
        spec.tiles.push_back(tile_approx(b, a.depth, plot_bits));
    }
    if (a.format == "json") {
        emit(export_json(spec.tiles) + "\n", c.output, out);
        return exit_ok;
    }
    spec.width = a.width;
    spec.height = a.height;
    spec.marker_size = a.marker;
    spec.labels = a.labels;
    spec.title = "d=" + std::to_string(c.d) + " tiles, depth " + std::to_string(a.depth);
    if (!a.cut_through.empty()) {
        const auto anchor = embed(parse_algnum(ctx, a.cut_through), plot_bits).approx();
        spec.cut = Cut{anchor, {0, 1}, a.thickness > 0 ? a.thickness : default_cut_thickness(spec.tiles)};
        spec.highlight = anchor;
    } else if (c.d >= 4) {
        spec.projection = true;
    }
    if (!a.mark.empty()) {
        spec.highlight = embed(parse_algnum(ctx, a.mark), plot_bits).approx();
    }
    emit(render_svg(spec), c.output, out);
    return exit_ok;
}

bool usage_error(ErrorCode code) {
    switch (code) {
    case ErrorCode::invalid_parameter:
    case ErrorCode::precision_too_low:
    case ErrorCode::parse_error:
    case ErrorCode::domain_error:
    case ErrorCode::not_integral:
    case ErrorCode::alphabet_mismatch:
    case ErrorCode::spec_error:
    case ErrorCode::empty_plot:
    case ErrorCode::context_mismatch:
        return true;
    default:
        return false;
    }
}

} // namespace

std::vector<int> parse_degree_range(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        if (s.empty() || s.size() > 3 || !std::all_of(s.begin(), s.end(), ::isdigit)) {
            throw Error(ErrorCode::parse_error, "bad degree range '" + text + "'");
        }
        return std::stoi(s);
    };
    std::vector<int> out;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const int lo = to_int(text.substr(0, dots));
        const int hi = to_int(text.substr(dots + 2));
        if (lo > hi) {
            throw Error(ErrorCode::parse_error, "empty degree range '" + text + "'");
        }
        for (int d = lo; d <= hi; ++d) {
            out.push_back(d);
        }
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(to_int(text.substr(start, comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Symmetric beta-expansions of d-Bonacci numbers and their Rauzy-fractal tiles", "bonacci"};
    app.require_subcommand(1);
    Common c;
    c.precision = -1;

    auto common = [&c](CLI::App* sub, bool with_d) {
        if (with_d) {
            sub->add_option("--d", c.d, "degree of the d-Bonacci polynomial")->required()->check(CLI::Range(2, 64));
        }
        sub->add_option("--precision", c.precision, "working precision in bits (env BONACCI_PRECISION)")
            ->check(CLI::Range(64, 1 << 20));
        sub->add_option("--output,-o", c.output, "output file, default stdout");
    };

    std::string x_text, digit_text, kind = "sym", format = "json";
    bool neg = false;
    std::size_t n = 20;
    auto* expand = app.add_subcommand("expand", "digits of a symmetric or balanced expansion");
    common(expand, true);
    expand->add_option("--x", x_text, "element such as \"b^-2 + b^-3\"");
    expand->add_option("--digits", digit_text, "literal .d1d2... with digits 0, 1, T (T = -1)");
    expand->add_flag("--neg", neg, "negate the --digits literal");
    expand->add_option("--kind", kind)->check(CLI::IsMember({"sym", "bal"}));
    expand->add_option("--n", n, "number of digits");
    expand->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));

    auto* periodic = app.add_subcommand("periodic", "the nonzero purely periodic points");
    common(periodic, true);

    std::string z_text;
    auto* tiles_at = app.add_subcommand("tiles-at", "tiles containing the lattice point Phi(z)");
    common(tiles_at, true);
    tiles_at->add_option("--z", z_text, "lattice element")->required();

    std::string range = "3..5", suite = "all";
    VerifyOptions vopts;
    auto* verify = app.add_subcommand("verify", "run the check suites and print a JSON report");
    common(verify, false);
    verify->add_option("--d", range, "degree, range a..b or list a,b");
    verify->add_option("--suite", suite)->check(CLI::IsMember({"all", "periodic", "conjugacy", "measure", "degree",
                                                               "paper-examples"}));
    verify->add_option("--seed", vopts.seed);
    verify->add_option("--samples", vopts.samples)->check(CLI::PositiveNumber);
    verify->add_option("--coeff-bound", vopts.coeff_bound)->check(CLI::PositiveNumber);

    PlotArgs pa;
    auto* plot = app.add_subcommand("plot", "SVG (or JSON) of the tiles around the origin");
    common(plot, true);
    plot->add_option("--depth", pa.depth, "preimage depth");
    plot->add_option("--cut-through", pa.cut_through, "lattice element the slab passes through");
    plot->add_option("--thickness", pa.thickness, "slab half-width, default 2% of the cloud diagonal");
    plot->add_option("--mark", pa.mark, "element whose image is drawn as a cross");
    plot->add_option("--ball", pa.ball, "tiles are collected from z with coordinates in [-ball, ball]");
    plot->add_option("--width", pa.width);
    plot->add_option("--height", pa.height);
    plot->add_option("--marker-size", pa.marker);
    plot->add_flag("--labels", pa.labels, "label tiles with their period word");
    plot->add_option("--format", pa.format)->check(CLI::IsMember({"svg", "json"}));

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (c.precision < 0) {
            c.precision = env_precision();
        }
        if (*expand) {
            return cmd_expand(c, x_text, digit_text, neg, kind, n, format, out);
        }
        if (*periodic) {
            return cmd_periodic(c, out);
        }
        if (*tiles_at) {
            return cmd_tiles_at(c, z_text, out);
        }
        if (*verify) {
            return cmd_verify(c, range, suite, vopts, out, err);
        }
        if (*plot) {
            return cmd_plot(c, pa, out);
        }
    } catch (const Error& e) {
        err << e.what() << "\n";
        return usage_error(e.code()) ? exit_usage : exit_check;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_check;
    }
    return exit_usage;
}

} // namespace bonacci
