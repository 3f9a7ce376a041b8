#include <algorithm>
#include <set>
#include <utility>

#include "bonacci/automaton.hpp"

namespace bonacci {

IntervalAutomaton::IntervalAutomaton(TransformSpec spec, std::vector<AutomatonState> states,
                                     std::vector<Transition> transitions)
    : spec_(std::move(spec)), states_(std::move(states)), transitions_(std::move(transitions)) {}

std::vector<std::size_t> IntervalAutomaton::targets(std::size_t state, int digit) const {
    std::vector<std::size_t> out;
    for (const auto& t : transitions_) {
        if (t.from == state && t.digit == digit) {
            out.push_back(t.to);
        }
    }
    return out;
}

std::vector<std::size_t> IntervalAutomaton::successors(std::size_t state) const {
    std::vector<std::size_t> out;
    for (const auto& t : transitions_) {
        if (t.from == state) {
            out.push_back(t.to);
        }
    }
    return out;
}

std::optional<std::size_t> IntervalAutomaton::state_of_label(int label) const {
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (states_[i].label == label) {
            return i;
        }
    }
    return std::nullopt;
}

std::size_t IntervalAutomaton::classify(const AlgNum& x) const {
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (states_[i].piece.contains(x)) {
            return i;
        }
    }
    throw Error(ErrorCode::domain_error, x.to_string() + " lies in no automaton state");
}

std::vector<AlgNum> left_orbit(const ContextPtr& ctx) {
    const TransformSpec sym = TransformSpec::symmetric(ctx);
    std::vector<AlgNum> orbit;
    AlgNum cur = AlgNum::rational(ctx, mpq_class(-1, 2));
    for (int k = 1; k <= ctx->degree(); ++k) {
        cur = step(sym, cur).next;
        orbit.push_back(cur);
    }
    return orbit;
}

namespace {

struct Piece {
    int label;
    Interval iv;
};

std::vector<Piece> symmetric_pieces(const ContextPtr& ctx) {
    const int d = ctx->degree();
    const std::vector<AlgNum> orbit = left_orbit(ctx); // orbit[k-1] = T^k l
    const AlgNum half = AlgNum::rational(ctx, mpq_class(1, 2));
    std::vector<Piece> pieces;
    for (int k = d; k >= 1; --k) {
        const AlgNum lo = (k == d) ? -half : -orbit[static_cast<std::size_t>(k)];
        pieces.push_back({-k, {lo, -orbit[static_cast<std::size_t>(k - 1)]}});
    }
    for (int k = 1; k <= d; ++k) {
        const AlgNum hi = (k == d) ? half : orbit[static_cast<std::size_t>(k)];
        pieces.push_back({k, {orbit[static_cast<std::size_t>(k - 1)], hi}});
    }
    return pieces;
}

std::vector<Piece> balanced_pieces(const ContextPtr& ctx) {
    const TransformSpec sym = TransformSpec::symmetric(ctx);
    const AlgNum one = AlgNum::integer(ctx, 1);
    const AlgNum inv = (AlgNum::beta_power(ctx, 1) - one).inverse();
    std::vector<Piece> pieces;
    for (const auto& p : symmetric_pieces(ctx)) {
        // psi is affine on each half of X_S; the open right end uses the
        // branch of the left end.
        const bool right_half = sym.domain()[1].contains(p.iv.lo);
        auto branch = [&](const AlgNum& v) { return right_half ? v * inv : (v + one) * inv; };
        pieces.push_back({p.label, {branch(p.iv.lo), branch(p.iv.hi)}});
    }
    return pieces;
}

// Points where the digit function jumps.
std::vector<AlgNum> digit_boundaries(const TransformSpec& spec) {
    const auto& ctx = spec.context();
    if (spec.kind() == TransformKind::balanced) {
        const AlgNum b = AlgNum::beta_power(ctx, 1);
        return {(b * mpq_class(2) - AlgNum::integer(ctx, 2)).inverse()};
    }
    const AlgNum half_over_beta = AlgNum::beta_power(ctx, -1) * mpq_class(1, 2);
    return {-half_over_beta, half_over_beta};
}

} // namespace

IntervalAutomaton build_automaton(const TransformSpec& spec) {
    const auto& ctx = spec.context();
    std::vector<Piece> pieces =
        spec.kind() == TransformKind::symmetric ? symmetric_pieces(ctx) : balanced_pieces(ctx);

    // Split wherever a digit boundary falls strictly inside a piece.
    for (const AlgNum& b : digit_boundaries(spec)) {
        std::vector<Piece> split;
        for (auto& p : pieces) {
            if (compare(p.iv.lo, b) < 0 && compare(b, p.iv.hi) < 0) {
                split.push_back({p.label, {p.iv.lo, b}});
                split.push_back({p.label, {b, p.iv.hi}});
            } else {
                split.push_back(p);
            }
        }
        pieces = std::move(split);
    }

    std::vector<AutomatonState> states;
    for (const auto& p : pieces) {
        if (compare(p.iv.lo, p.iv.hi) >= 0) {
            throw Error(ErrorCode::construction_error, "empty partition piece " + std::to_string(p.label));
        }
        if (!spec.contains(p.iv.lo)) {
            throw Error(ErrorCode::construction_error, "partition piece leaves the domain");
        }
        states.push_back({p.label, p.iv, spec.digit(p.iv.lo)});
    }
    std::sort(states.begin(), states.end(),
              [](const AutomatonState& a, const AutomatonState& b) { return compare(a.piece.lo, b.piece.lo) < 0; });
    for (std::size_t i = 0; i + 1 < states.size(); ++i) {
        if (compare(states[i].piece.hi, states[i + 1].piece.lo) > 0) {
            throw Error(ErrorCode::construction_error, "partition pieces overlap");
        }
    }

    std::vector<Transition> transitions;
    for (std::size_t s = 0; s < states.size(); ++s) {
        const auto& st = states[s];
        const AlgNum shift = AlgNum::integer(ctx, st.digit);
        const AlgNum img_lo = st.piece.lo.mul_beta_pow(1) - shift;
        const AlgNum img_hi = st.piece.hi.mul_beta_pow(1) - shift;
        // The image must be exactly a run of consecutive states.
        std::size_t first = states.size();
        for (std::size_t t = 0; t < states.size(); ++t) {
            if (states[t].piece.lo == img_lo) {
                first = t;
                break;
            }
        }
        if (first == states.size()) {
            throw Error(ErrorCode::construction_error,
                        "image of state " + std::to_string(st.label) + " does not start at a state boundary");
        }
        std::size_t t = first;
        while (true) {
            transitions.push_back({s, st.digit, t});
            if (states[t].piece.hi == img_hi) {
                break;
            }
            if (t + 1 == states.size() || states[t].piece.hi != states[t + 1].piece.lo) {
                throw Error(ErrorCode::construction_error,
                            "image of state " + std::to_string(st.label) + " is not a union of states");
            }
            ++t;
        }
    }
    return IntervalAutomaton(spec, std::move(states), std::move(transitions));
}

bool is_admissible(const IntervalAutomaton& aut, const DigitWord& word) {
    for (int dg : word) {
        if (!aut.spec().in_alphabet(dg)) {
            throw Error(ErrorCode::alphabet_mismatch, "digit " + std::to_string(dg) + " is not in the alphabet");
        }
    }
    const std::size_t n = aut.states().size();
    std::vector<bool> current(n, true);
    for (int dg : word) {
        std::vector<bool> next(n, false);
        bool any = false;
        for (const auto& t : aut.transitions()) {
            if (current[t.from] && t.digit == dg) {
                next[t.to] = true;
                any = true;
            }
        }
        if (!any) {
            return false;
        }
        current = std::move(next);
    }
    return true;
}

bool same_shape(const IntervalAutomaton& a, const IntervalAutomaton& b) {
    auto shape = [](const IntervalAutomaton& aut) {
        std::set<std::pair<int, int>> edges;
        for (const auto& t : aut.transitions()) {
            edges.emplace(aut.states()[t.from].label, aut.states()[t.to].label);
        }
        return edges;
    };
    return a.states().size() == b.states().size() && shape(a) == shape(b);
}

} // namespace bonacci
