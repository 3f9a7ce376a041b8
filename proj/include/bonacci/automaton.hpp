#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bonacci/dynamics.hpp"

namespace bonacci {

/// One piece of the partition. For the symmetric map the pieces are
/// Y_{+-k}, k = 1..d, cut at the orbit points of -1/2; for the balanced map
/// they are the psi-images U_{+-k}.
struct AutomatonState {
    int label = 0;  // +-k
    Interval piece; // half-open
    int digit = 0;  // constant digit on the piece
};

struct Transition {
    std::size_t from;
    int digit;
    std::size_t to;
};

/// Admissibility automaton read off the interval partition: each state maps
/// affinely onto a union of states, and a word is admissible iff some path
/// reads it.
class IntervalAutomaton {
  public:
    IntervalAutomaton(TransformSpec spec, std::vector<AutomatonState> states, std::vector<Transition> transitions);

    const TransformSpec& spec() const noexcept { return spec_; }
    const std::vector<AutomatonState>& states() const noexcept { return states_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }

    /// Target states of (state, digit); empty if no such edge.
    std::vector<std::size_t> targets(std::size_t state, int digit) const;
    /// Successors of a state over all digits.
    std::vector<std::size_t> successors(std::size_t state) const;
    std::optional<std::size_t> state_of_label(int label) const;
    /// State whose piece contains x; domain_error if none.
    std::size_t classify(const AlgNum& x) const;

  private:
    TransformSpec spec_;
    std::vector<AutomatonState> states_;
    std::vector<Transition> transitions_;
};

/// Builds the automaton and checks that every piece maps exactly onto a
/// union of pieces; construction_error otherwise.
IntervalAutomaton build_automaton(const TransformSpec& spec);

/// Word readable from some state; alphabet_mismatch for foreign digits.
bool is_admissible(const IntervalAutomaton& aut, const DigitWord& word);

/// Same transition shape under the label pairing Y_k <-> U_k.
bool same_shape(const IntervalAutomaton& a, const IntervalAutomaton& b);

/// Left endpoints of Y_1..Y_d: the orbit points T_S^k(-1/2), k = 1..d.
std::vector<AlgNum> left_orbit(const ContextPtr& ctx);

} // namespace bonacci
