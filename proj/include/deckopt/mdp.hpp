#pragma once
#include <cmath>
#include <cstdint>
#include <vector>

#include "deckopt/deck.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/evaluate.hpp"

// The deck-search decision process: a state is (player deck, opponent deck,
// step counter), an action replaces one card or keeps the deck, and an
// episode takes exactly D actions, enough to rewrite the whole deck.

namespace deckopt {

struct SearchState {
    DeckVector x_p;
    DeckVector x_o;
    int t = 0;

    bool operator==(const SearchState&) const = default;
};

/// Horizon of the episode: the deck size D.
inline int search_horizon(const SearchState& s) { return s.x_p.popcount(); }

struct SearchAction {
    int out_card = -1; // card leaving the deck; -1 for Keep
    int in_card = -1;  // card entering the deck; -1 for Keep

    bool is_keep() const { return out_card < 0; }
    static SearchAction keep() { return {}; }
    static SearchAction replace(int out, int in) { return {out, in}; }

    bool operator==(const SearchAction&) const = default;
};

struct Transition {
    SearchState s;
    SearchAction a;
    double r = 0.0;
    SearchState s_next;
};

/// Reward shaping parameters; the per-step evaluation seeds are derived
/// from the episode seed and the step index so training is reproducible.
struct RewardConfig {
    double b = 10.0; // exponential amplification constant
    std::uint64_t episode_seed = 0;
};

inline SearchState initial_state(const DeckVector& x_p0, const DeckVector& x_o) {
    if (x_p0.size() != x_o.size())
        throw InvalidArgument("initial_state: deck lengths differ");
    int d = x_p0.popcount();
    if (d == 0 || x_o.popcount() != d)
        throw InvalidArgument("initial_state: decks must have the same nonzero size");
    return SearchState{x_p0, x_o, 0};
}

/// All (N-D)*D + 1 actions: Keep first, then every (out, in) pair in
/// ascending (out, in) order.
inline std::vector<SearchAction> enumerate_actions(const SearchState& s) {
    int d = search_horizon(s);
    if (s.t >= d) throw HorizonExhausted("enumerate_actions: t == D");
    int n = s.x_p.size();
    std::vector<SearchAction> actions;
    actions.reserve(static_cast<std::size_t>(n - d) * d + 1);
    actions.push_back(SearchAction::keep());
    std::vector<int> in_deck = s.x_p.card_ids();
    for (int out : in_deck)
        for (int in = 0; in < n; ++in)
            if (!s.x_p.test(in)) actions.push_back(SearchAction::replace(out, in));
    return actions;
}

inline SearchState apply_search_action(const SearchState& s, const SearchAction& a) {
    if (s.t >= search_horizon(s))
        throw HorizonExhausted("apply_search_action: t == D");
    SearchState next = s;
    next.t += 1;
    if (!a.is_keep()) {
        if (!s.x_p.test(a.out_card))
            throw InvalidAction("apply_search_action: out card not in deck");
        if (s.x_p.test(a.in_card))
            throw InvalidAction("apply_search_action: in card already in deck");
        next.x_p.clear(a.out_card);
        next.x_p.set(a.in_card);
    }
    return next;
}

/// Exponentially amplified reward for arriving at s_next: exp(b * f).
inline double step_reward(const SearchState& s_next, const RewardConfig& cfg,
                          const Evaluator& evaluate) {
    if (s_next.t < 1)
        throw InvalidArgument("step_reward: s_next must be a successor state");
    std::uint64_t seed = derive_seed(cfg.episode_seed, "reward", s_next.t - 1);
    double f = evaluate(s_next.x_p, s_next.x_o, seed).value;
    return std::exp(cfg.b * f);
}

/// Undiscounted episode return over exactly D step rewards.
inline double episode_return(const std::vector<double>& rewards, int d) {
    if (static_cast<int>(rewards.size()) != d)
        throw InvalidArgument("episode_return: need exactly D rewards");
    double sum = 0.0;
    for (double r : rewards) sum += r;
    return sum;
}

// ---------------------------------------------------------------------------
// JSON lines for replay persistence / offline inspection

inline json search_state_to_json(const SearchState& s) {
    return json{{"x_p", s.x_p.card_ids()}, {"x_o", s.x_o.card_ids()},
                {"n", s.x_p.size()}, {"t", s.t}};
}

inline SearchState search_state_from_json(const json& j) {
    int n = j.at("n").get<int>();
    SearchState s;
    s.x_p = DeckVector::from_cards(n, j.at("x_p").get<std::vector<int>>());
    s.x_o = DeckVector::from_cards(n, j.at("x_o").get<std::vector<int>>());
    s.t = j.at("t").get<int>();
    return s;
}

inline json transition_to_json(const Transition& tr) {
    json a = tr.a.is_keep() ? json{{"keep", true}}
                            : json{{"out", tr.a.out_card}, {"in", tr.a.in_card}};
    return json{{"s", search_state_to_json(tr.s)}, {"a", a}, {"r", tr.r},
                {"s_next", search_state_to_json(tr.s_next)}};
}

inline Transition transition_from_json(const json& j) {
    Transition tr;
    tr.s = search_state_from_json(j.at("s"));
    tr.s_next = search_state_from_json(j.at("s_next"));
    tr.r = j.at("r").get<double>();
    const json& a = j.at("a");
    tr.a = a.contains("keep") ? SearchAction::keep()
                              : SearchAction::replace(a.at("out").get<int>(),
                                                      a.at("in").get<int>());
    return tr;
}

} // namespace deckopt
