#include <catch2/catch_amalgamated.hpp>

#include <deckopt/mdp.hpp>

#include <cmath>
#include <set>

using namespace deckopt;

namespace {

DeckVector deck_of(int n, std::initializer_list<int> ids) {
    return DeckVector::from_cards(n, std::vector<int>(ids));
}

} // namespace

TEST_CASE("initial state validation") {
    DeckVector a = deck_of(6, {0, 1, 2});
    DeckVector b = deck_of(6, {3, 4, 5});
    SearchState s = initial_state(a, b);
    CHECK(s.t == 0);
    CHECK(search_horizon(s) == 3);
    CHECK_THROWS_AS(initial_state(a, deck_of(6, {0, 1})), InvalidArgument);
    CHECK_THROWS_AS(initial_state(a, deck_of(7, {0, 1, 2})), InvalidArgument);
    CHECK_THROWS_AS(initial_state(DeckVector(6), DeckVector(6)), InvalidArgument);
}

TEST_CASE("action enumeration: count, order and horizon") {
    SearchState s = initial_state(deck_of(6, {1, 3, 4}), deck_of(6, {0, 2, 5}));
    std::vector<SearchAction> actions = enumerate_actions(s);
    REQUIRE(actions.size() == 1 + (6 - 3) * 3);
    CHECK(actions[0].is_keep());
    // Ascending (out, in): out runs over deck cards, in over the complement.
    CHECK(actions[1] == SearchAction::replace(1, 0));
    CHECK(actions[2] == SearchAction::replace(1, 2));
    CHECK(actions[3] == SearchAction::replace(1, 5));
    CHECK(actions[4] == SearchAction::replace(3, 0));
    CHECK(actions.back() == SearchAction::replace(4, 5));

    std::set<std::pair<int, int>> unique;
    for (std::size_t i = 1; i < actions.size(); ++i)
        unique.insert({actions[i].out_card, actions[i].in_card});
    CHECK(unique.size() == actions.size() - 1);

    s.t = 3;
    CHECK_THROWS_AS(enumerate_actions(s), HorizonExhausted);
}

TEST_CASE("applying actions: keep, replace and error cases") {
    SearchState s = initial_state(deck_of(6, {1, 3, 4}), deck_of(6, {0, 2, 5}));

    SearchState kept = apply_search_action(s, SearchAction::keep());
    CHECK(kept.x_p == s.x_p);
    CHECK(kept.t == 1);
    CHECK(kept.x_o == s.x_o);

    SearchState swapped = apply_search_action(s, SearchAction::replace(3, 0));
    CHECK(swapped.t == 1);
    CHECK(swapped.x_p == deck_of(6, {0, 1, 4}));
    CHECK(swapped.x_p.popcount() == 3);
    CHECK(s.x_p == deck_of(6, {1, 3, 4})); // input untouched

    CHECK_THROWS_AS(apply_search_action(s, SearchAction::replace(0, 2)), InvalidAction);
    CHECK_THROWS_AS(apply_search_action(s, SearchAction::replace(1, 3)), InvalidAction);

    s.t = 3;
    CHECK_THROWS_AS(apply_search_action(s, SearchAction::keep()), HorizonExhausted);
}

TEST_CASE("every legal action keeps the deck size fixed across a whole episode") {
    SearchState s = initial_state(deck_of(8, {0, 1, 2, 3}), deck_of(8, {4, 5, 6, 7}));
    Rng rng(17);
    while (s.t < search_horizon(s)) {
        std::vector<SearchAction> actions = enumerate_actions(s);
        s = apply_search_action(s, actions[rng.below(actions.size())]);
        CHECK(s.x_p.popcount() == 4);
    }
    CHECK_THROWS_AS(enumerate_actions(s), HorizonExhausted);
}

TEST_CASE("step reward is the exponentially amplified win rate") {
    CardPool pool = generate_card_pool(3, 12);
    Evaluator f(pool, ProxyConfig{}, ProxyConfig{}, 20, 1);
    RewardConfig cfg;
    cfg.b = 10.0;
    cfg.episode_seed = 404;

    SearchState s_next = initial_state(deck_of(12, {0, 1, 2}), deck_of(12, {3, 4, 5}));
    CHECK_THROWS_AS(step_reward(s_next, cfg, f), InvalidArgument); // t == 0
    s_next.t = 2;

    double r = step_reward(s_next, cfg, f);
    std::uint64_t expected_seed = derive_seed(cfg.episode_seed, "reward", 1);
    double fval = evaluate_win_rate(pool, s_next.x_p, s_next.x_o,
                                    {ProxyConfig{}, ProxyConfig{}}, 20, expected_seed)
                      .value;
    CHECK(r == Catch::Approx(std::exp(10.0 * fval)).epsilon(1e-12));
    CHECK(f.calls() == 1); // the throw above did not evaluate

    cfg.b = 1.0;
    CHECK(step_reward(s_next, cfg, f) == Catch::Approx(std::exp(fval)).epsilon(1e-12));
    CHECK(f.calls() == 2);
}

TEST_CASE("episode return is the plain sum of exactly D rewards") {
    CHECK(episode_return({1.0, 2.5, 4.0}, 3) == Catch::Approx(7.5));
    CHECK_THROWS_AS(episode_return({1.0, 2.0}, 3), InvalidArgument);
    CHECK_THROWS_AS(episode_return({}, 1), InvalidArgument);
}

TEST_CASE("states and transitions survive a JSON round trip") {
    SearchState s = initial_state(deck_of(10, {0, 4, 9}), deck_of(10, {1, 2, 3}));
    s.t = 2;
    CHECK(search_state_from_json(search_state_to_json(s)) == s);

    Transition tr;
    tr.s = s;
    tr.a = SearchAction::replace(4, 7);
    tr.r = 123.456;
    tr.s_next = apply_search_action(s, tr.a);
    Transition back = transition_from_json(transition_to_json(tr));
    CHECK(back.s == tr.s);
    CHECK(back.a == tr.a);
    CHECK(back.r == tr.r);
    CHECK(back.s_next == tr.s_next);

    Transition keep;
    keep.s = s;
    keep.a = SearchAction::keep();
    keep.s_next = apply_search_action(s, keep.a);
    Transition kept = transition_from_json(transition_to_json(keep));
    CHECK(kept.a.is_keep());
}
