#include <catch2/catch_amalgamated.hpp>

#include <deckopt/qlearn.hpp>

#include <cmath>
#include <map>
#include <set>
#include <vector>

using namespace deckopt;

namespace {

DeckVector deck_of(int n, std::initializer_list<int> ids) {
    return DeckVector::from_cards(n, std::vector<int>(ids));
}

ScoredAction naive_best(const MlpParams& theta, const SearchState& s) {
    std::vector<SearchAction> actions = enumerate_actions(s);
    ScoredAction best{actions[0], q_forward(theta, featurize(s, actions[0])), 0};
    for (std::size_t i = 1; i < actions.size(); ++i) {
        double q = q_forward(theta, featurize(s, actions[i]));
        if (q > best.value) best = ScoredAction{actions[i], q, static_cast<int>(i)};
    }
    return best;
}

} // namespace

TEST_CASE("state features: deck bits, opponent bits, scaled step") {
    SearchState s = initial_state(deck_of(4, {0, 2}), deck_of(4, {1, 3}));
    s.t = 1;
    FeatureVector phi = state_features(s);
    REQUIRE(phi.size() == 9);
    CHECK(phi == FeatureVector{1, 0, 1, 0, 0, 1, 0, 1, 0.5});

    // Action features are the successor state's features.
    s.t = 0;
    FeatureVector kept = featurize(s, SearchAction::keep());
    CHECK(kept == FeatureVector{1, 0, 1, 0, 0, 1, 0, 1, 0.5});
    FeatureVector swapped = featurize(s, SearchAction::replace(0, 1));
    CHECK(swapped == FeatureVector{0, 1, 1, 0, 0, 1, 0, 1, 0.5});
}

TEST_CASE("epsilon schedule: linear decay onto a floor") {
    EpsilonSchedule e; // 1.0, -0.0005 per episode, floor 0.2
    CHECK(e.value(0) == 1.0);
    CHECK(e.value(1000) == std::max(0.2, 1.0 - 0.0005 * 1000.0));
    CHECK(e.value(1000) == Catch::Approx(0.5));
    CHECK(e.value(1600) == Catch::Approx(0.2));
    CHECK(e.value(5000) == 0.2);
    CHECK(e.value(1'000'000) == 0.2);
    for (std::int64_t k = 0; k + 1 < 3000; k += 7)
        CHECK(e.value(k) >= e.value(k + 1)); // monotone decay
}

TEST_CASE("fast action scoring matches the naive forward sweep") {
    Rng rng(2718);
    for (int trial = 0; trial < 12; ++trial) {
        int n = 6 + static_cast<int>(rng.below(6));
        int d = 2 + static_cast<int>(rng.below(3));
        MlpParams theta = init_mlp(2 * n + 1, 11, rng.next_u64());
        SearchState s = initial_state(random_deck(n, d, rng.next_u64()),
                                      random_deck(n, d, rng.next_u64()));
        s.t = static_cast<int>(rng.below(d));
        std::uint64_t evals = 0;
        ScoredAction fast = best_action(theta, s, &evals);
        ScoredAction slow = naive_best(theta, s);
        CHECK(fast.value == Catch::Approx(slow.value).margin(1e-9));
        CHECK(fast.index == slow.index);
        CHECK(fast.action == slow.action);
        CHECK(evals == static_cast<std::uint64_t>((n - d) * d + 1));
    }
}

TEST_CASE("action scoring breaks ties toward Keep and validates shape") {
    int n = 6, d = 2;
    MlpParams zero;
    zero.input = 2 * n + 1;
    zero.hidden = 4;
    zero.w1.assign(4 * zero.input, 0.0);
    zero.b1.assign(4, 0.0);
    zero.w2.assign(4, 0.0);
    SearchState s = initial_state(deck_of(n, {0, 1}), deck_of(n, {2, 3}));
    ScoredAction pick = best_action(zero, s);
    CHECK(pick.action.is_keep());
    CHECK(pick.index == 0);

    MlpParams wrong = init_mlp(5, 3, 1);
    CHECK_THROWS_AS(best_action(wrong, s), InvalidArgument);
    s.t = 2;
    MlpParams right = init_mlp(2 * n + 1, 3, 1);
    CHECK_THROWS_AS(best_action(right, s), HorizonExhausted);
}

TEST_CASE("epsilon-greedy selection: greedy at zero, uniform at one") {
    int n = 5, d = 2;
    MlpParams theta = init_mlp(2 * n + 1, 7, 42);
    SearchState s = initial_state(deck_of(n, {0, 3}), deck_of(n, {1, 2}));

    Rng rng(1);
    std::uint64_t evals = 0;
    SearchAction greedy = select_action(theta, s, 0.0, rng, &evals);
    CHECK(greedy == best_action(theta, s).action);
    CHECK(evals == static_cast<std::uint64_t>((n - d) * d + 1));

    // Full exploration touches every action and never queries the network.
    evals = 0;
    Rng explore(2);
    std::set<std::pair<int, int>> seen;
    for (int i = 0; i < 4000; ++i) {
        SearchAction a = select_action(theta, s, 1.0, explore, &evals);
        seen.insert({a.out_card, a.in_card});
    }
    CHECK(evals == 0);
    CHECK(seen.size() == static_cast<std::size_t>((n - d) * d + 1));

    Rng r2(3);
    CHECK_THROWS_AS(select_action(theta, s, -0.1, r2), InvalidArgument);
    CHECK_THROWS_AS(select_action(theta, s, 1.5, r2), InvalidArgument);
}

TEST_CASE("TD error bootstraps from the best successor action, zero at horizon") {
    int n = 6, d = 2;
    MlpParams theta = init_mlp(2 * n + 1, 9, 5);
    SearchState s = initial_state(deck_of(n, {0, 1}), deck_of(n, {4, 5}));

    Transition mid;
    mid.s = s;
    mid.a = SearchAction::replace(0, 2);
    mid.r = 3.25;
    mid.s_next = apply_search_action(s, mid.a);
    std::uint64_t evals = 0;
    double delta = td_error(theta, mid, &evals);
    double q_sa = q_forward(theta, state_features(mid.s_next));
    double boot = naive_best(theta, mid.s_next).value;
    CHECK(delta == Catch::Approx(mid.r + boot - q_sa).margin(1e-12));
    CHECK(evals == 1 + static_cast<std::uint64_t>((n - d) * d + 1));

    Transition last;
    last.s = mid.s_next;
    last.a = SearchAction::keep();
    last.r = 1.5;
    last.s_next = apply_search_action(last.s, last.a); // t == D
    evals = 0;
    double terminal_delta = td_error(theta, last, &evals);
    double q_term = q_forward(theta, state_features(last.s_next));
    CHECK(terminal_delta == Catch::Approx(last.r + 0.0 - q_term).margin(1e-12));
    CHECK(evals == 1);
}

TEST_CASE("tabular learner reaches the known fixed point of a tiny process") {
    // Three cards, decks of two, stub win rates f(110)=0.2 f(101)=0.5
    // f(011)=0.8, reward exp(1 * f). Every deck reaches every other in one
    // replacement, so optimal values close over e^0.2, e^0.5, e^0.8.
    const double e02 = 1.221402758160170;
    const double e05 = 1.648721270700128;
    const double e08 = 2.225540928492468;
    std::map<std::string, double> f = {
        {deck_of(3, {0, 1}).key(), 0.2},
        {deck_of(3, {0, 2}).key(), 0.5},
        {deck_of(3, {1, 2}).key(), 0.8},
    };
    DeckVector x_o = deck_of(3, {0, 1});
    std::vector<DeckVector> decks = {deck_of(3, {0, 1}), deck_of(3, {0, 2}),
                                     deck_of(3, {1, 2})};

    TabularQ table;
    auto sweep = [&](double lr) {
        for (int t : {1, 0}) // deepest first: one pass per depth suffices at lr 1
            for (const DeckVector& x : decks) {
                SearchState s{x, x_o, t};
                for (const SearchAction& a : enumerate_actions(s)) {
                    SearchState s_next = apply_search_action(s, a);
                    double r = std::exp(1.0 * f.at(s_next.x_p.key()));
                    tabular_q_update(table, s, a, r, s_next, lr);
                }
            }
    };
    sweep(1.0);
    std::unordered_map<std::string, double> first_pass = table.values;
    sweep(1.0); // already at the fixed point: nothing may move
    for (const auto& [k, v] : table.values)
        CHECK(v == Catch::Approx(first_pass.at(k)).margin(1e-12));

    for (const DeckVector& x : decks) {
        SearchState s1{x, x_o, 1};
        for (const SearchAction& a : enumerate_actions(s1)) {
            double expected = std::exp(f.at(apply_search_action(s1, a).x_p.key()));
            CHECK(table.get(s1, a) == Catch::Approx(expected).margin(1e-12));
        }
        SearchState s0{x, x_o, 0};
        for (const SearchAction& a : enumerate_actions(s0)) {
            double expected =
                std::exp(f.at(apply_search_action(s0, a).x_p.key())) + e08;
            CHECK(table.get(s0, a) == Catch::Approx(expected).margin(1e-12));
        }
    }
    // Spot-check the frozen constants themselves.
    CHECK(std::exp(0.2) == Catch::Approx(e02).margin(1e-15));
    CHECK(std::exp(0.5) == Catch::Approx(e05).margin(1e-15));
    CHECK(std::exp(0.8) == Catch::Approx(e08).margin(1e-15));

    SearchState terminal{decks[0], x_o, 2};
    CHECK(table.best_next(terminal) == 0.0);
}

TEST_CASE("training is deterministic, counts f-calls exactly and can be observed") {
    CardPool pool = generate_card_pool(11, 12);
    TrainConfig cfg;
    cfg.n = 12;
    cfg.d = 3;
    cfg.hidden = 8;
    cfg.num_matches = 10;
    cfg.batch_size = 16;
    cfg.max_episodes = 30;
    cfg.seed = 123;

    std::vector<std::int64_t> observed;
    TrainResult r1 = train(pool, cfg, [&](std::int64_t ep, const MlpParams&,
                                          const TrainLog&) { observed.push_back(ep); });
    TrainResult r2 = train(pool, cfg);

    CHECK(r1.log.episodes == 30);
    CHECK(r1.log.diverged == false);
    CHECK(r1.theta.w1 == r2.theta.w1);
    CHECK(r1.theta.w2 == r2.theta.w2);
    CHECK(r1.theta.b2 == r2.theta.b2);
    CHECK(r1.log.f_calls == r2.log.f_calls);
    CHECK(r1.log.episode_return == r2.log.episode_return);

    // Keep-reward caching: one evaluation per step minus cache hits.
    CHECK(r1.log.f_calls + r1.log.keep_cache_hits ==
          static_cast<std::uint64_t>(30 * 3));
    CHECK(r1.log.q_evals > 0);
    CHECK(r1.log.episode_return.size() == 30);
    // Batch of 16 first fills after episode 6 (3 inserts per episode).
    CHECK(r1.log.mean_abs_td.size() == 30 - 5);

    REQUIRE(observed.size() == 30);
    CHECK(observed.front() == 0);
    CHECK(observed.back() == 29);

    TrainConfig other = cfg;
    other.seed = 124;
    TrainResult r3 = train(pool, other);
    CHECK(r1.theta.w1 != r3.theta.w1);
}

TEST_CASE("training validates its budget and shape arguments") {
    CardPool pool = generate_card_pool(11, 12);
    TrainConfig cfg;
    cfg.n = 12;
    cfg.d = 3;
    CHECK_THROWS_AS(train(pool, cfg), InvalidArgument); // no budget at all
    cfg.max_episodes = 1;
    cfg.n = 13;
    CHECK_THROWS_AS(train(pool, cfg), InvalidArgument);
    cfg.n = 12;
    cfg.d = 0;
    CHECK_THROWS_AS(train(pool, cfg), InvalidArgument);
    cfg.d = 3;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(train(pool, cfg), InvalidArgument);
    cfg.learning_rate = 1e-4;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(train(pool, cfg), InvalidArgument);

    cfg.batch_size = 64;
    cfg.max_episodes = 0; // an empty budget is legal and does nothing
    TrainResult r = train(pool, cfg);
    CHECK(r.log.episodes == 0);
    CHECK(r.log.f_calls == 0);
}

TEST_CASE("a wall-clock budget stops training on its own") {
    CardPool pool = generate_card_pool(11, 12);
    TrainConfig cfg;
    cfg.n = 12;
    cfg.d = 3;
    cfg.hidden = 8;
    cfg.num_matches = 10;
    cfg.max_episodes = -1;
    cfg.wall_limit_seconds = 0.3;
    cfg.seed = 5;
    TrainResult r = train(pool, cfg);
    CHECK(r.log.episodes >= 1);
    CHECK(r.log.wall_seconds >= 0.3);
}

TEST_CASE("greedy recommendation: eval count, zero simulations, determinism") {
    int n = 12, d = 3;
    MlpParams theta = init_mlp(2 * n + 1, 16, 77);
    DeckVector x_o = random_deck(n, d, std::uint64_t{50});
    DeckVector x_p0 = random_deck(n, d, std::uint64_t{51});

    SolveResult r = solve(theta, x_o, x_p0);
    CHECK(r.log.f_calls == 0);
    CHECK(r.log.q_evals == static_cast<std::uint64_t>(((n - d) * d + 1) * d));
    REQUIRE(r.log.actions.size() == 3);
    CHECK(r.deck.popcount() == d);

    // Replaying the logged actions reproduces the recommended deck.
    SearchState s = initial_state(x_p0, x_o);
    for (const SearchAction& a : r.log.actions) s = apply_search_action(s, a);
    CHECK(s.x_p == r.deck);

    SolveResult again = solve(theta, x_o, x_p0);
    CHECK(again.deck == r.deck);

    SolveResult r1 = solve_from_random(theta, x_o, 99);
    SolveResult r2 = solve_from_random(theta, x_o, 99);
    CHECK(r1.deck == r2.deck);

    MlpParams wrong = init_mlp(5, 3, 1);
    CHECK_THROWS_AS(solve(wrong, x_o, x_p0), InvalidArgument);
}

TEST_CASE("checkpoints round-trip and reject foreign versions") {
    TrainConfig cfg;
    cfg.n = 10;
    cfg.d = 4;
    cfg.hidden = 6;
    cfg.learning_rate = 3e-4;
    cfg.num_matches = 120;
    cfg.epsilon.floor = 0.25;
    cfg.replay.capacity = 512;
    cfg.seed = 31;
    MlpParams theta = init_mlp(2 * cfg.n + 1, cfg.hidden, 8);

    json j = checkpoint_to_json(theta, cfg, 150);
    Checkpoint cp = checkpoint_from_json(j);
    CHECK(cp.theta.w1 == theta.w1);
    CHECK(cp.theta.b2 == theta.b2);
    CHECK(cp.episode_count == 150);
    CHECK(cp.config.n == 10);
    CHECK(cp.config.d == 4);
    CHECK(cp.config.learning_rate == 3e-4);
    CHECK(cp.config.epsilon.floor == 0.25);
    CHECK(cp.config.replay.capacity == 512);

    json wrong_version = j;
    wrong_version["format_version"] = 2;
    CHECK_THROWS_AS(checkpoint_from_json(wrong_version), InvalidArgument);
    json wrong_shape = j;
    wrong_shape["n"] = 11;
    CHECK_THROWS_AS(checkpoint_from_json(wrong_shape), InvalidArgument);

    json log_json = train_log_to_json(TrainLog{});
    CHECK(log_json.at("episodes").get<std::int64_t>() == 0);
    CHECK(log_json.at("diverged").get<bool>() == false);
}
