#include <catch2/catch_amalgamated.hpp>

#include <deckopt/cards.hpp>
#include <deckopt/errors.hpp>

using namespace deckopt;

TEST_CASE("pool generation is deterministic per seed") {
    CardPool a = generate_card_pool(7, 40);
    CardPool b = generate_card_pool(7, 40);
    CardPool c = generate_card_pool(8, 40);
    REQUIRE(a.cards.size() == 40);
    CHECK(pool_to_json(a) == pool_to_json(b));
    CHECK(pool_to_json(a) != pool_to_json(c));
}

TEST_CASE("pool rejects tiny sizes") {
    CHECK_THROWS_AS(generate_card_pool(1, 5), InvalidArgument);
    CHECK_THROWS_AS(generate_card_pool(1, 9), InvalidArgument);
    CHECK_NOTHROW(generate_card_pool(1, 10));
}

TEST_CASE("first ten cards ladder the mana costs") {
    CardPool pool = generate_card_pool(3, 25);
    for (int i = 0; i < 10; ++i) CHECK(pool.cards[i].cost == i + 1);
}

TEST_CASE("card ids are positional and stats are sane") {
    CardPool pool = generate_card_pool(5, 60);
    for (int i = 0; i < 60; ++i) {
        const CardSpec& c = pool.cards[i];
        CHECK(c.id == i);
        CHECK(c.cost >= 1);
        CHECK(c.cost <= 10);
        if (c.is_minion()) {
            CHECK(c.attack >= 0);
            CHECK(c.health >= 1);
        } else {
            REQUIRE(c.effect.has_value());
        }
    }
}

TEST_CASE("pools mix minions, spells and keywords") {
    CardPool pool = generate_card_pool(7, 60);
    int minions = 0, spells = 0, keyworded = 0, effects = 0;
    for (const CardSpec& c : pool.cards) {
        if (c.is_minion()) ++minions; else ++spells;
        if (c.taunt || c.charge) ++keyworded;
        if (c.effect) ++effects;
    }
    CHECK(minions > 30);
    CHECK(spells > 5);
    CHECK(keyworded > 0);
    CHECK(effects > 5);
}

TEST_CASE("pool JSON round-trips") {
    CardPool pool = generate_card_pool(11, 30);
    CardPool back = pool_from_json(pool_to_json(pool));
    CHECK(pool_to_json(back) == pool_to_json(pool));
}

TEST_CASE("pool JSON validation rejects corruption") {
    json j = pool_to_json(generate_card_pool(11, 30));
    json wrong_count = j;
    wrong_count["n_cards"] = 29;
    CHECK_THROWS_AS(pool_from_json(wrong_count), IoError);
    json bad_cost = j;
    bad_cost["cards"][0]["cost"] = 99;
    CHECK_THROWS_AS(pool_from_json(bad_cost), IoError);
    json bad_id = j;
    bad_id["cards"][1]["id"] = 0;
    CHECK_THROWS_AS(pool_from_json(bad_id), IoError);
}
