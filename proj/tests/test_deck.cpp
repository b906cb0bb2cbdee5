#include <catch2/catch_amalgamated.hpp>

#include <deckopt/deck.hpp>
#include <deckopt/errors.hpp>

#include <map>

using namespace deckopt;

TEST_CASE("DeckVector basics") {
    DeckVector x(6);
    CHECK(x.size() == 6);
    CHECK(x.popcount() == 0);
    x.set(1);
    x.set(4);
    CHECK(x.popcount() == 2);
    CHECK(x.test(1));
    CHECK_FALSE(x.test(2));
    CHECK(x.card_ids() == std::vector<int>{1, 4});
    x.clear(1);
    CHECK(x.card_ids() == std::vector<int>{4});
}

TEST_CASE("from_cards validates ids") {
    CHECK(DeckVector::from_cards(5, {0, 3}).popcount() == 2);
    CHECK_THROWS_AS(DeckVector::from_cards(5, {0, 5}), InvalidArgument);
    CHECK_THROWS_AS(DeckVector::from_cards(5, {-1}), InvalidArgument);
    CHECK_THROWS_AS(DeckVector::from_cards(5, {2, 2}), InvalidArgument);
}

TEST_CASE("deck validation reports the violation kind") {
    DeckVector good = DeckVector::from_cards(8, {0, 1, 2});
    CHECK(validate_deck(good, 8, 3) == DeckViolation::None);
    CHECK(deck_is_valid(good, 8, 3));
    CHECK(validate_deck(good, 9, 3) == DeckViolation::Length);
    CHECK(validate_deck(good, 8, 4) == DeckViolation::Popcount);
    CHECK_FALSE(deck_is_valid(good, 8, 4));
}

TEST_CASE("random_deck draws valid decks with every card reachable") {
    std::map<int, int> hits;
    const int draws = 20000;
    Rng rng(5);
    for (int i = 0; i < draws; ++i) {
        DeckVector x = random_deck(10, 3, rng);
        REQUIRE(x.popcount() == 3);
        for (int id : x.card_ids()) ++hits[id];
    }
    // Each card should appear with frequency near d/n = 0.3.
    for (int id = 0; id < 10; ++id) {
        double freq = static_cast<double>(hits[id]) / draws;
        CHECK(freq > 0.27);
        CHECK(freq < 0.33);
    }
}

TEST_CASE("random_deck rejects impossible shapes") {
    CHECK_THROWS_AS(random_deck(5, 0, std::uint64_t{1}), InvalidArgument);
    CHECK_THROWS_AS(random_deck(5, 5, std::uint64_t{1}), InvalidArgument);
    CHECK_THROWS_AS(random_deck(5, 6, std::uint64_t{1}), InvalidArgument);
}

TEST_CASE("random_deck is deterministic per seed") {
    CHECK(random_deck(40, 8, std::uint64_t{9}) == random_deck(40, 8, std::uint64_t{9}));
    CHECK(random_deck(40, 8, std::uint64_t{9}) != random_deck(40, 8, std::uint64_t{10}));
}

TEST_CASE("deck ordering is lexicographic on card lists") {
    DeckVector a = DeckVector::from_cards(6, {0, 1});
    DeckVector b = DeckVector::from_cards(6, {0, 2});
    DeckVector c = DeckVector::from_cards(6, {1, 2});
    CHECK(a < b);
    CHECK(b < c);
    CHECK_FALSE(c < a);
}

TEST_CASE("deck keys are unique per bit pattern") {
    DeckVector a = DeckVector::from_cards(6, {0, 1});
    DeckVector b = DeckVector::from_cards(6, {0, 2});
    CHECK(a.key() != b.key());
    CHECK(a.key() == DeckVector::from_cards(6, {1, 0}).key());
}

TEST_CASE("deck JSON round-trips") {
    DeckVector x = DeckVector::from_cards(12, {2, 5, 11});
    CHECK(deck_from_json(deck_to_json(x)) == x);
}
