// Plays one scripted match between two random decks and prints every move,
// showing what the win-rate evaluator is built on.

#include <cstdio>
#include <deckopt/deckopt.hpp>

using namespace deckopt;

int main() {
    CardPool pool = generate_card_pool(7, 40);
    DeckVector deck_a = random_deck(40, 8, 100);
    DeckVector deck_b = random_deck(40, 8, 200);

    MatchTranscript transcript;
    MatchOutcome outcome = simulate_match(pool, deck_a, deck_b,
                                          {ProxyConfig{}, ProxyConfig{}}, 1234,
                                          Player::P0, &transcript);

    for (const json& event : transcript) std::printf("%s\n", event.dump().c_str());
    const char* result = outcome.winner == MatchWinner::P0   ? "first deck wins"
                         : outcome.winner == MatchWinner::P1 ? "second deck wins"
                                                             : "draw";
    std::printf("\n%s after %d turns\n", result, outcome.turns_played);
    return 0;
}
