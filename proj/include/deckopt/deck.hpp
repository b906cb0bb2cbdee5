#pragma once
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "deckopt/cards.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/rng.hpp"

namespace deckopt {

/// A deck as a binary membership vector over the card pool. A valid deck
/// for problem size (n, d) has length n and exactly d bits set.
class DeckVector {
public:
    DeckVector() = default;
    explicit DeckVector(int n) : bits_(n, 0) {}

    /// Build from explicit card ids.
    static DeckVector from_cards(int n, const std::vector<int>& ids) {
        DeckVector deck(n);
        for (int id : ids) {
            if (id < 0 || id >= n)
                throw InvalidArgument("DeckVector: card id out of range");
            if (deck.bits_[id])
                throw InvalidArgument("DeckVector: duplicate card id");
            deck.bits_[id] = 1;
        }
        return deck;
    }

    int size() const { return static_cast<int>(bits_.size()); }
    bool test(int id) const { return bits_[id] != 0; }
    void set(int id) { bits_[id] = 1; }
    void clear(int id) { bits_[id] = 0; }

    int popcount() const {
        return std::accumulate(bits_.begin(), bits_.end(), 0,
                               [](int acc, std::uint8_t b) { return acc + (b ? 1 : 0); });
    }

    /// Ids of the selected cards, ascending.
    std::vector<int> card_ids() const {
        std::vector<int> ids;
        ids.reserve(16);
        for (int i = 0; i < size(); ++i)
            if (bits_[i]) ids.push_back(i);
        return ids;
    }

    bool operator==(const DeckVector& other) const { return bits_ == other.bits_; }
    bool operator!=(const DeckVector& other) const { return bits_ != other.bits_; }

    /// Lexicographic order on the sorted id lists (used for stable ranking).
    bool operator<(const DeckVector& other) const {
        return card_ids() < other.card_ids();
    }

    /// Compact key for hashing / fitness caches.
    std::string key() const {
        return std::string(reinterpret_cast<const char*>(bits_.data()), bits_.size());
    }

private:
    std::vector<std::uint8_t> bits_;
};

/// Uniform deck without replacement: d of n cards. Deterministic per seed.
inline DeckVector random_deck(int n, int d, std::uint64_t seed) {
    if (d <= 0 || d >= n)
        throw InvalidArgument("random_deck: need 0 < d < n");
    Rng rng(seed);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates: the first d entries are a uniform sample.
    for (int i = 0; i < d; ++i) {
        int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
    }
    DeckVector deck(n);
    for (int i = 0; i < d; ++i) deck.set(idx[i]);
    return deck;
}

inline DeckVector random_deck(int n, int d, Rng& rng) {
    return random_deck(n, d, rng.next_u64());
}

enum class DeckViolation { None, Length, Popcount };

inline const char* to_string(DeckViolation v) {
    switch (v) {
    case DeckViolation::Length: return "length";
    case DeckViolation::Popcount: return "popcount";
    default: return "ok";
    }
}

/// Check the deck constraint set: length n, exactly d cards.
inline DeckViolation validate_deck(const DeckVector& x, int n, int d) {
    if (x.size() != n) return DeckViolation::Length;
    if (x.popcount() != d) return DeckViolation::Popcount;
    return DeckViolation::None;
}

inline bool deck_is_valid(const DeckVector& x, int n, int d) {
    return validate_deck(x, n, d) == DeckViolation::None;
}

/// The specs of the selected cards, ascending id order.
inline std::vector<const CardSpec*> deck_to_cards(const DeckVector& x,
                                                  const CardPool& pool) {
    if (x.size() != pool.n_cards)
        throw InvalidArgument("deck_to_cards: deck length does not match pool");
    std::vector<const CardSpec*> out;
    for (int id : x.card_ids()) out.push_back(&pool.cards[id]);
    return out;
}

inline DeckVector cards_to_deck(int n, const std::vector<const CardSpec*>& cards) {
    std::vector<int> ids;
    ids.reserve(cards.size());
    for (const CardSpec* c : cards) ids.push_back(c->id);
    return DeckVector::from_cards(n, ids);
}

inline json deck_to_json(const DeckVector& x) {
    return json{{"n", x.size()}, {"cards", x.card_ids()}};
}

inline DeckVector deck_from_json(const json& j) {
    return DeckVector::from_cards(j.at("n").get<int>(),
                                  j.at("cards").get<std::vector<int>>());
}

} // namespace deckopt
