#pragma once
#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "deckopt/errors.hpp"
#include "deckopt/json_util.hpp"
#include "deckopt/rng.hpp"

namespace deckopt {

enum class CardKind { Minion, Spell };

enum class Tribe { None, A, B, C };

enum class EffectOp {
    DealDamageFace,        // hit the enemy hero
    DealDamageAnyMinion,   // hit one minion on either board
    AoeDamageEnemyMinions, // hit every enemy minion
    Heal,                  // heal own hero (capped at 30)
    DrawCards,
    BuffTribe,             // +attack/+health to own minions of a tribe
};

struct Effect {
    EffectOp op;
    int amount = 0; // damage / heal / cards drawn
    int attack = 0; // BuffTribe only
    int health = 0; // BuffTribe only
    Tribe tribe = Tribe::None;
};

/// Immutable card definition. Spells carry their effect; minions may carry
/// a battlecry effect that resolves when played.
struct CardSpec {
    int id = 0;
    CardKind kind = CardKind::Minion;
    int cost = 1; // mana, 1..10
    int attack = 0;
    int health = 0;
    Tribe tribe = Tribe::None;
    bool taunt = false;
    bool charge = false;
    std::optional<Effect> effect;

    bool is_minion() const { return kind == CardKind::Minion; }
};

struct CardPool {
    std::uint64_t seed = 0;
    int n_cards = 0;
    std::vector<CardSpec> cards;
};

namespace detail {

inline Effect make_spell_effect(Rng& rng, int cost) {
    auto jitter = [&](int base) {
        return std::max(1, base + static_cast<int>(rng.below(3)) - 1);
    };
    Effect e;
    switch (rng.below(5)) {
    case 0:
        e.op = EffectOp::DealDamageFace;
        e.amount = jitter(cost);
        break;
    case 1:
        e.op = EffectOp::DealDamageAnyMinion;
        e.amount = jitter(cost + 1);
        break;
    case 2:
        e.op = EffectOp::AoeDamageEnemyMinions;
        e.amount = jitter((cost + 1) / 2);
        break;
    case 3:
        e.op = EffectOp::Heal;
        e.amount = jitter(2 * cost);
        break;
    default:
        e.op = EffectOp::DrawCards;
        e.amount = std::min(3, std::max(1, cost / 2));
        break;
    }
    return e;
}

inline Effect make_buff_effect(Rng& rng, int cost) {
    Effect e;
    e.op = EffectOp::BuffTribe;
    e.tribe = static_cast<Tribe>(1 + rng.below(3));
    e.attack = std::max(1, (cost + 1) / 2);
    e.health = std::max(1, static_cast<int>(rng.below(2)) + cost / 2);
    return e;
}

inline void roll_minion_stats(Rng& rng, CardSpec& c) {
    int budget = 2 * c.cost + 1 + static_cast<int>(rng.below(5)) - 2;
    c.attack = static_cast<int>(rng.below(static_cast<std::uint64_t>(budget)));
    c.health = budget - c.attack;
}

} // namespace detail

/// Procedurally generate a card pool. Bit-identical for the same (seed, n).
inline CardPool generate_card_pool(std::uint64_t seed, int n_cards) {
    if (n_cards < 10)
        throw InvalidArgument("generate_card_pool: n_cards must be >= 10");

    CardPool pool;
    pool.seed = seed;
    pool.n_cards = n_cards;
    pool.cards.reserve(n_cards);

    Rng rng(derive_seed(seed, "card_pool", static_cast<std::uint64_t>(n_cards)));

    for (int i = 0; i < n_cards; ++i) {
        CardSpec c;
        c.id = i;
        // First ten cards take costs 1..10 so every cost is represented.
        c.cost = i < 10 ? i + 1 : 1 + static_cast<int>(rng.below(10));

        bool synergy = rng.chance(0.10);
        bool spell = synergy ? rng.chance(0.5) : rng.chance(0.25);

        if (spell) {
            c.kind = CardKind::Spell;
            c.effect = synergy ? detail::make_buff_effect(rng, c.cost)
                               : detail::make_spell_effect(rng, c.cost);
        } else {
            c.kind = CardKind::Minion;
            detail::roll_minion_stats(rng, c);
            if (rng.chance(0.45))
                c.tribe = static_cast<Tribe>(1 + rng.below(3));
            if (rng.chance(0.15)) {
                if (rng.chance(0.5)) c.taunt = true;
                else c.charge = true;
            }
            if (synergy)
                c.effect = detail::make_buff_effect(rng, c.cost);
            else if (rng.chance(0.25))
                c.effect = detail::make_spell_effect(rng, std::max(1, c.cost / 2));
        }
        pool.cards.push_back(c);
    }

    // Pools of 30+ must offer at least one buff card per tribe. Rewrite
    // cards from the tail into buff spells, keeping their cost.
    if (n_cards >= 30) {
        int patch_at = n_cards - 1;
        for (Tribe t : {Tribe::A, Tribe::B, Tribe::C}) {
            bool found = false;
            for (const CardSpec& c : pool.cards)
                if (c.effect && c.effect->op == EffectOp::BuffTribe &&
                    c.effect->tribe == t) {
                    found = true;
                    break;
                }
            if (found) continue;
            while (pool.cards[patch_at].effect &&
                   pool.cards[patch_at].effect->op == EffectOp::BuffTribe)
                --patch_at;
            CardSpec& c = pool.cards[patch_at--];
            c.kind = CardKind::Spell;
            c.attack = c.health = 0;
            c.tribe = Tribe::None;
            c.taunt = c.charge = false;
            Effect e;
            e.op = EffectOp::BuffTribe;
            e.tribe = t;
            e.attack = std::max(1, (c.cost + 1) / 2);
            e.health = std::max(1, c.cost / 2);
            c.effect = e;
        }
    }
    return pool;
}

// ---------------------------------------------------------------------------
// JSON (schema: {seed, n_cards, cards:[{id,kind,cost,attack,health,tribe,
//                keywords,effect}]})

inline std::string to_string(Tribe t) {
    switch (t) {
    case Tribe::A: return "A";
    case Tribe::B: return "B";
    case Tribe::C: return "C";
    default: return "none";
    }
}

inline Tribe tribe_from_string(const std::string& s) {
    if (s == "A") return Tribe::A;
    if (s == "B") return Tribe::B;
    if (s == "C") return Tribe::C;
    if (s == "none") return Tribe::None;
    throw IoError("unknown tribe: " + s);
}

inline std::string to_string(EffectOp op) {
    switch (op) {
    case EffectOp::DealDamageFace: return "deal_damage_face";
    case EffectOp::DealDamageAnyMinion: return "deal_damage_any_minion";
    case EffectOp::AoeDamageEnemyMinions: return "aoe_damage_enemy_minions";
    case EffectOp::Heal: return "heal";
    case EffectOp::DrawCards: return "draw_cards";
    default: return "buff_tribe";
    }
}

inline EffectOp effect_op_from_string(const std::string& s) {
    if (s == "deal_damage_face") return EffectOp::DealDamageFace;
    if (s == "deal_damage_any_minion") return EffectOp::DealDamageAnyMinion;
    if (s == "aoe_damage_enemy_minions") return EffectOp::AoeDamageEnemyMinions;
    if (s == "heal") return EffectOp::Heal;
    if (s == "draw_cards") return EffectOp::DrawCards;
    if (s == "buff_tribe") return EffectOp::BuffTribe;
    throw IoError("unknown effect op: " + s);
}

inline json effect_to_json(const Effect& e) {
    json j{{"op", to_string(e.op)}};
    if (e.op == EffectOp::BuffTribe) {
        j["tribe"] = to_string(e.tribe);
        j["attack"] = e.attack;
        j["health"] = e.health;
    } else {
        j["amount"] = e.amount;
    }
    return j;
}

inline Effect effect_from_json(const json& j) {
    Effect e;
    e.op = effect_op_from_string(j.at("op").get<std::string>());
    if (e.op == EffectOp::BuffTribe) {
        e.tribe = tribe_from_string(j.at("tribe").get<std::string>());
        e.attack = j.at("attack").get<int>();
        e.health = j.at("health").get<int>();
        if (e.attack < 1 || e.health < 1)
            throw IoError("buff magnitudes must be >= 1");
    } else {
        e.amount = j.at("amount").get<int>();
        if (e.amount < 1) throw IoError("effect magnitude must be >= 1");
    }
    return e;
}

inline json pool_to_json(const CardPool& pool) {
    json cards = json::array();
    for (const CardSpec& c : pool.cards) {
        json keywords = json::array();
        if (c.taunt) keywords.push_back("taunt");
        if (c.charge) keywords.push_back("charge");
        json jc{{"id", c.id},
                {"kind", c.is_minion() ? "minion" : "spell"},
                {"cost", c.cost},
                {"attack", c.attack},
                {"health", c.health},
                {"tribe", to_string(c.tribe)},
                {"keywords", keywords},
                {"effect", c.effect ? effect_to_json(*c.effect) : json(nullptr)}};
        cards.push_back(std::move(jc));
    }
    return json{{"seed", pool.seed}, {"n_cards", pool.n_cards}, {"cards", cards}};
}

inline CardPool pool_from_json(const json& j) {
    CardPool pool;
    pool.seed = j.at("seed").get<std::uint64_t>();
    pool.n_cards = j.at("n_cards").get<int>();
    const json& cards = j.at("cards");
    if (static_cast<int>(cards.size()) != pool.n_cards)
        throw IoError("pool card count does not match n_cards");
    std::vector<bool> seen(pool.n_cards, false);
    for (const json& jc : cards) {
        CardSpec c;
        c.id = jc.at("id").get<int>();
        if (c.id < 0 || c.id >= pool.n_cards || seen[c.id])
            throw IoError("bad or duplicate card id");
        seen[c.id] = true;
        std::string kind = jc.at("kind").get<std::string>();
        if (kind == "minion") c.kind = CardKind::Minion;
        else if (kind == "spell") c.kind = CardKind::Spell;
        else throw IoError("unknown card kind: " + kind);
        c.cost = jc.at("cost").get<int>();
        if (c.cost < 1 || c.cost > 10) throw IoError("cost out of range");
        c.attack = jc.at("attack").get<int>();
        c.health = jc.at("health").get<int>();
        c.tribe = tribe_from_string(jc.at("tribe").get<std::string>());
        for (const json& k : jc.at("keywords")) {
            std::string kw = k.get<std::string>();
            if (kw == "taunt") c.taunt = true;
            else if (kw == "charge") c.charge = true;
            else throw IoError("unknown keyword: " + kw);
        }
        if (!jc.at("effect").is_null()) c.effect = effect_from_json(jc.at("effect"));
        if (c.is_minion() && c.attack + c.health < 1)
            throw IoError("minion stats too low");
        if (!c.is_minion() && !c.effect)
            throw IoError("spell without an effect");
        pool.cards.push_back(std::move(c));
    }
    std::sort(pool.cards.begin(), pool.cards.end(),
              [](const CardSpec& a, const CardSpec& b) { return a.id < b.id; });
    return pool;
}

} // namespace deckopt
