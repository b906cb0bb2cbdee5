#pragma once
#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "deckopt/cards.hpp"
#include "deckopt/deck.hpp"
#include "deckopt/errors.hpp"
#include "deckopt/rng.hpp"

// Minimal Hearthstone-like rule set: 30 hp heroes, mana ramp 1..10, board
// cap 7, Taunt/Charge keywords, battlecries, fatigue, 60-full-turn limit.
// Everything is deterministic given the match seed; the only randomness is
// the library shuffle.

namespace deckopt {

constexpr int kHeroStartHealth = 30;
constexpr int kManaCapMax = 10;
constexpr int kBoardLimit = 7;
constexpr int kTurnLimit = 60; // full turns (both players moved)

enum class Player : int { P0 = 0, P1 = 1 };

inline Player other(Player p) { return p == Player::P0 ? Player::P1 : Player::P0; }

struct MinionInstance {
    int spec_id = -1;
    int current_attack = 0;
    int current_health = 0;
    bool can_attack_this_turn = false;
};

struct PlayerState {
    int hero_health = kHeroStartHealth;
    int mana_cap = 0;
    int mana_available = 0;
    std::vector<int> hand;    // card ids, draw order
    std::vector<int> library; // card ids, top of the library at the back
    std::vector<MinionInstance> board;
    int fatigue_counter = 0;
};

struct GameState {
    const CardPool* pool = nullptr;
    PlayerState players[2];
    Player active_player = Player::P0;
    Player first_player = Player::P0;
    int turn_number = 1; // full turns, 1-based
    Rng rng_stream{0};

    PlayerState& active() { return players[static_cast<int>(active_player)]; }
    const PlayerState& active() const { return players[static_cast<int>(active_player)]; }
    PlayerState& opponent() { return players[static_cast<int>(other(active_player))]; }
    const PlayerState& opponent() const {
        return players[static_cast<int>(other(active_player))];
    }
    const PlayerState& side(Player p) const { return players[static_cast<int>(p)]; }
};

inline bool hero_dead(const GameState& s, Player p) {
    return s.side(p).hero_health <= 0;
}

inline bool is_terminal(const GameState& s) {
    return hero_dead(s, Player::P0) || hero_dead(s, Player::P1);
}

// ---------------------------------------------------------------------------
// Actions

// Target encoding shared by attacks and targeted effects.
constexpr int kNoTarget = -1;
constexpr int kFaceTarget = -2;      // enemy hero
constexpr int kOwnBoardBase = 100;   // kOwnBoardBase + i = own minion i

struct GameAction {
    enum class Kind { EndTurn, PlayCard, Attack };
    Kind kind = Kind::EndTurn;
    int hand_index = -1; // PlayCard
    int attacker = -1;   // Attack: own board index
    int target = kNoTarget;

    static GameAction end_turn() { return {}; }
    static GameAction play(int hand_index, int target = kNoTarget) {
        GameAction a;
        a.kind = Kind::PlayCard;
        a.hand_index = hand_index;
        a.target = target;
        return a;
    }
    static GameAction attack(int attacker, int target) {
        GameAction a;
        a.kind = Kind::Attack;
        a.attacker = attacker;
        a.target = target;
        return a;
    }
};

namespace detail {

inline bool effect_needs_target(const Effect& e) {
    return e.op == EffectOp::DealDamageAnyMinion;
}

// Targets for DealDamageAnyMinion: enemy board ascending, then own board
// ascending (finishing off a damaged own minion is rarely wise, but the
// greedy scorer decides that, not the rules).
inline void append_minion_targets(const GameState& s, std::vector<int>& out) {
    for (int i = 0; i < static_cast<int>(s.opponent().board.size()); ++i)
        out.push_back(i);
    for (int i = 0; i < static_cast<int>(s.active().board.size()); ++i)
        out.push_back(kOwnBoardBase + i);
}

inline bool enemy_has_taunt(const GameState& s) {
    for (const MinionInstance& m : s.opponent().board)
        if (s.pool->cards[m.spec_id].taunt) return true;
    return false;
}

} // namespace detail

/// All legal actions for the active player, in a fixed order: EndTurn
/// first, then card plays by hand index, then attacks by attacker index.
/// Terminal states have no actions.
inline std::vector<GameAction> legal_game_actions(const GameState& s) {
    std::vector<GameAction> actions;
    if (is_terminal(s)) return actions;
    actions.reserve(16);
    actions.push_back(GameAction::end_turn());

    const PlayerState& me = s.active();
    for (int h = 0; h < static_cast<int>(me.hand.size()); ++h) {
        const CardSpec& card = s.pool->cards[me.hand[h]];
        if (card.cost > me.mana_available) continue;
        if (card.is_minion()) {
            if (static_cast<int>(me.board.size()) >= kBoardLimit) continue;
            if (card.effect && detail::effect_needs_target(*card.effect)) {
                std::vector<int> targets;
                detail::append_minion_targets(s, targets);
                if (targets.empty()) {
                    actions.push_back(GameAction::play(h)); // battlecry fizzles
                } else {
                    for (int t : targets) actions.push_back(GameAction::play(h, t));
                }
            } else {
                actions.push_back(GameAction::play(h));
            }
        } else { // spell
            if (detail::effect_needs_target(*card.effect)) {
                std::vector<int> targets;
                detail::append_minion_targets(s, targets);
                // A targeted spell with no target cannot be played.
                for (int t : targets) actions.push_back(GameAction::play(h, t));
            } else {
                actions.push_back(GameAction::play(h));
            }
        }
    }

    bool taunt_wall = detail::enemy_has_taunt(s);
    for (int a = 0; a < static_cast<int>(me.board.size()); ++a) {
        const MinionInstance& m = me.board[a];
        if (!m.can_attack_this_turn || m.current_attack <= 0) continue;
        const auto& enemy_board = s.opponent().board;
        if (taunt_wall) {
            for (int t = 0; t < static_cast<int>(enemy_board.size()); ++t)
                if (s.pool->cards[enemy_board[t].spec_id].taunt)
                    actions.push_back(GameAction::attack(a, t));
        } else {
            for (int t = 0; t < static_cast<int>(enemy_board.size()); ++t)
                actions.push_back(GameAction::attack(a, t));
            actions.push_back(GameAction::attack(a, kFaceTarget));
        }
    }
    return actions;
}

namespace detail {

inline void sweep_dead(PlayerState& p) {
    p.board.erase(std::remove_if(p.board.begin(), p.board.end(),
                                 [](const MinionInstance& m) {
                                     return m.current_health <= 0;
                                 }),
                  p.board.end());
}

inline void draw_one(PlayerState& p) {
    if (p.library.empty()) {
        p.fatigue_counter += 1;
        p.hero_health -= p.fatigue_counter;
    } else {
        p.hand.push_back(p.library.back());
        p.library.pop_back();
    }
}

inline void begin_turn(GameState& s, Player p) {
    s.active_player = p;
    PlayerState& ps = s.players[static_cast<int>(p)];
    ps.mana_cap = std::min(ps.mana_cap + 1, kManaCapMax);
    ps.mana_available = ps.mana_cap;
    for (MinionInstance& m : ps.board) m.can_attack_this_turn = true;
    draw_one(ps);
}

inline void resolve_effect(GameState& s, const Effect& e, int target) {
    PlayerState& me = s.active();
    PlayerState& foe = s.opponent();
    switch (e.op) {
    case EffectOp::DealDamageFace:
        foe.hero_health -= e.amount;
        break;
    case EffectOp::DealDamageAnyMinion: {
        if (target == kNoTarget) break; // fizzled battlecry
        bool own = target >= kOwnBoardBase;
        PlayerState& side = own ? me : foe;
        int idx = own ? target - kOwnBoardBase : target;
        if (idx < 0 || idx >= static_cast<int>(side.board.size()))
            throw InvalidAction("effect target out of range");
        side.board[idx].current_health -= e.amount;
        sweep_dead(side);
        break;
    }
    case EffectOp::AoeDamageEnemyMinions:
        for (MinionInstance& m : foe.board) m.current_health -= e.amount;
        sweep_dead(foe);
        break;
    case EffectOp::Heal:
        me.hero_health = std::min(me.hero_health + e.amount, kHeroStartHealth);
        break;
    case EffectOp::DrawCards:
        for (int i = 0; i < e.amount; ++i) draw_one(me);
        break;
    case EffectOp::BuffTribe:
        for (MinionInstance& m : me.board)
            if (s.pool->cards[m.spec_id].tribe == e.tribe) {
                m.current_attack += e.attack;
                m.current_health += e.health;
            }
        break;
    }
}

} // namespace detail

/// Pure state transition. Throws InvalidAction if the action is not legal.
inline GameState apply_game_action(const GameState& state, const GameAction& action) {
    if (is_terminal(state)) throw InvalidAction("game is over");
    GameState s = state;
    PlayerState& me = s.active();

    switch (action.kind) {
    case GameAction::Kind::EndTurn: {
        // The full turn completes when the player who moved second ends.
        if (s.active_player != s.first_player) s.turn_number += 1;
        detail::begin_turn(s, other(state.active_player));
        break;
    }
    case GameAction::Kind::PlayCard: {
        if (action.hand_index < 0 ||
            action.hand_index >= static_cast<int>(me.hand.size()))
            throw InvalidAction("hand index out of range");
        const CardSpec& card = s.pool->cards[me.hand[action.hand_index]];
        if (card.cost > me.mana_available) throw InvalidAction("not enough mana");
        me.hand.erase(me.hand.begin() + action.hand_index);
        me.mana_available -= card.cost;
        if (card.is_minion()) {
            if (static_cast<int>(me.board.size()) >= kBoardLimit)
                throw InvalidAction("board is full");
            MinionInstance m;
            m.spec_id = card.id;
            m.current_attack = card.attack;
            m.current_health = card.health;
            m.can_attack_this_turn = card.charge;
            me.board.push_back(m);
            // Battlecry resolves after placement. A targeted battlecry
            // never targets the played minion itself (targets were
            // enumerated against the pre-play boards); BuffTribe does
            // include it.
            if (card.effect) detail::resolve_effect(s, *card.effect, action.target);
        } else {
            detail::resolve_effect(s, *card.effect, action.target);
        }
        break;
    }
    case GameAction::Kind::Attack: {
        if (action.attacker < 0 ||
            action.attacker >= static_cast<int>(me.board.size()))
            throw InvalidAction("attacker index out of range");
        MinionInstance& attacker = me.board[action.attacker];
        if (!attacker.can_attack_this_turn || attacker.current_attack <= 0)
            throw InvalidAction("minion cannot attack");
        PlayerState& foe = s.opponent();
        bool taunt_wall = detail::enemy_has_taunt(s);
        attacker.can_attack_this_turn = false;
        if (action.target == kFaceTarget) {
            if (taunt_wall) throw InvalidAction("must attack a taunt minion");
            foe.hero_health -= attacker.current_attack;
        } else {
            if (action.target < 0 ||
                action.target >= static_cast<int>(foe.board.size()))
                throw InvalidAction("attack target out of range");
            MinionInstance& defender = foe.board[action.target];
            if (taunt_wall && !s.pool->cards[defender.spec_id].taunt)
                throw InvalidAction("must attack a taunt minion");
            defender.current_health -= attacker.current_attack;
            attacker.current_health -= defender.current_attack;
            detail::sweep_dead(foe);
            detail::sweep_dead(me);
        }
        break;
    }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Greedy AI proxy

struct ProxyConfig {
    enum class Kind { GreedyOptimizeMove };
    Kind kind = Kind::GreedyOptimizeMove;
    double w_hp = 1.0;
    double w_board = 1.0;
    double w_hand = 0.5;
};

/// Material-count evaluation from one player's perspective. +inf / -inf
/// when the enemy / own hero is dead.
inline double heuristic_score(const GameState& s, Player perspective,
                              const ProxyConfig& proxy = {}) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    const PlayerState& own = s.side(perspective);
    const PlayerState& enemy = s.side(other(perspective));
    if (enemy.hero_health <= 0 && own.hero_health <= 0) return 0.0;
    if (enemy.hero_health <= 0) return inf;
    if (own.hero_health <= 0) return -inf;

    auto board_material = [](const PlayerState& p) {
        int sum = 0;
        for (const MinionInstance& m : p.board)
            sum += m.current_attack + m.current_health;
        return sum;
    };
    return proxy.w_hp * (own.hero_health - enemy.hero_health) +
           proxy.w_board * (board_material(own) - board_material(enemy)) +
           proxy.w_hand * (static_cast<int>(own.hand.size()) -
                           static_cast<int>(enemy.hand.size()));
}

/// One-step lookahead: pick the action whose successor scores best for the
/// active player. Ties go to the earliest action, so EndTurn (index 0)
/// wins unless something strictly improves on it.
inline GameAction greedy_policy_move(const GameState& s, const ProxyConfig& proxy) {
    if (is_terminal(s)) throw InvalidState("greedy_policy_move: game is over");
    std::vector<GameAction> actions = legal_game_actions(s);
    GameAction best = actions.front();
    double best_score = -std::numeric_limits<double>::infinity();
    bool first = true;
    for (const GameAction& a : actions) {
        GameState next = apply_game_action(s, a);
        double score = heuristic_score(next, s.active_player, proxy);
        if (first || score > best_score) {
            best = a;
            best_score = score;
            first = false;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Match simulation

enum class MatchWinner { P0, P1, Draw };

struct MatchOutcome {
    MatchWinner winner = MatchWinner::Draw;
    int turns_played = 0;
};

inline json action_to_json(const GameAction& a) {
    switch (a.kind) {
    case GameAction::Kind::EndTurn: return json{{"kind", "end_turn"}};
    case GameAction::Kind::PlayCard:
        return json{{"kind", "play"}, {"hand_index", a.hand_index}, {"target", a.target}};
    default:
        return json{{"kind", "attack"}, {"attacker", a.attacker}, {"target", a.target}};
    }
}

/// Optional per-action transcript for debugging, one JSON object per line.
using MatchTranscript = std::vector<json>;

/// Play one full match between deck_p (seat P0) and deck_o (seat P1), both
/// piloted by the greedy proxy. Bit-deterministic given (match_seed,
/// first_player). Libraries hold two copies of every selected card.
inline MatchOutcome simulate_match(const CardPool& pool, const DeckVector& deck_p,
                                   const DeckVector& deck_o,
                                   const std::pair<ProxyConfig, ProxyConfig>& proxies,
                                   std::uint64_t match_seed, Player first_player,
                                   MatchTranscript* transcript = nullptr) {
    for (const DeckVector* d : {&deck_p, &deck_o}) {
        if (d->size() != pool.n_cards)
            throw InvalidArgument("simulate_match: deck length does not match pool");
        if (d->popcount() == 0)
            throw InvalidArgument("simulate_match: empty deck");
    }

    GameState s;
    s.pool = &pool;
    s.first_player = first_player;
    s.rng_stream = Rng(derive_seed(match_seed, "match"));

    for (int seat = 0; seat < 2; ++seat) {
        const DeckVector& deck = seat == 0 ? deck_p : deck_o;
        PlayerState& p = s.players[seat];
        for (int id : deck.card_ids()) {
            p.library.push_back(id);
            p.library.push_back(id); // two copies of every card
        }
        Rng shuffle_rng(derive_seed(match_seed, "library", seat));
        for (int i = static_cast<int>(p.library.size()) - 1; i > 0; --i) {
            int j = static_cast<int>(shuffle_rng.below(i + 1));
            std::swap(p.library[i], p.library[j]);
        }
    }

    // Opening hands: 3 for the first player, 4 for the second.
    PlayerState& first = s.players[static_cast<int>(first_player)];
    PlayerState& second = s.players[static_cast<int>(other(first_player))];
    for (int i = 0; i < 3; ++i) detail::draw_one(first);
    for (int i = 0; i < 4; ++i) detail::draw_one(second);

    detail::begin_turn(s, first_player);

    while (!is_terminal(s)) {
        if (s.turn_number > kTurnLimit)
            return {MatchWinner::Draw, kTurnLimit};
        const ProxyConfig& proxy = s.active_player == Player::P0 ? proxies.first
                                                                 : proxies.second;
        GameAction a = greedy_policy_move(s, proxy);
        if (transcript)
            transcript->push_back(json{{"turn", s.turn_number},
                                       {"player", static_cast<int>(s.active_player)},
                                       {"action", action_to_json(a)},
                                       {"p0_hp", s.players[0].hero_health},
                                       {"p1_hp", s.players[1].hero_health}});
        s = apply_game_action(s, a);
    }

    MatchWinner w = hero_dead(s, Player::P1) ? MatchWinner::P0 : MatchWinner::P1;
    return {w, std::min(s.turn_number, kTurnLimit)};
}

} // namespace deckopt
